"""Recursively Nesting Sub-Parsers Action for Typed Argument Parsing.

The `actions` module contains the `SubParsersAction` class, which nests the
namespace of a subcommand into its parent namespace under the subcommand's
name instead of merging the two.
"""


# Standard
import argparse

# Typing
from typing import Any, List, Optional, Sequence, Union, cast


class SubParsersAction(argparse._SubParsersAction):
    """Recursively Nesting Sub-Parsers Action for Typed Argument Parsing.

    Example:
        Parse the Arguments:
        ```console
        faltertide eval-disc --model m.json --formula f.tla
        ```

        Check Resultant Namespaces:
        ```python
        Original: Namespace(model="m.json", formula="f.tla")
        Custom:   Namespace(**{"eval-disc": Namespace(model="m.json", formula="f.tla")})
        ```

    The nested namespace maps directly onto the command model, where exactly
    one subcommand field is set.
    """

    def __call__(
        self,
        parser: argparse.ArgumentParser,
        namespace: argparse.Namespace,
        values: Union[str, Sequence[Any], None],
        option_string: Optional[str] = None,
    ) -> None:
        """Parses arguments into a namespace with the specified subparser.

        Args:
            parser (argparse.ArgumentParser): Parent argument parser object.
            namespace (argparse.Namespace): Parent namespace being parsed to.
            values (Union[str, Sequence[Any], None]): Arguments to parse.
            option_string (Optional[str]): Optional option string (not used).

        Raises:
            argparse.ArgumentError: Raised if subparser name does not exist.
        """
        # Only ever a list of strings here; the signature matches the base class
        values = cast(List[str], values)
        (parser_name, *arg_strings) = values

        try:
            parser = self._name_parser_map[parser_name]
        except KeyError as exc:
            raise argparse.ArgumentError(
                self,
                f"unknown command {parser_name} (choices: {', '.join(self._name_parser_map)})",
            ) from exc

        subnamespace, arg_strings = parser.parse_known_args(arg_strings)
        setattr(namespace, parser_name, subnamespace)

        # Leave unrecognized options to the top level parser
        if arg_strings:
            vars(namespace).setdefault(argparse._UNRECOGNIZED_ARGS_ATTR, [])
            getattr(namespace, argparse._UNRECOGNIZED_ARGS_ATTR).extend(arg_strings)
