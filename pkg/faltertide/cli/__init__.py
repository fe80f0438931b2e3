"""Command-Line Interface of `faltertide`.

The `cli` package contains the typed `ArgumentParser`, the subcommand models
and their implementations, and the `main` entry point installed as the
`faltertide` script.
"""


# Standard
import logging
import sys

# Third-Party
import pydantic
import pydantic_settings

# Local
from .. import __version__
from ..errors import FaltertideError
from . import utils
from .commands import COMMANDS, Cli, RunConfig, Settings
from .parser import ArgumentParser

# Typing
from typing import List, Optional


# Constants
LOG_FORMAT = "%(asctime)s.%(msecs)03d [%(levelname)-8s] (%(name)-11s): %(message)s"
LOG_DATE_FORMAT = "%Y%m%dT%H%M%S"


def build_parser() -> ArgumentParser[Cli]:
    """The `faltertide` argument parser."""
    return ArgumentParser(
        model=Cli,
        prog="faltertide",
        description="Evaluate TLA formulas on discrete and continuous traces, and check HOL derivations.",
        version=f"faltertide {__version__}",
    )


def main(args: Optional[List[str]] = None) -> int:
    """Runs one subcommand.

    Args:
        args (Optional[List[str]]): Arguments, `sys.argv` if not given.

    Returns:
        int: Exit status of the subcommand. Input errors exit with status 3
            through the parser.
    """
    parser = build_parser()
    cli = parser.parse_typed_args(args)

    try:
        settings = Settings()
    except pydantic.ValidationError as exc:
        parser.error(f"environment: {utils.format_error(exc)}")
    except pydantic_settings.SettingsError as exc:
        parser.error(f"environment: {exc}")

    try:
        (name, command) = cli.selected()
        cfg = RunConfig.resolve(name, command, settings)
    except pydantic.ValidationError as exc:
        parser.error(utils.format_error(exc))
    except FaltertideError as exc:
        parser.error(str(exc))

    logging.basicConfig(
        level=logging.DEBUG if cfg.verbose else logging.WARNING,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    logging.getLogger(__name__).debug("running %s", name)

    try:
        return COMMANDS[name](cfg)
    except pydantic.ValidationError as exc:
        parser.error(utils.format_error(exc))
    except FaltertideError as exc:
        parser.error(str(exc))


# Public Re-Exports
__all__ = (
    "ArgumentParser",
    "Cli",
    "RunConfig",
    "Settings",
    "build_parser",
    "main",
)
