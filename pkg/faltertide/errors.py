"""Exception Hierarchy for the Evaluation Engine.

The `errors` module contains every exception raised by `faltertide`. All of
them derive from `FaltertideError`, so a caller can catch the whole family at
once. Errors caused by user input derive from `InputError`, which optionally
carries the source name and the line/column the problem was found at; the CLI
turns any `InputError` into exit status 3 with a positioned diagnostic.
"""


# Typing
from typing import Optional


class FaltertideError(Exception):
    """Base class for all `faltertide` errors."""


class InputError(FaltertideError):
    """Malformed user input, optionally positioned.

    Attributes:
        message (str): Human readable description of the problem.
        source (Optional[str]): Name of the file or argument being read.
        line (Optional[int]): One-based line number.
        column (Optional[int]): One-based column number.
    """

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        """Instantiates the error.

        Args:
            message (str): Human readable description of the problem.
            source (Optional[str]): Name of the file or argument being read.
            line (Optional[int]): One-based line number.
            column (Optional[int]): One-based column number.
        """
        super().__init__(message)
        self.message = message
        self.source = source
        self.line = line
        self.column = column

    @property
    def position(self) -> Optional[str]:
        """Formatted `line:column` position, if known."""
        if self.line is None:
            return None
        return f"{self.line}:{self.column if self.column is not None else 0}"

    def located(self, source: str) -> "InputError":
        """Returns this error with its source name filled in."""
        if self.source is None:
            self.source = source
        return self

    def __str__(self) -> str:
        """Renders `source:line:column: message`, skipping unknown parts."""
        prefix = ":".join(part for part in (self.source, self.position) if part)
        return f"{prefix}: {self.message}" if prefix else self.message


class ParseError(InputError):
    """Lexical or syntactic error in a formula, time set or S-expression."""


class ArityError(InputError):
    """Function or relation applied to the wrong number of arguments."""


class UnknownSymbolError(InputError):
    """Reference to a function or relation symbol missing from the signature."""


class UnboundVariableError(InputError):
    """Variable that is neither bound nor declared."""


class PrimeError(InputError):
    """Primed variable outside of an action."""


class ModelError(InputError):
    """Invalid model file or interpretation tables."""


class TraceError(InputError):
    """Invalid trace, trace query or trace combination."""


class ReparamError(InputError):
    """Invalid reparameterization."""


class TimeSetError(FaltertideError, ValueError):
    """Invalid interval or time-set query."""


class HolError(FaltertideError):
    """Base class for errors of the higher-order logic kernel."""


class HolTypeError(HolError):
    """Ill-typed higher-order term or ill-formed context."""


class HolSyntaxError(HolError, InputError):
    """Malformed S-expression, term, judgment or derivation."""
