"""Runs the `faltertide` command-line interface with `python -m faltertide`."""


# Standard
import sys

# Local
from .cli import main


if __name__ == "__main__":
    sys.exit(main())
