"""Configures Testing and Defines Pytest Fixtures.

The `conftest.py` file serves as a means of providing fixtures for an entire
directory. Fixtures defined in a `conftest.py` can be used by any test in the
package without needing to import them.

Besides the fixtures, this module provides factories for throwaway `pydantic`
models and fields, a small command model for the parser tests, and helpers
building states, behaviors and traces over the shipped `pair` model.
"""


# Standard
import argparse
import pathlib

# Third-Party
import hypothesis
import pydantic
import pytest

# Local
from faltertide.cli import actions
from faltertide.cli.commands import DATA, DEFAULT_MODEL
from faltertide.interp import Interpretation, Signature
from faltertide.models import load_model
from faltertide.syntax import Formula, parse
from faltertide.traces import ContTrace, DiscreteBehavior, State

# Typing
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type


# Constants
MODELS = DATA / "models"
TRACES = DATA / "traces"
LASSOS = DATA / "lassos"
CONTROLS = DATA / "controls"
DERIVATIONS = DATA / "derivations"

# Property tests replay the same examples on every run
hypothesis.settings.register_profile("faltertide", derandomize=True, deadline=None)
hypothesis.settings.load_profile("faltertide")


def create_test_model(
    name: str = "test",
    base: Type[pydantic.BaseModel] = pydantic.BaseModel,
    **fields: Tuple[Type[Any], Any],
) -> Any:
    """Constructs a `pydantic` model with sensible defaults for testing.

    This function returns `Any` instead of `Type[pydantic.BaseModel]` because
    we cannot accurately type the dynamically constructed fields on the
    resultant model. As such, it is more convenient to work with the `Any` type
    in the unit tests.

    Args:
        name (str): Name of the model.
        base (Type[pydantic.BaseModel]): Base class for the model.
        fields (Tuple[Type[Any], Any]): Model fields as `name=(type, default)`.

    Returns:
        Any: Dynamically constructed `pydantic` model.
    """
    # Construct Pydantic Model
    return pydantic.create_model(
        name,
        __base__=base,
        **fields,  # type: ignore[call-overload]
    )


def create_test_field(
    name: str = "test",
    type_: Type[Any] = str,
    default: Any = ...,
    description: Optional[str] = None,
) -> pydantic.fields.FieldInfo:
    """Construct a `pydantic` FieldInfo with sensible defaults for testing.

    Args:
        name (str): Name used to construct an internal throwaway model.
        type_ (Type[Any]): Annotation/type for the field.
        default (Any): Default value for the field. Use `...` for required.
        description (Optional[str]): Description for the field.

    Returns:
        pydantic.fields.FieldInfo: The constructed FieldInfo instance.
    """
    # Create a throwaway dynamic model with a single field named `value`
    DynamicModel = pydantic.create_model(
        f"TestFieldModel_{name}",
        value=(type_, pydantic.Field(default, description=description, alias=name)),
        __base__=pydantic.BaseModel,
    )

    # Pydantic v2: fields live on `model_fields`
    return DynamicModel.model_fields["value"]


def create_test_subparser(
    name: str = "test",
    parser_class: Type[argparse.ArgumentParser] = argparse.ArgumentParser,
) -> actions.SubParsersAction:
    """Constructs a `SubParsersAction` with sensible defaults for testing.

    Args:
        name (str): Name of the action.
        parser_class (Type[argparse.ArgumentParser]): Parser for the action.

    Returns:
        actions.SubParsersAction: Dynamically constructed `SubParsersAction`.
    """
    # Construct SubParsersAction
    return actions.SubParsersAction(
        option_strings=[],  # Always empty for the `SubParsersAction`
        prog=name,
        parser_class=parser_class,
    )


class TestCommand(pydantic.BaseModel):
    """Test Command Model for Testing."""

    flag: bool = pydantic.Field(False, description="flag")
    bound: Optional[int] = pydantic.Field(None, ge=0, description="bound")


class TestModel(pydantic.BaseModel):
    """Test Model for Testing."""

    # -------------------------------------------------------------------------
    # Commands
    # -------------------------------------------------------------------------
    first: Optional[TestCommand] = pydantic.Field(None, description="first")
    second_one: Optional[TestCommand] = pydantic.Field(None, alias="second-one", description="second")


# ----------------------------------------------------------------------------
# Domain helpers
# ----------------------------------------------------------------------------


def state(x: Any, y: Any) -> State:
    """State of the `pair` model."""
    return State.of(x=x, y=y)


def behavior(prefix: Sequence[Tuple[Any, Any]], cycle: Sequence[Tuple[Any, Any]]) -> DiscreteBehavior:
    """Lasso over `x` and `y` from `(x, y)` pairs."""
    return DiscreteBehavior(tuple(state(*s) for s in prefix), tuple(state(*s) for s in cycle))


def trace(
    prefix: Sequence[Tuple[Any, Any, Any]],
    cycle: Sequence[Tuple[Any, Any, Any]],
) -> ContTrace:
    """Trace over `x` and `y` from `(x, y, duration)` triples."""
    return ContTrace(
        tuple((state(x, y), d) for (x, y, d) in prefix),
        tuple((state(x, y), d) for (x, y, d) in cycle),
    )


def write_json(directory: pathlib.Path, name: str, content: str) -> pathlib.Path:
    """Writes a file into a temporary directory and returns its path."""
    path = directory / name
    path.write_text(content, encoding="utf-8")
    return path


def lasso_file(variables: List[str], cycle: List[Dict[str, str]], prefix: Optional[List[Dict[str, str]]] = None) -> str:
    """JSON of a discrete trace file."""
    entries = lambda states: ", ".join('{"state": {' + ", ".join(f'"{k}": "{v}"' for (k, v) in s.items()) + "}}" for s in states)  # noqa: E731
    names = ", ".join(f'"{v}"' for v in variables)
    return f'{{"variables": [{names}], "prefix": [{entries(prefix or [])}], "cycle": [{entries(cycle)}]}}'


# ----------------------------------------------------------------------------
# Fixtures
# ----------------------------------------------------------------------------


@pytest.fixture(scope="session")
def pair() -> Tuple[Signature, Interpretation]:
    """The shipped `pair` model: domain 0..2, variables x and y."""
    return load_model(DEFAULT_MODEL)


@pytest.fixture(scope="session")
def counter() -> Tuple[Signature, Interpretation]:
    """The shipped `counter` model: domain 0..4, variable n."""
    return load_model(MODELS / "counter.json")


@pytest.fixture()
def formula(pair: Tuple[Signature, Interpretation]) -> Any:
    """Parser of formulas over the `pair` model."""
    def build(text: str, **kwargs: Any) -> Formula:
        return parse(text, pair[0], **kwargs)

    return build
