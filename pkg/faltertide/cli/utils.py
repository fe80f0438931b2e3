"""Utility helpers for the typed command-line parser.

This module bundles helpers for formatting option names and descriptions,
formatting validation errors, converting namespaces to dictionaries, building
dynamic pydantic validators, and inspecting field types.
"""

# Standard
import argparse
import types as _types

# Third-Party
import pydantic

# Typing
from typing import Any, Callable, Dict, Iterator, Literal, Optional, Tuple, Type, TypeVar, Union, get_args, get_origin


# ---------------------------------------------------------------------------
# Shared Types
# ---------------------------------------------------------------------------

T = TypeVar("T")
PydanticModelT = TypeVar("PydanticModelT", bound=pydantic.BaseModel)
PydanticValidator = Callable[..., Any]
_UNION_TYPE = getattr(_types, "UnionType", None)


# ---------------------------------------------------------------------------
# Argument formatting helpers
# ---------------------------------------------------------------------------

def name(field: pydantic.fields.FieldInfo, default: str, invert: bool = False) -> str:
    """Option string of a field: `--flex-bound` for `flex_bound`."""
    prefix = "--no-" if invert else "--"
    return f"{prefix}{(field.alias or default).replace('_', '-')}"


def description(field: pydantic.fields.FieldInfo) -> str:
    """Help text of a field, with its default when it has one."""
    default = field.get_default(call_default_factory=True)
    suffix = f"(default: {default})" if not field.is_required() and default is not None else None
    return " ".join(filter(None, [field.description, suffix]))


# ---------------------------------------------------------------------------
# Error formatting helpers
# ---------------------------------------------------------------------------

def format_error(error: pydantic.ValidationError) -> str:
    """One line per validation error: `location: message`."""
    lines = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or error.title
        lines.append(f"{location}: {item['msg']}")
    return "; ".join(lines)


# ---------------------------------------------------------------------------
# Namespace helpers
# ---------------------------------------------------------------------------

def to_dict(namespace: argparse.Namespace) -> Dict[str, Any]:
    """Convert a possibly nested argparse namespace to a dictionary."""
    dictionary = vars(namespace)
    for (key, value) in dictionary.items():
        if isinstance(value, argparse.Namespace):
            dictionary[key] = to_dict(value)
    return dictionary


# ---------------------------------------------------------------------------
# Pydantic helpers
# ---------------------------------------------------------------------------

def as_validator(field_name: str, caster: Callable[[str], Any]) -> PydanticValidator:
    """Wrap a caster and construct a "before" validator for a given field.

    Empty strings become `None`; values the caster rejects are passed on
    unchanged so that `pydantic` reports them.
    """

    @pydantic.field_validator(field_name, mode="before")
    def __validator(cls: Type[Any], value: T) -> Union[T, None, Any]:
        if not isinstance(value, str):
            return value
        if not value:
            return None
        try:
            return caster(value)
        except Exception:
            return value

    __validator.__name__ = f"__faltertide_{field_name}"
    return __validator


def update_validators(validators: Dict[str, PydanticValidator], validator: Optional[PydanticValidator]) -> None:
    """Update a validators dictionary in-place with a possible new validator."""
    if validator:
        validators[validator.__name__] = validator


def model_with_validators(model: Type[PydanticModelT], validators: Dict[str, PydanticValidator]) -> Type[PydanticModelT]:
    """Generate a new pydantic model class with supplied validators."""
    return pydantic.create_model(  # type: ignore[no-any-return, call-overload]
        model.__name__,
        __base__=model,
        __validators__=validators,
    )


# ---------------------------------------------------------------------------
# Type inspection helpers
# ---------------------------------------------------------------------------

def iter_candidate_annotations(tp: Any) -> Iterator[Any]:
    """Yield non-None annotations from a (possibly union) annotation."""
    if tp is None:
        return
    origin = get_origin(tp)
    if origin is Union or (_UNION_TYPE is not None and origin is _UNION_TYPE):
        for arg in get_args(tp):
            if arg is not type(None):
                yield from iter_candidate_annotations(arg)
    else:
        yield tp


def _single_annotation_matches(annotation: Any, expected: Any) -> bool:
    """Check if a single annotation matches the expected type."""
    origin = get_origin(annotation)
    if origin is Literal:
        return expected is Literal
    base = origin or annotation
    if base is expected:
        return True
    if isinstance(base, type) and isinstance(expected, type):
        try:
            return issubclass(base, expected)
        except TypeError:
            return False
    return False


def is_field_a(field: pydantic.fields.FieldInfo, types: Union[Any, Tuple[Any, ...]]) -> bool:
    """Check whether the field's type matches any of the supplied types."""
    if not isinstance(types, tuple):
        types = (types,)
    return any(
        _single_annotation_matches(annotation, expected)
        for annotation in iter_candidate_annotations(field.annotation)
        for expected in types
    )
