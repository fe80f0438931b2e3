"""Tests the `timeset` Module.

This module provides full unit test coverage for the `timeset` module,
testing all branches of all functions.
"""


# Standard
from fractions import Fraction

# Third-Party
import pytest
from hypothesis import given, settings

# Local
from faltertide import errors, timeset
from faltertide.timeset import Interval, TimeSet
from faltertide.traces import Reparam
from tests import strategies

# Typing
from typing import Any, List, Optional


# Constants
ALGEBRA = settings(max_examples=1000)
TIMESET_TOKENS = ("[", ")", "(", ",", "0", "1", "2", "1/2", "1/0", "-1", "∞", "inf", "∅", "{}", "∪", "|", "⟨", "⟩", "<", ">", "period", "=", "from", ":", "x", "\n")


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (3,             Fraction(3)),
        ("3/4",         Fraction(3, 4)),
        ("6/8",         Fraction(3, 4)),
        (Fraction(1, 2), Fraction(1, 2)),
    ],
)
def test_rat(value: Any, expected: Fraction) -> None:
    """Tests `timeset.rat` Function.

    Args:
        value (Any): Value to convert.
        expected (Fraction): Expected rational.
    """
    # Assert
    assert timeset.rat(value) == expected


@pytest.mark.parametrize("value", [0.5, True, "x", "1/0", None])
def test_rat_invalid(value: Any) -> None:
    """Tests `timeset.rat` Function with invalid values.

    Args:
        value (Any): Value to convert.
    """
    # Assert
    with pytest.raises(errors.TimeSetError):
        timeset.rat(value)


@pytest.mark.parametrize(
    ("lo", "hi"),
    [
        (-1, 2),
        (2,  2),
        (3,  1),
    ],
)
def test_interval_invalid(lo: int, hi: int) -> None:
    """Tests `timeset.Interval` rejects empty or negative intervals.

    Args:
        lo (int): Lower end.
        hi (int): Upper end.
    """
    # Assert
    with pytest.raises(errors.TimeSetError):
        Interval(lo, hi)  # type: ignore[arg-type]


def test_interval_render() -> None:
    """Tests `timeset.Interval.render` Method."""
    # Assert
    assert Interval(Fraction(1, 2), 2).render() == "[1/2,2)"  # type: ignore[arg-type]
    assert Interval(1).render() == "[1,∞)"  # type: ignore[arg-type]
    assert not Interval(1).bounded  # type: ignore[arg-type]


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (TimeSet.empty(),                                          "∅ ⟨period=1 from 0: ∅⟩"),
        (TimeSet.full(),                                           "∅ ⟨period=1 from 0: [0,1)⟩"),
        (TimeSet.from_intervals([Interval(1, 2)]),                 "[1,2) ⟨period=1 from 2: ∅⟩"),
        (TimeSet.from_intervals([Interval(1)]),                    "∅ ⟨period=1 from 1: [0,1)⟩"),
        (TimeSet.periodic(0, 2, [Interval(0, 1)]),                 "∅ ⟨period=2 from 0: [0,1)⟩"),
        (TimeSet.periodic(0, 2, [Interval(0, 1), Interval(1, 2)]), "∅ ⟨period=1 from 0: [0,1)⟩"),
        (TimeSet.periodic(0, 4, [Interval(0, 1), Interval(2, 3)]), "∅ ⟨period=2 from 0: [0,1)⟩"),
        (TimeSet.periodic(2, 2, [Interval(0, 1)], [Interval(0, 1)]), "∅ ⟨period=2 from 0: [0,1)⟩"),
    ],
)
def test_render_canonical(value: TimeSet, expected: str) -> None:
    """Tests time sets are rendered in canonical form.

    Args:
        value (TimeSet): Time set to render.
        expected (str): Expected rendering.
    """
    # Assert
    assert value.render() == expected


@pytest.mark.parametrize(
    ("threshold", "period", "pattern", "transient"),
    [
        (-1, 1, [],               []),
        (0,  0, [],               []),
        (0,  1, [Interval(0, 2)], []),
        (1,  1, [],               [Interval(0, 2)]),
        (1,  1, [],               [Interval(0)]),
    ],
)
def test_periodic_invalid(threshold: int, period: int, pattern: List[Interval], transient: List[Interval]) -> None:
    """Tests `timeset.TimeSet.periodic` validates its parts.

    Args:
        threshold (int): Threshold.
        period (int): Period.
        pattern (List[Interval]): Pattern intervals.
        transient (List[Interval]): Transient intervals.
    """
    # Assert
    with pytest.raises(errors.TimeSetError):
        TimeSet.periodic(threshold, period, pattern, transient)


@pytest.mark.parametrize(
    ("t", "expected"),
    [
        (0,     False),
        (1,     True),
        ("3/2", True),
        (2,     False),
        (100,   False),
    ],
)
def test_contains(t: Any, expected: bool) -> None:
    """Tests `timeset.contains` Function.

    Args:
        t (Any): Instant.
        expected (bool): Expected membership.
    """
    # Construct Time Set
    s = TimeSet.from_intervals([Interval(1, 2)])  # type: ignore[arg-type]

    # Assert
    assert (t in s) is expected


def test_contains_periodic() -> None:
    """Tests membership in the periodic part."""
    # Construct Time Set
    s = TimeSet.periodic(1, 2, [Interval(0, 1)])

    # Assert
    assert 1 in s
    assert 2 not in s
    assert 3 in s
    assert "203/2" in s
    assert "201/2" not in s
    assert 0 not in s


def test_contains_negative() -> None:
    """Tests `timeset.contains` rejects negative instants."""
    # Assert
    with pytest.raises(errors.TimeSetError):
        timeset.contains(TimeSet.full(), -1)


def test_boolean_operations() -> None:
    """Tests union, intersection, complement and difference."""
    # Construct Time Sets
    a = TimeSet.from_intervals([Interval(0, 2)])  # type: ignore[arg-type]
    b = TimeSet.from_intervals([Interval(1)])  # type: ignore[arg-type]

    # Assert
    assert timeset.equals(a | b, TimeSet.full())
    assert timeset.equals(a & b, TimeSet.from_intervals([Interval(1, 2)]))  # type: ignore[arg-type]
    assert timeset.equals(~b, TimeSet.from_intervals([Interval(0, 1)]))  # type: ignore[arg-type]
    assert timeset.equals(timeset.difference(a, b), ~b)
    assert timeset.equals(timeset.implies(b, a), TimeSet.from_intervals([Interval(0, 2)]))  # type: ignore[arg-type]
    assert timeset.subset(a & b, a)
    assert not timeset.subset(a, b)
    assert (~TimeSet.full()).is_empty
    assert (~TimeSet.empty()).is_full


def test_mixed_periods() -> None:
    """Tests operations over patterns with different periods."""
    # Construct Time Sets
    evens = TimeSet.periodic(0, 2, [Interval(0, 1)])
    thirds = TimeSet.periodic(0, 3, [Interval(0, 1)])

    # Generate Intersection
    both = evens & thirds

    # Assert
    assert both.period == 6
    assert both.render() == "∅ ⟨period=6 from 0: [0,1)⟩"
    assert timeset.equals(evens | ~evens, TimeSet.full())


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (TimeSet.from_intervals([Interval(1)]),                  TimeSet.from_intervals([Interval(1)])),
        (TimeSet.periodic(0, 2, [Interval(0, 1)]),               TimeSet.empty()),
        (TimeSet.from_intervals([Interval(0, 1), Interval(2)]),  TimeSet.from_intervals([Interval(2)])),
        (TimeSet.from_intervals([Interval(0, 1), Interval(1)]),  TimeSet.full()),
        (TimeSet.empty(),                                        TimeSet.empty()),
    ],
)
def test_box(value: TimeSet, expected: TimeSet) -> None:
    """Tests `timeset.box` Function.

    Args:
        value (TimeSet): Argument.
        expected (TimeSet): Expected future closure.
    """
    # Assert
    assert timeset.equals(timeset.box(value), expected)


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (TimeSet.periodic(0, 2, [Interval(0, 1)]), TimeSet.full()),
        (TimeSet.from_intervals([Interval(0, 1)]), TimeSet.from_intervals([Interval(0, 1)])),
        (TimeSet.from_intervals([Interval(2, 3)]), TimeSet.from_intervals([Interval(0, 3)])),
        (TimeSet.empty(),                          TimeSet.empty()),
    ],
)
def test_diamond(value: TimeSet, expected: TimeSet) -> None:
    """Tests `timeset.diamond` Function.

    Args:
        value (TimeSet): Argument.
        expected (TimeSet): Expected result.
    """
    # Assert
    assert timeset.equals(timeset.diamond(value), expected)


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (TimeSet.empty(),                                         None),
        (TimeSet.from_intervals([Interval(Fraction(1, 3), 2)]),   Fraction(1, 3)),
        (TimeSet.periodic(2, 2, [Interval(1, 2)]),                Fraction(3)),
    ],
)
def test_first_point(value: TimeSet, expected: Optional[Fraction]) -> None:
    """Tests `timeset.first_point` Function.

    Args:
        value (TimeSet): Time set.
        expected (Optional[Fraction]): Expected least element.
    """
    # Assert
    assert timeset.first_point(value) == expected


def test_preimage_scaling() -> None:
    """Tests pulling a time set back along a scaling."""
    # Construct Time Set
    s = TimeSet.periodic(0, 2, [Interval(0, 1)])

    # Generate Preimage
    result = timeset.preimage(Reparam.scaling(2), s)

    # Assert
    assert result.render() == "∅ ⟨period=1 from 0: [0,1/2)⟩"


def test_preimage_translation() -> None:
    """Tests pulling a time set back along a translation."""
    # Construct Time Set
    s = TimeSet.from_intervals([Interval(1, 3)])  # type: ignore[arg-type]

    # Generate Preimage
    result = timeset.preimage(Reparam.translation(2), s)

    # Assert
    assert timeset.equals(result, TimeSet.from_intervals([Interval(0, 1)]))  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "text",
    [
        "[1,2) ⟨period=1 from 2: ∅⟩",
        "∅ ⟨period=2 from 0: [0,1)⟩",
        "[0,1/2) ∪ [1,3/2) ⟨period=1 from 3/2: [1/4,1)⟩",
        "[1,2) | [3,inf)",
        "{} < period=1 from 0 : [0,1) >",
    ],
)
def test_parse_timeset(text: str) -> None:
    """Tests `timeset.parse_timeset` reads renderings back.

    Args:
        text (str): Text to parse.
    """
    # Parse Time Set
    s = timeset.parse_timeset(text)

    # Assert
    assert timeset.parse_timeset(s.render()) == s


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("[1,2",                        "malformed time set"),
        ("[2,1)",                       "empty interval"),
        ("[1,∞) ∪ [3,4)",               "only the last interval may be unbounded"),
        ("∅ ⟨period=0 from 0: ∅⟩",      "invalid threshold"),
    ],
)
def test_parse_timeset_invalid(text: str, message: str) -> None:
    """Tests `timeset.parse_timeset` reports malformed input.

    Args:
        text (str): Text to parse.
        message (str): Expected message fragment.
    """
    # Assert
    with pytest.raises(errors.ParseError, match=message):
        timeset.parse_timeset(text)


@pytest.mark.parametrize(
    ("text", "line", "column"),
    [
        ("[2,1)",                           1, 2),
        ("[1/0,1)",                         1, 2),
        ("[0,1) ∪ [2,1/0)",                 1, 12),
        ("[1,∞) ∪ [3,4)",                   1, 7),
        ("[0,∞) | [5,6) | [7,8)",           1, 7),
        ("∅ ⟨period=1 from 0: [0,2)⟩",      1, 3),
        ("∅ ⟨period=0 from 0: ∅⟩",          1, 3),
        ("∅ ⟨period=1 from 1/0: ∅⟩",        1, 18),
        ("[0,1)\n⟨period=1 from 0: [1,2)⟩", 2, 1),
    ],
)
def test_parse_timeset_positions(text: str, line: int, column: int) -> None:
    """Tests `timeset.parse_timeset` locates every error it reports.

    Args:
        text (str): Text to parse.
        line (int): Expected line.
        column (int): Expected column.
    """
    # Parse Time Set
    with pytest.raises(errors.ParseError) as info:
        timeset.parse_timeset(text)

    # Assert
    assert (info.value.line, info.value.column) == (line, column)


@settings(max_examples=1000)
@given(strategies.token_soup(TIMESET_TOKENS))
def test_parse_timeset_never_crashes(text: str) -> None:
    """Tests arbitrary token sequences either parse or raise an input error.

    Args:
        text (str): Random text.
    """
    # Parse Time Set
    try:
        s = timeset.parse_timeset(text)
    except errors.InputError:
        return

    # Assert
    assert timeset.parse_timeset(s.render()) == s


@ALGEBRA
@given(strategies.timesets(), strategies.timesets())
def test_box_laws(a: TimeSet, b: TimeSet) -> None:
    """Tests box is a deflationary, idempotent and meet-preserving modality.

    Args:
        a (TimeSet): Random time set.
        b (TimeSet): Random time set.
    """
    # Assert
    assert timeset.subset(timeset.box(a), a)
    assert timeset.equals(timeset.box(timeset.box(a)), timeset.box(a))
    assert timeset.equals(timeset.box(a & b), timeset.box(a) & timeset.box(b))
    assert timeset.equals(timeset.box(TimeSet.full()), TimeSet.full())


@ALGEBRA
@given(strategies.timesets(), strategies.timesets(), strategies.timesets())
def test_boolean_algebra(a: TimeSet, b: TimeSet, c: TimeSet) -> None:
    """Tests the Boolean algebra laws on random triples.

    Args:
        a (TimeSet): Random time set.
        b (TimeSet): Random time set.
        c (TimeSet): Random time set.
    """
    # Assert Associativity and Commutativity
    assert timeset.equals(a | (b | c), (a | b) | c)
    assert timeset.equals(a & (b & c), (a & b) & c)
    assert timeset.equals(a | b, b | a)
    assert timeset.equals(a & b, b & a)

    # Assert Distributivity and Absorption
    assert timeset.equals(a & (b | c), (a & b) | (a & c))
    assert timeset.equals(a | (b & c), (a | b) & (a | c))
    assert timeset.equals(a | (a & b), a)

    # Assert Complementation and De Morgan
    assert (a & ~a).is_empty
    assert (a | ~a).is_full
    assert timeset.equals(~~a, a)
    assert timeset.equals(~(a | b), ~a & ~b)
    assert timeset.equals(~(a & b), ~a | ~b)
    assert timeset.equals(timeset.implies(a, b), ~a | b)


@ALGEBRA
@given(strategies.timesets())
def test_canonical_forms_are_unique(a: TimeSet) -> None:
    """Tests canonical forms coincide for equal sets.

    Args:
        a (TimeSet): Random time set.
    """
    # Generate Same Set Two Ways
    same = (a | TimeSet.empty()) & TimeSet.full()

    # Assert
    assert same == a
    assert timeset.parse_timeset(a.render()) == a


@ALGEBRA
@given(strategies.timesets())
def test_box_diamond_duality(a: TimeSet) -> None:
    """Tests box is contained in the set and the set in diamond.

    Args:
        a (TimeSet): Random time set.
    """
    # Assert
    assert timeset.subset(a, timeset.diamond(a))
    assert timeset.equals(timeset.diamond(a), ~timeset.box(~a))
