"""Exact Algebra of Eventually Periodic Time Sets.

The `timeset` module contains the `TimeSet` class, a finite and exact
representation of those subsets of the non-negative reals that are a finite
union of half-open rational intervals up to some threshold, and periodic
beyond it. Time sets are what formulas denote under the continuous semantics:
the set of instants at which a formula holds.

The module provides the Boolean operations, the `box` and `diamond`
modalities, pullback along reparameterizations (`preimage`), membership,
equality, and a textual rendering that `parse_timeset` reads back.

Every operation returns a time set in canonical form: merged intervals, the
smallest period the set admits, and the smallest threshold beyond which the
set is exactly periodic. Two time sets denote the same set iff their canonical
forms are equal.
"""


# Standard
import dataclasses
import functools
import logging
import math
import pathlib
from fractions import Fraction

# Third-Party
import lark

# Local
from .errors import ParseError, TimeSetError

# Typing
from typing import TYPE_CHECKING, Callable, Iterable, List, Optional, Sequence, Tuple, Union

if TYPE_CHECKING:  # pragma: no cover
    from .traces import Reparam


# Constants
logger = logging.getLogger(__name__)
RatLike = Union[Fraction, int, str]
GRAMMAR = pathlib.Path(__file__).parent / "grammars" / "timeset.lark"
ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value: RatLike) -> Fraction:
    """Converts an int, `p/q` string or Fraction into an exact rational.

    Args:
        value (RatLike): Value to convert.

    Returns:
        Fraction: Exact rational in lowest terms.

    Raises:
        TimeSetError: If the value is not a rational literal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TimeSetError(f"not an exact rational: {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise TimeSetError(f"not a rational: {value!r}") from exc


def render_rat(value: Fraction) -> str:
    """Renders a rational as `p` or `p/q`."""
    return str(value)


@dataclasses.dataclass(frozen=True)
class Interval:
    """Half-open interval `[lo, hi)` of non-negative rationals.

    A `hi` of `None` stands for +∞.
    """

    lo: Fraction
    hi: Optional[Fraction] = None

    def __post_init__(self) -> None:
        """Coerces endpoints to rationals and validates them."""
        object.__setattr__(self, "lo", rat(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", rat(self.hi))
        if self.lo < 0:
            raise TimeSetError(f"interval starts below zero: {self.lo}")
        if self.hi is not None and self.hi <= self.lo:
            raise TimeSetError(f"empty interval [{self.lo},{self.hi})")

    @property
    def bounded(self) -> bool:
        """Whether the interval has a finite upper end."""
        return self.hi is not None

    def contains(self, t: Fraction) -> bool:
        """Membership of `t` in `[lo, hi)`."""
        return self.lo <= t and (self.hi is None or t < self.hi)

    def render(self) -> str:
        """Renders the interval as `[lo,hi)`."""
        hi = "∞" if self.hi is None else render_rat(self.hi)
        return f"[{render_rat(self.lo)},{hi})"


Spans = Tuple[Interval, ...]


# ---------------------------------------------------------------------------
# Interval list helpers (finite intervals only)
# ---------------------------------------------------------------------------

def _merge(intervals: Iterable[Interval]) -> Spans:
    """Sorts and merges overlapping or adjacent finite intervals."""
    ordered = sorted(intervals, key=lambda iv: iv.lo)
    merged: List[Tuple[Fraction, Fraction]] = []
    for iv in ordered:
        assert iv.hi is not None
        if merged and iv.lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], iv.hi))
        else:
            merged.append((iv.lo, iv.hi))
    return tuple(Interval(lo, hi) for (lo, hi) in merged)


def _clip(intervals: Iterable[Interval], lo: Fraction, hi: Fraction) -> Spans:
    """Restricts finite intervals to `[lo, hi)`."""
    out = []
    for iv in intervals:
        assert iv.hi is not None
        a, b = max(iv.lo, lo), min(iv.hi, hi)
        if a < b:
            out.append(Interval(a, b))
    return tuple(out)


def _shift(intervals: Iterable[Interval], delta: Fraction) -> Spans:
    """Translates finite intervals by `delta`."""
    return tuple(Interval(iv.lo + delta, iv.hi + delta) for iv in intervals if iv.hi is not None)


def _intersect(a: Spans, b: Spans) -> Spans:
    """Intersection of two merged finite interval lists."""
    out: List[Interval] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i].lo, b[j].lo)
        hi = min(a[i].hi, b[j].hi)  # type: ignore[type-var]
        if lo < hi:
            out.append(Interval(lo, hi))
        if a[i].hi < b[j].hi:  # type: ignore[operator]
            i += 1
        else:
            j += 1
    return tuple(out)


def _union(a: Spans, b: Spans) -> Spans:
    """Union of two finite interval lists."""
    return _merge(a + b)


def _gaps(a: Spans, lo: Fraction, hi: Fraction) -> Spans:
    """Complement of a merged finite interval list within `[lo, hi)`."""
    out = []
    cursor = lo
    for iv in _clip(a, lo, hi):
        if cursor < iv.lo:
            out.append(Interval(cursor, iv.lo))
        cursor = iv.hi  # type: ignore[assignment]
    if cursor < hi:
        out.append(Interval(cursor, hi))
    return tuple(out)


def _symmetric_difference(a: Spans, b: Spans, lo: Fraction, hi: Fraction) -> Spans:
    """Points of `[lo, hi)` in exactly one of the two lists."""
    return _union(_intersect(a, _gaps(b, lo, hi)), _intersect(b, _gaps(a, lo, hi)))


def _rotate(pattern: Spans, period: Fraction, delta: Fraction) -> Spans:
    """Rotates a circular pattern on `[0, period)` forward by `delta`."""
    out = []
    for iv in pattern:
        lo, hi = iv.lo + delta, iv.hi + delta  # type: ignore[operator]
        if hi <= period:
            out.append(Interval(lo, hi))
        elif lo >= period:
            out.append(Interval(lo - period, hi - period))
        else:
            out.append(Interval(lo, period))
            out.append(Interval(ZERO, hi - period))
    return _merge(out)


def _lcm(a: Fraction, b: Fraction) -> Fraction:
    """Least common multiple of two positive rationals."""
    den = math.lcm(a.denominator, b.denominator)
    num = math.lcm(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator))
    return Fraction(num, den)


def _divisors(n: int) -> List[int]:
    """Divisors of a positive integer, largest first."""
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]), reverse=True)


# ---------------------------------------------------------------------------
# Time sets
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class TimeSet:
    """Eventually periodic union of half-open rational intervals of ℝ≥0.

    Membership of `t` is decided by `transient` for `t < threshold` and by
    `pattern` at the residue `(t - threshold) mod period` otherwise.

    Instances built through the constructors and operations of this module
    are always canonical; build them with `TimeSet.periodic`,
    `TimeSet.from_intervals`, `TimeSet.empty` or `TimeSet.full` rather than
    calling the class directly.

    Attributes:
        threshold (Fraction): Start of the periodic part.
        transient (Spans): Intervals before the threshold.
        period (Fraction): Length of one repetition.
        pattern (Spans): Intervals within `[0, period)`.
    """

    threshold: Fraction
    transient: Spans
    period: Fraction
    pattern: Spans

    @classmethod
    def empty(cls) -> "TimeSet":
        """The empty set."""
        return cls(ZERO, (), ONE, ())

    @classmethod
    def full(cls) -> "TimeSet":
        """All of ℝ≥0."""
        return cls(ZERO, (), ONE, (Interval(ZERO, ONE),))

    @classmethod
    def periodic(
        cls,
        threshold: RatLike,
        period: RatLike,
        pattern: Sequence[Interval] = (),
        transient: Sequence[Interval] = (),
    ) -> "TimeSet":
        """Builds a time set from its parts and normalizes it.

        Args:
            threshold (RatLike): Start of the periodic part.
            period (RatLike): Positive period.
            pattern (Sequence[Interval]): Intervals within `[0, period)`.
            transient (Sequence[Interval]): Intervals below `threshold`.

        Returns:
            TimeSet: Canonical time set.

        Raises:
            TimeSetError: If an interval lies outside its part.
        """
        threshold, period = rat(threshold), rat(period)
        if threshold < 0 or period <= 0:
            raise TimeSetError(f"invalid threshold {threshold} or period {period}")
        for iv in transient:
            if iv.hi is None or iv.hi > threshold:
                raise TimeSetError(f"transient interval {iv.render()} beyond threshold {threshold}")
        for iv in pattern:
            if iv.hi is None or iv.hi > period:
                raise TimeSetError(f"pattern interval {iv.render()} beyond period {period}")
        return normalize(cls(threshold, _merge(transient), period, _merge(pattern)))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Interval]) -> "TimeSet":
        """Builds the union of the given intervals, any of which may be unbounded.

        Args:
            intervals (Iterable[Interval]): Intervals to unite.

        Returns:
            TimeSet: Canonical time set.
        """
        intervals = list(intervals)
        finite = [iv for iv in intervals if iv.bounded]
        starts = [iv.lo for iv in intervals if not iv.bounded]
        threshold = max([iv.hi for iv in finite] + starts, default=ZERO)  # type: ignore[type-var]
        pattern: Spans = ()
        if starts:
            pattern = (Interval(ZERO, ONE),)
            if min(starts) < threshold:
                finite.append(Interval(min(starts), threshold))
        return normalize(cls(threshold, _merge(finite), ONE, pattern))  # type: ignore[arg-type]

    @property
    def is_empty(self) -> bool:
        """Whether the set has no points."""
        return not self.transient and not self.pattern

    @property
    def is_full(self) -> bool:
        """Whether the set is all of ℝ≥0."""
        return equals(self, TimeSet.full())

    def unroll(self, end: Fraction) -> Spans:
        """Finite intervals of the set within `[0, end)`."""
        out = list(_clip(self.transient, ZERO, end))
        start = self.threshold
        while start < end:
            out.extend(_clip(_shift(self.pattern, start), ZERO, end))
            start += self.period
        return _merge(out)

    def align(self, threshold: Fraction, period: Fraction) -> Tuple[Spans, Spans]:
        """Re-expresses the set with a later threshold and a multiple period.

        Args:
            threshold (Fraction): New threshold, at least the current one.
            period (Fraction): New period, a multiple of the current one.

        Returns:
            Tuple[Spans, Spans]: The transient and the pattern for the new grid.
        """
        window = self.unroll(threshold + period)
        transient = _clip(window, ZERO, threshold)
        pattern = _shift(_clip(window, threshold, threshold + period), -threshold)
        return transient, pattern

    def render(self) -> str:
        """Renders the set, see `render`."""
        return render(self)

    def __contains__(self, t: RatLike) -> bool:
        """Membership, see `contains`."""
        return contains(self, rat(t))

    def __or__(self, other: "TimeSet") -> "TimeSet":
        """Union, see `union`."""
        return union(self, other)

    def __and__(self, other: "TimeSet") -> "TimeSet":
        """Intersection, see `intersect`."""
        return intersect(self, other)

    def __invert__(self) -> "TimeSet":
        """Complement, see `complement`."""
        return complement(self)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def _boundary_count(pattern: Spans, period: Fraction) -> int:
    """Number of points where membership changes around the circular pattern."""
    inner = sum(1 for iv in pattern if iv.lo > 0) + sum(1 for iv in pattern if iv.hi < period)  # type: ignore[operator]
    at_zero = bool(pattern) and pattern[0].lo == 0
    before_period = bool(pattern) and pattern[-1].hi == period
    return inner + (1 if at_zero != before_period else 0)


def _minimal_period(pattern: Spans, period: Fraction) -> Tuple[Fraction, Spans]:
    """Shrinks the period to the least one the pattern admits."""
    count = _boundary_count(pattern, period)
    if count == 0:
        # Constant tail: empty or full
        return ONE, ((Interval(ZERO, ONE),) if pattern else ())
    for k in _divisors(count):
        if k == 1:
            break
        candidate = period / k
        if _rotate(pattern, period, candidate) == pattern:
            return candidate, _clip(pattern, ZERO, candidate)
    return period, pattern


def normalize(s: TimeSet) -> TimeSet:
    """Brings a time set into canonical form.

    Args:
        s (TimeSet): Possibly non-canonical time set.

    Returns:
        TimeSet: Canonical time set denoting the same set.
    """
    threshold = s.threshold
    transient = _clip(_merge(iv for iv in s.transient if iv.hi is not None), ZERO, threshold)
    period, pattern = _minimal_period(_clip(_merge(s.pattern), ZERO, s.period), s.period)

    # Step back whole periods while the transient repeats the pattern
    while threshold >= period and _shift(_clip(transient, threshold - period, threshold), period - threshold) == pattern:
        threshold -= period
        transient = _clip(transient, ZERO, threshold)

    # Then to the last point where t and t + period disagree
    lo = max(ZERO, threshold - period)
    mirrored = _shift(_clip(pattern, lo + period - threshold, period), threshold - period)
    disagree = _symmetric_difference(_clip(transient, lo, threshold), mirrored, lo, threshold)
    start = max((iv.hi for iv in disagree), default=lo)  # type: ignore[type-var]
    if start != threshold:
        window = _merge(transient + _shift(pattern, threshold))
        pattern = _shift(_clip(window, start, start + period), -start)  # type: ignore[operator]
        transient = _clip(transient, ZERO, start)  # type: ignore[arg-type]
        threshold = start  # type: ignore[assignment]

    return TimeSet(threshold, transient, period, pattern)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _pointwise(a: TimeSet, b: TimeSet, op: Callable[[Spans, Spans, Fraction, Fraction], Spans]) -> TimeSet:
    """Applies a pointwise list operation on a common grid."""
    threshold, period = max(a.threshold, b.threshold), _lcm(a.period, b.period)
    ta, pa = a.align(threshold, period)
    tb, pb = b.align(threshold, period)
    return normalize(TimeSet(threshold, op(ta, tb, ZERO, threshold), period, op(pa, pb, ZERO, period)))


def union(a: TimeSet, b: TimeSet) -> TimeSet:
    """Points in `a` or in `b`."""
    return _pointwise(a, b, lambda x, y, lo, hi: _union(x, y))


def intersect(a: TimeSet, b: TimeSet) -> TimeSet:
    """Points in both `a` and `b`."""
    return _pointwise(a, b, lambda x, y, lo, hi: _intersect(x, y))


def complement(a: TimeSet) -> TimeSet:
    """Points of ℝ≥0 not in `a`."""
    return normalize(TimeSet(a.threshold, _gaps(a.transient, ZERO, a.threshold), a.period, _gaps(a.pattern, ZERO, a.period)))


def difference(a: TimeSet, b: TimeSet) -> TimeSet:
    """Points in `a` but not in `b`."""
    return intersect(a, complement(b))


def implies(a: TimeSet, b: TimeSet) -> TimeSet:
    """Pointwise implication, `complement(a) ∪ b`."""
    return union(complement(a), b)


def subset(a: TimeSet, b: TimeSet) -> bool:
    """Whether every point of `a` lies in `b`."""
    return difference(a, b).is_empty


def box(a: TimeSet) -> TimeSet:
    """Future closure: the points `r` with `[r, ∞) ⊆ a`.

    Args:
        a (TimeSet): Time set.

    Returns:
        TimeSet: Either empty or a single unbounded interval.
    """
    if a.pattern != (Interval(ZERO, a.period),):
        return TimeSet.empty()
    start = a.threshold
    for iv in reversed(a.transient):
        if iv.hi != start:
            break
        start = iv.lo
    return TimeSet.from_intervals([Interval(start)])


def diamond(a: TimeSet) -> TimeSet:
    """The points with some later-or-equal point in `a`."""
    return complement(box(complement(a)))


def preimage(f: "Reparam", a: TimeSet) -> TimeSet:
    """Pulls a time set back along a reparameterization.

    Args:
        f (Reparam): Strictly increasing, eventually affine map of ℝ≥0.
        a (TimeSet): Time set.

    Returns:
        TimeSet: The points `t` with `f(t) ∈ a`.

    Raises:
        TimeSetError: If the eventual slope of `f` is not a positive rational.
    """
    slope = f.final_slope
    if not isinstance(slope, Fraction) or slope <= 0:
        raise TimeSetError(f"reparameterization slope must be a positive rational, not {slope!r}")

    # From `start` on, f is affine and a is periodic in f's image
    start = f.last_x
    if a.threshold > f(start):
        start = f.invert_at(a.threshold)
    period = a.period / slope

    images = []
    for iv in a.unroll(f(start) + a.period):
        if iv.hi <= f.offset:  # type: ignore[operator]
            continue
        lo = ZERO if iv.lo <= f.offset else f.invert_at(iv.lo)
        images.append(Interval(lo, f.invert_at(iv.hi)))  # type: ignore[arg-type]
    transient = _clip(images, ZERO, start)
    pattern = _shift(_clip(images, start, start + period), -start)
    return normalize(TimeSet(start, transient, period, pattern))


def contains(a: TimeSet, t: RatLike) -> bool:
    """Membership of an instant in a time set.

    Args:
        a (TimeSet): Time set.
        t (RatLike): Non-negative instant.

    Returns:
        bool: Whether `t` lies in the set.

    Raises:
        TimeSetError: If `t` is negative.
    """
    t = rat(t)
    if t < 0:
        raise TimeSetError(f"negative time {t}")
    if t < a.threshold:
        return any(iv.contains(t) for iv in a.transient)
    residue = (t - a.threshold) % a.period
    return any(iv.contains(residue) for iv in a.pattern)


def equals(a: TimeSet, b: TimeSet) -> bool:
    """Whether two time sets denote the same set.

    Both sides are re-expressed on the common threshold and the least common
    period, then compared interval by interval.
    """
    threshold, period = max(a.threshold, b.threshold), _lcm(a.period, b.period)
    return a.align(threshold, period) == b.align(threshold, period)


def first_point(a: TimeSet) -> Optional[Fraction]:
    """Least element of the set, or `None` if it is empty."""
    if a.transient:
        return a.transient[0].lo
    if a.pattern:
        return a.threshold + a.pattern[0].lo
    return None


# ---------------------------------------------------------------------------
# Rendering and parsing
# ---------------------------------------------------------------------------

def _render_parts(spans: Sequence[Interval]) -> str:
    """Renders an interval list or `∅`."""
    return " ∪ ".join(iv.render() for iv in spans) or "∅"


def render(a: TimeSet) -> str:
    """Renders a time set as `transient ⟨period=p from T: pattern⟩`."""
    return (
        f"{_render_parts(a.transient)} "
        f"⟨period={render_rat(a.period)} from {render_rat(a.threshold)}: {_render_parts(a.pattern)}⟩"
    )


def _literal(token: lark.Token) -> Fraction:
    """Rational literal of the grammar, positioned on failure."""
    try:
        return rat(str(token))
    except TimeSetError as exc:
        raise ParseError(str(exc), line=token.line, column=token.column) from exc


@lark.v_args(inline=True)
class _TimeSetTransformer(lark.Transformer):
    """Builds time sets from the parse tree."""

    def finite(self, token: lark.Token) -> Fraction:
        """Finite upper bound."""
        return _literal(token)

    def unbounded(self, token: lark.Token) -> None:
        """Infinite upper bound."""
        return None

    def interval(self, lo: lark.Token, hi: Optional[Fraction]) -> Interval:
        """Single interval."""
        try:
            return Interval(_literal(lo), hi)
        except TimeSetError as exc:
            raise ParseError(str(exc), line=lo.line, column=lo.column) from exc

    def no_intervals(self, token: lark.Token) -> List[Interval]:
        """The `∅` marker."""
        return []

    def parts(self, *items: Union[Interval, lark.Token]) -> List[Interval]:
        """Union of intervals; only the last one may be unbounded."""
        for (item, after) in zip(items, items[1:]):
            if isinstance(item, Interval) and not item.bounded:
                # Reported at the `∪` that continues past an unbounded interval
                raise ParseError("only the last interval may be unbounded", line=after.line, column=after.column)  # type: ignore[union-attr]
        return [item for item in items if isinstance(item, Interval)]

    def tail(self, opening: lark.Token, *items: object) -> Tuple[lark.Token, Fraction, Fraction, List[Interval]]:
        """Periodic tail as (opening bracket, period, threshold, pattern)."""
        period, threshold, pattern = [item for item in items if not (isinstance(item, lark.Token) and item.type == "RANGLE")]
        return opening, _literal(period), _literal(threshold), pattern  # type: ignore[return-value]

    def start(self, parts: List[Interval], tail: Optional[Tuple[lark.Token, Fraction, Fraction, List[Interval]]] = None) -> TimeSet:
        """Whole time set; an inconsistent tail is reported at its `⟨`."""
        if tail is None:
            return TimeSet.from_intervals(parts)
        opening, period, threshold, pattern = tail
        try:
            return TimeSet.periodic(threshold, period, pattern, parts)
        except TimeSetError as exc:
            raise ParseError(str(exc), line=opening.line, column=opening.column) from exc


@functools.lru_cache(maxsize=None)
def _parser() -> lark.Lark:
    """Loads the time-set grammar once."""
    return lark.Lark(GRAMMAR.read_text(encoding="utf-8"), parser="lalr")


def parse_timeset(text: str) -> TimeSet:
    """Reads a time set from its textual rendering.

    Args:
        text (str): Rendering as produced by `render`, or a plain interval list.

    Returns:
        TimeSet: Canonical time set.

    Raises:
        ParseError: Positioned syntax error.
    """
    try:
        tree = _parser().parse(text)
        return _TimeSetTransformer().transform(tree)  # type: ignore[no-any-return]
    except lark.exceptions.UnexpectedInput as exc:
        raise ParseError("malformed time set", line=exc.line, column=exc.column) from exc
    except lark.exceptions.VisitError as exc:
        if isinstance(exc.orig_exc, ParseError):
            raise exc.orig_exc from exc
        raise
