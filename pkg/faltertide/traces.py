"""Discrete Behaviors, Continuous Traces and Reparameterizations.

The `traces` module contains the finite representations both semantics run
on:

* `DiscreteBehavior`: a lasso of states, a finite prefix followed by a cycle
  repeated forever.
* `ContTrace`: a piecewise-constant, ultimately periodic trace over ℝ≥0, each
  state held for a positive rational duration.
* `Reparam`: a strictly increasing, piecewise-linear and eventually affine
  map of ℝ≥0. With offset zero it is a stutter (a homeomorphism of ℝ≥0);
  with a positive offset it is a falter, a stutter followed by a delay.

It also contains the suffix operators, the action of reparameterizations on
traces, and the stuttering-equivalence decision procedures.
"""


# Standard
import bisect
import dataclasses
import functools
import logging
import math
from fractions import Fraction

# Local
from .errors import ReparamError, TraceError
from .timeset import RatLike, rat

# Typing
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeVar


# Constants
logger = logging.getLogger(__name__)
Value = str
T = TypeVar("T")
ZERO = Fraction(0)
ONE = Fraction(1)


@dataclasses.dataclass(frozen=True)
class State:
    """Total assignment of values to flexible variables.

    Attributes:
        items (Tuple[Tuple[str, Value], ...]): Assignment sorted by variable name.
    """

    items: Tuple[Tuple[str, Value], ...]

    @classmethod
    def of(cls, mapping: Optional[Mapping[str, Value]] = None, **values: Value) -> "State":
        """Builds a state from a mapping and/or keyword arguments."""
        merged = dict(mapping or {}, **values)
        return cls(tuple(sorted((str(k), str(v)) for (k, v) in merged.items())))

    @functools.cached_property
    def _table(self) -> Dict[str, Value]:
        return dict(self.items)

    @property
    def variables(self) -> FrozenSet[str]:
        """Names of the assigned variables."""
        return frozenset(self._table)

    def __getitem__(self, name: str) -> Value:
        """Value of a variable.

        Raises:
            TraceError: If the variable is not assigned.
        """
        try:
            return self._table[name]
        except KeyError:
            raise TraceError(f"state has no variable {name!r}") from None

    def restrict(self, names: Iterable[str]) -> Tuple[Value, ...]:
        """Values of the given variables, in order."""
        return tuple(self[name] for name in names)

    def extend(self, name: str, value: Value) -> "State":
        """Copy of the state with one more (or one replaced) variable."""
        return State.of(self._table, **{name: value})

    def as_dict(self) -> Dict[str, Value]:
        """Plain dictionary copy of the assignment."""
        return dict(self._table)

    def render(self) -> str:
        """Renders the state as `x=0;y=1`."""
        return ";".join(f"{k}={v}" for (k, v) in self.items)


def _same_variables(states: Iterable[State]) -> FrozenSet[str]:
    """Checks that all states assign the same variables and returns them."""
    names: Optional[FrozenSet[str]] = None
    for state in states:
        if names is None:
            names = state.variables
        elif state.variables != names:
            raise TraceError(f"states disagree on variables: {sorted(names)} vs {sorted(state.variables)}")
    return names or frozenset()


# ---------------------------------------------------------------------------
# Discrete behaviors
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class DiscreteBehavior:
    """Lasso-shaped infinite sequence of states.

    Position `n` holds `prefix[n]` for `n < len(prefix)` and
    `cycle[(n - len(prefix)) % len(cycle)]` otherwise.
    """

    prefix: Tuple[State, ...]
    cycle: Tuple[State, ...]

    def __post_init__(self) -> None:
        """Validates the lasso."""
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise TraceError("behavior cycle must not be empty")
        _same_variables(self.prefix + self.cycle)

    @property
    def variables(self) -> FrozenSet[str]:
        """Flexible variables the states assign."""
        return self.cycle[0].variables

    @property
    def positions(self) -> int:
        """Number of distinct suffixes, `len(prefix) + len(cycle)`."""
        return len(self.prefix) + len(self.cycle)

    def canonical_position(self, n: int) -> int:
        """Reduces a position into `[0, positions)` without changing its suffix."""
        if n < len(self.prefix):
            return n
        return len(self.prefix) + (n - len(self.prefix)) % len(self.cycle)

    def successor(self, i: int) -> int:
        """Canonical position following canonical position `i`."""
        return i + 1 if i + 1 < self.positions else len(self.prefix)

    def at(self, n: int) -> State:
        """State at position `n`."""
        if n < 0:
            raise TraceError(f"negative position {n}")
        i = self.canonical_position(n)
        return self.prefix[i] if i < len(self.prefix) else self.cycle[i - len(self.prefix)]

    def unroll(self, length: int) -> List[State]:
        """The first `length` states."""
        return [self.at(n) for n in range(length)]

    def render(self) -> str:
        """Renders the behavior as `prefix (cycle)^ω`."""
        prefix = " ".join(s.render() for s in self.prefix)
        cycle = " ".join(s.render() for s in self.cycle)
        return f"{prefix} ({cycle})^ω".strip()


def suffix_disc(behavior: DiscreteBehavior, n: int) -> DiscreteBehavior:
    """Lasso of the suffix starting at position `n`.

    Args:
        behavior (DiscreteBehavior): Behavior to take the suffix of.
        n (int): Non-negative position.

    Returns:
        DiscreteBehavior: Lasso for `m ↦ behavior(n + m)`.
    """
    if n < 0:
        raise TraceError(f"negative position {n}")
    if n < len(behavior.prefix):
        return DiscreteBehavior(behavior.prefix[n:], behavior.cycle)
    shift = (n - len(behavior.prefix)) % len(behavior.cycle)
    return DiscreteBehavior((), behavior.cycle[shift:] + behavior.cycle[:shift])


def _collapse(states: Sequence[T]) -> List[T]:
    """Removes consecutive duplicates."""
    out: List[T] = []
    for s in states:
        if not out or out[-1] != s:
            out.append(s)
    return out


def _primitive_root(word: Sequence[T]) -> List[T]:
    """Shortest `u` with `word = u^k`."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return list(word[:d])
    return list(word)  # pragma: no cover


def _canonical_lasso(prefix: List[T], cycle: List[T]) -> Tuple[List[T], List[T]]:
    """Minimal prefix and primitive cycle for a lasso without consecutive duplicates."""
    cycle = _primitive_root(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        cycle = [prefix.pop()] + cycle[:-1]
    return prefix, cycle


def destutter_disc(behavior: DiscreteBehavior) -> DiscreteBehavior:
    """Canonical representative of a behavior's stuttering class.

    Maximal runs of equal consecutive states are collapsed, then the lasso is
    brought to its minimal prefix and primitive cycle. A cycle whose states
    are all equal collapses to a single state.

    Args:
        behavior (DiscreteBehavior): Behavior to canonicalize.

    Returns:
        DiscreteBehavior: Canonical lasso, structurally equal for equivalent inputs.
    """
    prefix, cycle = list(behavior.prefix), list(behavior.cycle)
    if all(s == cycle[0] for s in cycle):
        cycle = [cycle[0]]
    else:
        # Rotate the seam onto a change, moving the head into the prefix
        i = next(i for i in range(len(cycle)) if cycle[i - 1] != cycle[i])
        prefix, cycle = prefix + cycle[:i], _collapse(cycle[i:] + cycle[:i])
    prefix = _collapse(prefix)
    while prefix and prefix[-1] == cycle[0]:
        prefix.pop()
    prefix, cycle = _canonical_lasso(prefix, cycle)
    return DiscreteBehavior(tuple(prefix), tuple(cycle))


def stutter_equiv_disc(first: DiscreteBehavior, second: DiscreteBehavior) -> bool:
    """Decides discrete stuttering equivalence.

    Raises:
        TraceError: If the behaviors assign different variables.
    """
    if first.variables != second.variables:
        raise TraceError(f"variable mismatch: {sorted(first.variables)} vs {sorted(second.variables)}")
    return destutter_disc(first) == destutter_disc(second)


def expand_disc(
    behavior: DiscreteBehavior,
    prefix_repeats: Sequence[int],
    cycle_repeats: Sequence[int],
) -> DiscreteBehavior:
    """Stutter expansion repeating each lasso position extra times.

    Args:
        behavior (DiscreteBehavior): Behavior to expand.
        prefix_repeats (Sequence[int]): Extra copies per prefix position.
        cycle_repeats (Sequence[int]): Extra copies per cycle position.

    Returns:
        DiscreteBehavior: Stutter-equivalent expanded behavior.
    """
    if len(prefix_repeats) != len(behavior.prefix) or len(cycle_repeats) != len(behavior.cycle):
        raise TraceError("expansion counts do not match the lasso shape")
    prefix = tuple(s for (s, k) in zip(behavior.prefix, prefix_repeats) for _ in range(k + 1))
    cycle = tuple(s for (s, k) in zip(behavior.cycle, cycle_repeats) for _ in range(k + 1))
    return DiscreteBehavior(prefix, cycle)


# ---------------------------------------------------------------------------
# Continuous traces
# ---------------------------------------------------------------------------

Segment = Tuple[State, Fraction]


@dataclasses.dataclass(frozen=True)
class ContTrace:
    """Piecewise-constant, ultimately periodic non-Zeno trace.

    Each `(state, duration)` pair holds `state` on a half-open span of the
    given positive length; `segments` are traversed once, then `cycle`
    forever.
    """

    segments: Tuple[Segment, ...]
    cycle: Tuple[Segment, ...]

    def __post_init__(self) -> None:
        """Coerces durations and validates the trace."""
        object.__setattr__(self, "segments", tuple((s, rat(d)) for (s, d) in self.segments))
        object.__setattr__(self, "cycle", tuple((s, rat(d)) for (s, d) in self.cycle))
        if not self.cycle:
            raise TraceError("trace cycle must not be empty")
        for (_, duration) in self.segments + self.cycle:
            if duration <= 0:
                raise TraceError(f"segment duration must be positive, not {duration}")
        _same_variables(s for (s, _) in self.segments + self.cycle)

    @classmethod
    def constant(cls, state: State) -> "ContTrace":
        """Trace holding one state forever."""
        return cls((), ((state, ONE),))

    @property
    def variables(self) -> FrozenSet[str]:
        """Flexible variables the states assign."""
        return self.cycle[0][0].variables

    @property
    def prefix_length(self) -> Fraction:
        """Total duration of the non-repeating segments."""
        return sum((d for (_, d) in self.segments), ZERO)

    @property
    def cycle_length(self) -> Fraction:
        """Duration of one repetition of the cycle."""
        return sum((d for (_, d) in self.cycle), ZERO)

    def entries(self) -> Tuple[Segment, ...]:
        """Segments followed by one copy of the cycle."""
        return self.segments + self.cycle

    def spans(self, end: Fraction) -> Iterator[Tuple[State, Fraction, Fraction]]:
        """Yields `(state, start, stop)` for every span starting before `end`."""
        start = ZERO
        for (state, duration) in self.segments:
            if start >= end:
                return
            yield state, start, start + duration
            start += duration
        while start < end:
            for (state, duration) in self.cycle:
                if start >= end:
                    return
                yield state, start, start + duration
                start += duration

    def canonical(self) -> "ContTrace":
        """Canonical representation of the same function of time.

        Equal adjacent segments are merged and the lasso of maximal runs is
        brought to its minimal prefix and primitive cycle; two traces denote
        the same function iff their canonical forms are equal.
        """
        prefix, cycle = list(self.segments), list(self.cycle)
        if all(s == cycle[0][0] for (s, _) in cycle):
            tail = cycle[0][0]
            runs = _merge_runs(prefix)
            while runs and runs[-1][0] == tail:
                runs.pop()
            return ContTrace(tuple(runs), ((tail, ONE),))
        i = next(i for i in range(len(cycle)) if cycle[i - 1][0] != cycle[i][0])
        prefix, cycle = _merge_runs(prefix + cycle[:i]), _merge_runs(cycle[i:] + cycle[:i])
        if prefix and prefix[-1][0] == cycle[0][0]:
            (state, duration) = prefix.pop()
            prefix.append((state, duration + cycle[0][1]))
            cycle = cycle[1:] + cycle[:1]
        prefix, cycle = _canonical_lasso(prefix, cycle)
        return ContTrace(tuple(prefix), tuple(cycle))

    def render(self) -> str:
        """Renders the trace as `(state,duration)` lists."""
        def parts(items: Sequence[Segment]) -> str:
            return " ".join(f"({s.render()},{d})" for (s, d) in items)
        return f"{parts(self.segments)} ({parts(self.cycle)})^ω".strip()


def _merge_runs(segments: Sequence[Segment]) -> List[Segment]:
    """Merges adjacent segments holding the same state."""
    out: List[Segment] = []
    for (state, duration) in segments:
        if out and out[-1][0] == state:
            out[-1] = (state, out[-1][1] + duration)
        else:
            out.append((state, duration))
    return out


def value_at(trace: ContTrace, t: RatLike) -> State:
    """State of the trace at instant `t`.

    Args:
        trace (ContTrace): Trace to evaluate.
        t (RatLike): Non-negative instant.

    Returns:
        State: State of the span containing `t`.

    Raises:
        TraceError: If `t` is negative.
    """
    t = rat(t)
    if t < 0:
        raise TraceError(f"negative time {t}")
    for (state, duration) in trace.segments:
        if t < duration:
            return state
        t -= duration
    t %= trace.cycle_length
    for (state, duration) in trace.cycle:
        if t < duration:
            return state
        t -= duration
    raise AssertionError("unreachable")  # pragma: no cover


def next_change(trace: ContTrace, variables: Iterable[str]) -> Fraction:
    """First instant at which one of the variables differs from its initial value.

    Returns 0 when none of the variables ever changes, following the first
    clause of the definition of `next`.

    Args:
        trace (ContTrace): Trace to scan.
        variables (Iterable[str]): Names of flexible variables.

    Returns:
        Fraction: The first change point, or 0.

    Raises:
        TraceError: If a variable is not assigned by the trace.
    """
    names = tuple(variables)
    unknown = set(names) - trace.variables
    if unknown:
        raise TraceError(f"unknown variables {sorted(unknown)}")
    entries = trace.entries()
    initial = entries[0][0].restrict(names)
    elapsed = ZERO
    for (state, duration) in entries:
        if state.restrict(names) != initial:
            return elapsed
        elapsed += duration
    return ZERO


def suffix_cont(trace: ContTrace, t: RatLike) -> ContTrace:
    """Trace of `r ↦ trace(t + r)`.

    Args:
        trace (ContTrace): Trace to take the suffix of.
        t (RatLike): Non-negative instant.

    Returns:
        ContTrace: Suffix trace.
    """
    t = rat(t)
    if t < 0:
        raise TraceError(f"negative time {t}")
    if t == 0:
        return trace
    if t < trace.prefix_length:
        for (i, (state, duration)) in enumerate(trace.segments):
            if t < duration:
                return ContTrace(((state, duration - t),) + trace.segments[i + 1:], trace.cycle)
            t -= duration
    t = (t - trace.prefix_length) % trace.cycle_length
    for (i, (state, duration)) in enumerate(trace.cycle):
        if t < duration:
            head = ((state, duration - t),) if t else ((state, duration),)
            return ContTrace(head + trace.cycle[i + 1:], trace.cycle) if (i or t) else ContTrace((), trace.cycle)
        t -= duration
    raise AssertionError("unreachable")  # pragma: no cover


def embed_discrete(behavior: DiscreteBehavior, step: RatLike = 1) -> ContTrace:
    """Holds every discrete state for `step` time units."""
    step = rat(step)
    return ContTrace(tuple((s, step) for s in behavior.prefix), tuple((s, step) for s in behavior.cycle))


def as_behavior(trace: ContTrace) -> DiscreteBehavior:
    """Sequence of segment states of a trace, durations dropped."""
    return DiscreteBehavior(tuple(s for (s, _) in trace.segments), tuple(s for (s, _) in trace.cycle))


def stutter_equiv_cont(first: ContTrace, second: ContTrace) -> bool:
    """Decides whether two traces lie in the same stutter orbit.

    Raises:
        TraceError: If the traces assign different variables.
    """
    return stutter_equiv_disc(as_behavior(first), as_behavior(second))


# ---------------------------------------------------------------------------
# Reparameterizations
# ---------------------------------------------------------------------------

Knot = Tuple[Fraction, Fraction]


def _slope(a: Knot, b: Knot) -> Fraction:
    return (b[1] - a[1]) / (b[0] - a[0])


@dataclasses.dataclass(frozen=True)
class Reparam:
    """Strictly increasing, piecewise-linear, eventually affine map of ℝ≥0.

    The map is `t ↦ offset + pl(t)` where `pl` interpolates `knots` (starting
    at `(0, 0)`) and continues with `final_slope` past the last knot.
    Collinear knots are dropped on construction so that equal maps are
    structurally equal.
    """

    offset: Fraction
    knots: Tuple[Knot, ...]
    final_slope: Fraction

    def __post_init__(self) -> None:
        """Coerces, validates and canonicalizes the map."""
        offset = rat(self.offset)
        knots = [(rat(x), rat(y)) for (x, y) in (self.knots or ((ZERO, ZERO),))]
        slope = rat(self.final_slope)
        if offset < 0:
            raise ReparamError(f"offset must be non-negative, not {offset}")
        if slope <= 0:
            raise ReparamError(f"final slope must be positive, not {slope}")
        if knots[0] != (ZERO, ZERO):
            raise ReparamError("knots must start at (0, 0)")
        for (a, b) in zip(knots, knots[1:]):
            if not (b[0] > a[0] and b[1] > a[1]):
                raise ReparamError(f"knots must increase strictly in both coordinates: {a} then {b}")

        # Drop knots where the slope does not change
        reduced = [knots[0]]
        for (i, knot) in enumerate(knots[1:], start=1):
            after = _slope(knot, knots[i + 1]) if i + 1 < len(knots) else slope
            if _slope(reduced[-1], knot) != after:
                reduced.append(knot)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "knots", tuple(reduced))
        object.__setattr__(self, "final_slope", slope)

    @classmethod
    def identity(cls) -> "Reparam":
        """The identity stutter."""
        return cls(ZERO, ((ZERO, ZERO),), ONE)

    @classmethod
    def translation(cls, delay: RatLike) -> "Reparam":
        """The falter `t ↦ t + delay`."""
        return cls(rat(delay), ((ZERO, ZERO),), ONE)

    @classmethod
    def scaling(cls, factor: RatLike) -> "Reparam":
        """The stutter `t ↦ factor · t`."""
        return cls(ZERO, ((ZERO, ZERO),), rat(factor))

    @property
    def is_stutter(self) -> bool:
        """Whether the map fixes 0."""
        return self.offset == 0

    @property
    def last_x(self) -> Fraction:
        """Abscissa of the last knot; the map is affine beyond it."""
        return self.knots[-1][0]

    def __call__(self, t: RatLike) -> Fraction:
        """Image of `t`."""
        t = rat(t)
        if t < 0:
            raise ReparamError(f"negative argument {t}")
        xs = [x for (x, _) in self.knots]
        i = bisect.bisect_right(xs, t) - 1
        x0, y0 = self.knots[i]
        slope = _slope(self.knots[i], self.knots[i + 1]) if i + 1 < len(self.knots) else self.final_slope
        return self.offset + y0 + slope * (t - x0)

    def invert_at(self, y: RatLike) -> Fraction:
        """The unique `t` with `self(t) == y`.

        Raises:
            ReparamError: If `y` lies below `self(0)`.
        """
        z = rat(y) - self.offset
        if z < 0:
            raise ReparamError(f"{y} lies below the image of 0")
        ys = [k[1] for k in self.knots]
        i = bisect.bisect_right(ys, z) - 1
        x0, y0 = self.knots[i]
        slope = _slope(self.knots[i], self.knots[i + 1]) if i + 1 < len(self.knots) else self.final_slope
        return x0 + (z - y0) / slope

    def stutter_part(self) -> "Reparam":
        """The stutter `t ↦ self(t) - self(0)`."""
        return Reparam(ZERO, self.knots, self.final_slope)

    def compose(self, inner: "Reparam") -> "Reparam":
        """The map `t ↦ self(inner(t))`."""
        xs = {x for (x, _) in inner.knots}
        xs.update(inner.invert_at(u) for (u, _) in self.knots if u >= inner.offset)
        start = self(inner(ZERO))
        knots = tuple((x, self(inner(x)) - start) for x in sorted(xs))
        return Reparam(start, knots, self.final_slope * inner.final_slope)

    def inverse(self) -> "Reparam":
        """Inverse stutter.

        Raises:
            ReparamError: If the map is a falter with a positive offset.
        """
        if not self.is_stutter:
            raise ReparamError("only stutters are invertible")
        return Reparam(ZERO, tuple((y, x) for (x, y) in self.knots), 1 / self.final_slope)

    def render(self) -> str:
        """Renders the map as `offset + pl(knots; slope)`."""
        knots = ",".join(f"({x},{y})" for (x, y) in self.knots)
        return f"{self.offset} + pl[{knots}; {self.final_slope}]"


def apply_reparam(trace: ContTrace, f: Reparam) -> ContTrace:
    """The trace `trace ∘ f`.

    Change points of the result are the `f`-preimages of the change points of
    `trace`; the cycle keeps its states with durations divided by the final
    slope of `f`.

    Args:
        trace (ContTrace): Trace to reparameterize.
        f (Reparam): Stutter or falter.

    Returns:
        ContTrace: Reparameterized trace.
    """
    cycle_length = trace.cycle_length
    # First cycle start at or after the point where f becomes affine
    reach = max(f(f.last_x), trace.prefix_length)
    turns = math.ceil((reach - trace.prefix_length) / cycle_length)
    end = trace.prefix_length + turns * cycle_length

    segments = []
    for (state, lo, hi) in trace.spans(end):
        if hi <= f.offset:
            continue
        start = ZERO if lo <= f.offset else f.invert_at(lo)
        segments.append((state, f.invert_at(hi) - start))
    cycle = tuple((s, d / f.final_slope) for (s, d) in trace.cycle)
    logger.debug("reparameterized trace: %d segments before the cycle", len(segments))
    return ContTrace(tuple(segments), cycle)


def stutter_witness(first: ContTrace, second: ContTrace, cycles: int = 2) -> Optional[Reparam]:
    """Explicit stutter `s` with `second ∘ s` equal to `first` on a horizon.

    The change points of both canonical traces are paired in order over the
    canonical prefix and `cycles` common repetitions of the cycles; the
    returned stutter maps each change point of `first` onto the matching one
    of `second` and agrees with `first` up to the last paired point.

    Args:
        first (ContTrace): Target trace.
        second (ContTrace): Trace to reparameterize.
        cycles (int): Number of common cycle repetitions to align.

    Returns:
        Optional[Reparam]: The stutter, or `None` if the traces are not
            stutter-equivalent.
    """
    if not stutter_equiv_cont(first, second):
        return None
    a, b = first.canonical(), second.canonical()
    common = math.lcm(len(a.cycle), len(b.cycle))
    count = max(len(a.segments), len(b.segments)) + cycles * common

    def change_points(trace: ContTrace) -> List[Fraction]:
        points = [ZERO]
        spans = trace.spans(trace.prefix_length + (count + 1) * trace.cycle_length)
        for (_, _, stop) in spans:
            points.append(stop)
            if len(points) > count:
                break
        return points

    pa, pb = change_points(a), change_points(b)
    slope = (pb[count] - pb[count - common]) / (pa[count] - pa[count - common])
    return Reparam(ZERO, tuple(zip(pa, pb)), slope)
