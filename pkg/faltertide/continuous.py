"""Continuous-Time Semantics.

The `continuous` module maps a temporal formula and a piecewise-constant
trace to the time set of instants at which the formula holds; a formula is
satisfied by a trace when 0 belongs to its denotation. Connectives are the
Boolean operations of `timeset`, `[]` is `timeset.box`, and atoms and action
boxes are decided once per segment, since a piecewise-constant trace looks
the same from every instant of a segment.

Flexible quantification is finitized by refining every segment into at most
`FlexBound.max_stutter_expansion + 1` equal parts and assigning a domain value
to each part; such denotations are marked inexact.
"""


# Standard
import dataclasses
import itertools
import logging
from fractions import Fraction

# Local
from . import timeset
from .discrete import next_distinct
from .errors import TraceError, UnboundVariableError
from .interp import Interpretation, RigidEnv, eval_action
from .syntax import ActionBox, Always, And, Atom, Forall, ForallFlex, Formula, Not, flexible_polarity, free_flexible, free_rigid, is_flex_free
from .timeset import Interval, TimeSet
from .traces import ContTrace, Reparam, Segment, Value, apply_reparam, as_behavior, next_change, suffix_cont, value_at
from .verdicts import FlexBound, Verdict, Witness, classify

# Typing
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple


# Constants
logger = logging.getLogger(__name__)
Bindings = Tuple[Tuple[str, Value], ...]


@dataclasses.dataclass(frozen=True)
class Denotation:
    """Set of instants at which a formula holds.

    Attributes:
        set (TimeSet): The instants.
        exact (bool): False iff a flexible quantifier was approximated.
    """

    set: TimeSet
    exact: bool = True


def segment_set(trace: ContTrace, values: Sequence[bool]) -> TimeSet:
    """Union of the spans of the segments flagged in `values`.

    Args:
        trace (ContTrace): Trace whose segments (then one cycle) are flagged.
        values (Sequence[bool]): One flag per entry of `trace.entries()`.

    Returns:
        TimeSet: The union, periodic with the trace's cycle.
    """
    transient, pattern = [], []
    start = Fraction(0)
    for ((_, duration), flag) in zip(trace.segments, values):
        if flag:
            transient.append(Interval(start, start + duration))
        start += duration
    start = Fraction(0)
    for ((_, duration), flag) in zip(trace.cycle, values[len(trace.segments):]):
        if flag:
            pattern.append(Interval(start, start + duration))
        start += duration
    return TimeSet.periodic(trace.prefix_length, trace.cycle_length, pattern, transient)


def _next_subscript_change(trace: ContTrace, e: int, subscript: Sequence[str]) -> Optional[int]:
    """Entry index of the next change of the subscript after entry `e`, if any."""
    behavior = as_behavior(trace)
    current = behavior.at(e).restrict(subscript)
    for j in range(e + 1, e + 1 + behavior.positions):
        if behavior.at(j).restrict(subscript) != current:
            return behavior.canonical_position(j)
    return None


def step_set(action: Formula, subscript: Sequence[str], theta: RigidEnv, trace: ContTrace, interp: Interpretation) -> TimeSet:
    """Instants whose next change of the subscript is a step satisfying the action.

    An instant after which the subscript never changes belongs to the set.

    Args:
        action (Formula): Core action.
        subscript (Sequence[str]): Subscript variables.
        theta (RigidEnv): Rigid environment.
        trace (ContTrace): Trace.
        interp (Interpretation): Meaning of the symbols.

    Returns:
        TimeSet: Segment-aligned set of instants.
    """
    behavior = as_behavior(trace)
    values = []
    for e in range(behavior.positions):
        j = _next_subscript_change(trace, e, subscript)
        values.append(j is None or eval_action(action, theta, behavior.at(e), behavior.at(j), interp))
    return segment_set(trace, values)


def refinements(trace: ContTrace, var: str, bound: FlexBound, domain: Sequence[Value]) -> Iterator[ContTrace]:
    """Traces extending `trace` by a stream for `var` on a refined grid.

    Every segment (prefix and cycle separately) is cut into between 1 and
    `bound.max_stutter_expansion + 1` equal parts, and each part is given a
    domain value.
    """
    def choices(entry: Segment) -> List[Tuple[Segment, ...]]:
        (state, duration) = entry
        out = []
        for parts in range(1, bound.max_stutter_expansion + 2):
            for values in itertools.product(domain, repeat=parts):
                out.append(tuple((state.extend(var, v), duration / parts) for v in values))
        return out

    produced = 0
    options = [choices(entry) for entry in trace.entries()]
    split = len(trace.segments)
    for picked in itertools.product(*options):
        produced += 1
        if produced > bound.limit:
            logger.warning("flexible quantifier over %s stopped after %d witnesses", var, bound.limit)
            return
        segments = tuple(part for entry in picked[:split] for part in entry)
        cycle = tuple(part for entry in picked[split:] for part in entry)
        yield ContTrace(segments, cycle)


class ContinuousEvaluator:
    """Memoizing denotational evaluator over piecewise-constant traces.

    Attributes:
        interp (Interpretation): Meaning of the symbols.
        bound (FlexBound): Finitization of flexible quantifiers.
    """

    def __init__(self, interp: Interpretation, bound: FlexBound) -> None:
        """Instantiates the evaluator.

        Args:
            interp (Interpretation): Meaning of the symbols.
            bound (FlexBound): Finitization of flexible quantifiers.
        """
        self.interp = interp
        self.bound = bound
        self.memo: Dict[Tuple[Formula, Bindings, ContTrace], Denotation] = {}
        self.refutations: Dict[Tuple[Formula, Bindings, ContTrace], Optional[ContTrace]] = {}

    def denote(self, formula: Formula, theta: RigidEnv, trace: ContTrace) -> Denotation:
        """Denotation of a core formula on a trace."""
        key = (formula, tuple(sorted(theta.items())), trace)
        if key not in self.memo:
            self.memo[key] = self._compute(formula, theta, trace)
        return self.memo[key]

    def _compute(self, formula: Formula, theta: RigidEnv, trace: ContTrace) -> Denotation:
        if isinstance(formula, Atom):
            behavior = as_behavior(trace)
            values = [
                eval_action(formula.action, theta, behavior.at(e), next_distinct(behavior, e), self.interp)
                for e in range(behavior.positions)
            ]
            return Denotation(segment_set(trace, values))
        if isinstance(formula, Not):
            inner = self.denote(formula.body, theta, trace)
            return Denotation(timeset.complement(inner.set), inner.exact)
        if isinstance(formula, And):
            left = self.denote(formula.left, theta, trace)
            right = self.denote(formula.right, theta, trace)
            return Denotation(timeset.intersect(left.set, right.set), left.exact and right.exact)
        if isinstance(formula, Always):
            inner = self.denote(formula.body, theta, trace)
            return Denotation(timeset.box(inner.set), inner.exact)
        if isinstance(formula, ActionBox):
            return Denotation(timeset.box(step_set(formula.action, formula.subscript, theta, trace, self.interp)))
        if isinstance(formula, Forall):
            result, exact = TimeSet.full(), True
            for d in self.interp.domain:
                inner = self.denote(formula.body, {**theta, formula.var: d}, trace)
                result, exact = timeset.intersect(result, inner.set), exact and inner.exact
            return Denotation(result, exact)
        if isinstance(formula, ForallFlex):
            return Denotation(self._flexible(formula, theta, trace), exact=False)
        raise TypeError(f"not a core temporal formula: {formula}")

    def _flexible(self, formula: ForallFlex, theta: RigidEnv, trace: ContTrace) -> TimeSet:
        result = TimeSet.full()
        key = (formula, tuple(sorted(theta.items())), trace)
        self.refutations[key] = None
        tried = 0
        for extended in refinements(trace, formula.var, self.bound, self.interp.domain):
            tried += 1
            inner = self.denote(formula.body, theta, extended).set
            if self.refutations[key] is None and not timeset.contains(inner, 0):
                self.refutations[key] = extended
            result = timeset.intersect(result, inner)
            if result.is_empty:
                break
        logger.debug("flexible %s: %d refinements tried, result %s", formula.var, tried, result.render())
        return result

    def explain(self, formula: Formula, theta: RigidEnv, trace: ContTrace, t: Fraction, root: Optional[ContTrace] = None) -> Witness:
        """Witness for a formula that is false at instant `t`.

        Args:
            formula (Formula): Formula false at `t`.
            theta (RigidEnv): Rigid environment.
            trace (ContTrace): Trace it is false on.
            t (Fraction): Instant.
            root (Optional[ContTrace]): Trace the evaluation started from.

        Returns:
            Witness: The explanation, pointing at the earliest violations.
        """
        root = trace if root is None else root
        bindings = tuple(sorted(theta.items()))
        on = None if trace == root else trace

        if isinstance(formula, Atom):
            suffix = suffix_cont(trace, t)
            step = (value_at(suffix, 0), value_at(suffix, next_change(suffix, suffix.variables)))
            return Witness(formula, bindings, time=t, trace=on, step=step)
        if isinstance(formula, And):
            part = formula.left if not timeset.contains(self.denote(formula.left, theta, trace).set, t) else formula.right
            return Witness(formula, bindings, time=t, trace=on, nested=self.explain(part, theta, trace, t, root))
        if isinstance(formula, Always):
            u = _first_missing(self.denote(formula.body, theta, trace).set, t)
            return Witness(formula, bindings, time=t, trace=on, nested=self.explain(formula.body, theta, trace, u, root))
        if isinstance(formula, ActionBox):
            u = _first_missing(step_set(formula.action, formula.subscript, theta, trace, self.interp), t)
            suffix = suffix_cont(trace, u)
            step = (value_at(suffix, 0), value_at(suffix, next_change(suffix, formula.subscript)))
            return Witness(formula, bindings, time=u, trace=on, step=step)
        if isinstance(formula, Forall):
            for d in self.interp.domain:
                inner = {**theta, formula.var: d}
                if not timeset.contains(self.denote(formula.body, inner, trace).set, t):
                    nested = self.explain(formula.body, inner, trace, t, root)
                    return Witness(formula, bindings, time=t, trace=on, nested=nested)
        if isinstance(formula, ForallFlex) and t == 0:
            extended = self.refutations.get((formula, bindings, trace))
            if extended is not None:
                nested = self.explain(formula.body, theta, extended, Fraction(0), root)
                return Witness(formula, bindings, time=t, trace=on, variable=formula.var, nested=nested)
        return Witness(formula, bindings, time=t, trace=on)


def _from(t: Fraction) -> TimeSet:
    return TimeSet.from_intervals([Interval(t)])


def _first_missing(s: TimeSet, t: Fraction) -> Fraction:
    """Least instant at or after `t` outside `s`."""
    point = timeset.first_point(timeset.difference(_from(t), s))
    assert point is not None
    return point


def _check_closed(formula: Formula, theta: RigidEnv, trace: ContTrace) -> None:
    missing = free_rigid(formula) - set(theta)
    if missing:
        raise UnboundVariableError(f"unbound rigid variables {sorted(missing)}")
    unknown = free_flexible(formula) - trace.variables
    if unknown:
        raise TraceError(f"trace does not assign {sorted(unknown)}")


def denote(
    formula: Formula,
    theta: RigidEnv,
    trace: ContTrace,
    interp: Interpretation,
    bound: FlexBound = FlexBound(),
) -> Denotation:
    """Set of instants at which a core formula holds on a trace.

    Args:
        formula (Formula): Core formula, closed under `theta`.
        theta (RigidEnv): Values of the free rigid variables.
        trace (ContTrace): Trace.
        interp (Interpretation): Meaning of the symbols.
        bound (FlexBound): Finitization of flexible quantifiers.

    Returns:
        Denotation: The instants, flagged inexact when a flexible quantifier
            was approximated.
    """
    _check_closed(formula, theta, trace)
    return ContinuousEvaluator(interp, bound).denote(formula, theta, trace)


def sat_cont(
    formula: Formula,
    theta: RigidEnv,
    trace: ContTrace,
    interp: Interpretation,
    bound: FlexBound = FlexBound(),
) -> Verdict:
    """Whether a trace satisfies a core formula at time 0.

    Returns:
        Verdict: Honest verdict; a false verdict's witness points at the
            earliest violating segment.
    """
    _check_closed(formula, theta, trace)
    evaluator = ContinuousEvaluator(interp, bound)
    result = evaluator.denote(formula, theta, trace)
    value = timeset.contains(result.set, 0)
    witness = None if value else evaluator.explain(formula, theta, trace, Fraction(0))
    return classify(value, not result.exact or not is_flex_free(formula), flexible_polarity(formula), witness, bound)


def coherence_check(
    formula: Formula,
    theta: RigidEnv,
    trace: ContTrace,
    samples: Iterable[Fraction],
    interp: Interpretation,
) -> bool:
    """Whether membership in the denotation matches satisfaction of suffixes.

    Args:
        formula (Formula): Core formula without flexible quantifiers.
        theta (RigidEnv): Rigid environment.
        trace (ContTrace): Trace.
        samples (Iterable[Fraction]): Instants to compare at.
        interp (Interpretation): Meaning of the symbols.

    Returns:
        bool: Whether every sample agrees.
    """
    if not is_flex_free(formula):
        raise ValueError("coherence is only defined for formulas without flexible quantifiers")
    result = denote(formula, theta, trace, interp).set
    for t in samples:
        if timeset.contains(result, t) != sat_cont(formula, theta, suffix_cont(trace, t), interp).holds:
            logger.debug("coherence fails at %s for %s", t, formula)
            return False
    return True


def check_reparam_invariance(
    formula: Formula,
    theta: RigidEnv,
    trace: ContTrace,
    f: Reparam,
    interp: Interpretation,
) -> bool:
    """Whether reparameterizing the trace pulls the denotation back along `f`."""
    before = denote(formula, theta, trace, interp).set
    after = denote(formula, theta, apply_reparam(trace, f), interp).set
    return timeset.equals(after, timeset.preimage(f, before))


def falter_check(
    formula: Formula,
    theta: RigidEnv,
    trace: ContTrace,
    f: Reparam,
    interp: Interpretation,
) -> bool:
    """Whether `[]formula`, if true at 0, stays true at 0 after pulling back along `f`."""
    always = denote(Always(formula), theta, trace, interp).set
    return not timeset.contains(always, 0) or timeset.contains(timeset.preimage(f, always), 0)
