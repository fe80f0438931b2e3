"""Seeded Random Generators.

The `generators` module contains the random time sets, lassos, traces,
reparameterizations and formulas used by the randomized commands. Every
generator draws from the `random.Random` it is given, so runs are
reproducible from the seed.
"""


# Standard
import logging
import random
from fractions import Fraction

# Local
from .interp import Interpretation
from .syntax import ActionBox, Always, And, App, Atom, Eq, FlexVar, Forall, Formula, Not, Primed, Rel, RigidVar, Term
from .timeset import Interval, TimeSet
from .traces import ContTrace, DiscreteBehavior, Reparam, State

# Typing
from typing import List, Sequence, Tuple


# Constants
logger = logging.getLogger(__name__)
DENOMINATORS = (1, 2, 3, 4)


def rational(rng: random.Random, high: int = 3, denominators: Sequence[int] = DENOMINATORS) -> Fraction:
    """Random positive rational at most `high` on a small grid."""
    q = rng.choice(denominators)
    return Fraction(rng.randint(1, high * q), q)


def _spans(rng: random.Random, length: Fraction, count: int) -> List[Interval]:
    """Up to `count` disjoint intervals within `[0, length)` on a grid."""
    q = rng.choice(DENOMINATORS)
    cuts = sorted({Fraction(rng.randint(0, int(length * q)), q) for _ in range(2 * count)})
    cuts = [c for c in cuts if c <= length]
    return [Interval(lo, hi) for (lo, hi) in zip(cuts[::2], cuts[1::2]) if lo < hi]


def random_timeset(rng: random.Random, parts: int = 3) -> TimeSet:
    """Random canonical time set with a transient and a periodic part."""
    threshold = Fraction(rng.randint(0, 4), rng.choice(DENOMINATORS))
    period = rational(rng, high=2)
    return TimeSet.periodic(threshold, period, _spans(rng, period, parts), _spans(rng, threshold, parts))


def random_state(rng: random.Random, variables: Sequence[str], domain: Sequence[str]) -> State:
    """Random assignment of domain values."""
    return State.of({v: rng.choice(domain) for v in variables})


def random_behavior(
    rng: random.Random,
    variables: Sequence[str],
    domain: Sequence[str],
    prefix: int = 3,
    cycle: int = 3,
) -> DiscreteBehavior:
    """Random lasso with at most `prefix` and between 1 and `cycle` positions."""
    return DiscreteBehavior(
        tuple(random_state(rng, variables, domain) for _ in range(rng.randint(0, prefix))),
        tuple(random_state(rng, variables, domain) for _ in range(rng.randint(1, cycle))),
    )


def random_trace(
    rng: random.Random,
    variables: Sequence[str],
    domain: Sequence[str],
    prefix: int = 3,
    cycle: int = 3,
) -> ContTrace:
    """Random piecewise-constant trace with rational durations."""
    behavior = random_behavior(rng, variables, domain, prefix, cycle)
    return ContTrace(
        tuple((s, rational(rng)) for s in behavior.prefix),
        tuple((s, rational(rng)) for s in behavior.cycle),
    )


def random_stutter(rng: random.Random, knots: int = 3) -> Reparam:
    """Random piecewise-linear stutter (a reparameterization fixing 0)."""
    points: List[Tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(0))]
    for _ in range(rng.randint(0, knots)):
        (x, y) = points[-1]
        points.append((x + rational(rng, high=2), y + rational(rng, high=2)))
    return Reparam(Fraction(0), tuple(points), rational(rng, high=2))


def random_falter(rng: random.Random, knots: int = 3) -> Reparam:
    """Random falter: a stutter delayed by a non-negative offset."""
    stutter = random_stutter(rng, knots)
    offset = Fraction(rng.randint(0, 6), rng.choice(DENOMINATORS))
    return Reparam(offset, stutter.knots, stutter.final_slope)


# ----------------------------------------------------------------------------
# Formulas
# ----------------------------------------------------------------------------


def _term(rng: random.Random, interp: Interpretation, rigid: Sequence[str], primed: bool, depth: int) -> Term:
    sig = interp.signature
    unary = [f for (f, n) in sig.functions.items() if n == 1]
    constants = [f for (f, n) in sig.functions.items() if n == 0]
    options = ["var"] * 3 + ["const"] * bool(constants) + ["rigid"] * bool(rigid) + ["app"] * bool(unary and depth)
    kind = rng.choice(options) if sig.flexible else rng.choice([o for o in options if o != "var"] or ["const"])
    if kind == "var":
        name = rng.choice(sig.flexible)
        return Primed(name) if primed and rng.random() < 0.5 else FlexVar(name)
    if kind == "rigid":
        return RigidVar(rng.choice(list(rigid)))
    if kind == "app":
        return App(rng.choice(unary), (_term(rng, interp, rigid, primed, depth - 1),))
    return App(rng.choice(constants))


def random_action(rng: random.Random, interp: Interpretation, rigid: Sequence[str] = (), depth: int = 2) -> Formula:
    """Random core action over the interpretation's signature."""
    relations = list(interp.signature.relations.items())
    if depth == 0 or rng.random() < 0.4:
        if relations and rng.random() < 0.3:
            (name, arity) = rng.choice(relations)
            return Rel(name, tuple(_term(rng, interp, rigid, True, 1) for _ in range(arity)))
        return Eq(_term(rng, interp, rigid, True, 1), _term(rng, interp, rigid, True, 1))
    kind = rng.choice(("not", "and", "forall"))
    if kind == "not":
        return Not(random_action(rng, interp, rigid, depth - 1))
    if kind == "and":
        return And(random_action(rng, interp, rigid, depth - 1), random_action(rng, interp, rigid, depth - 1))
    var = f"r{len(rigid)}"
    return Forall(var, random_action(rng, interp, tuple(rigid) + (var,), depth - 1))


def random_formula(rng: random.Random, interp: Interpretation, depth: int = 3, rigid: Sequence[str] = ()) -> Formula:
    """Random closed core temporal formula without flexible quantifiers.

    Action boxes are subscripted by every declared variable, so the formulas
    stay in the fragment on which both semantics agree.
    """
    if depth == 0 or rng.random() < 0.25:
        action = random_action(rng, interp, rigid, depth=1)
        if rng.random() < 0.5:
            return Atom(action)
        return ActionBox(action, tuple(sorted(interp.signature.flexible)))
    kind = rng.choice(("not", "and", "always", "forall"))
    if kind == "not":
        return Not(random_formula(rng, interp, depth - 1, rigid))
    if kind == "and":
        return And(random_formula(rng, interp, depth - 1, rigid), random_formula(rng, interp, depth - 1, rigid))
    if kind == "always":
        return Always(random_formula(rng, interp, depth - 1, rigid))
    var = f"r{len(rigid)}"
    return Forall(var, random_formula(rng, interp, depth - 1, tuple(rigid) + (var,)))
