"""Discrete-Time Semantics.

The `discrete` module evaluates temporal formulas over lasso behaviors. A
lasso has only `len(prefix) + len(cycle)` distinct suffixes, so every
subformula is evaluated once per canonical position into a boolean vector,
memoized on (subformula, rigid environment, behavior).

Flexible quantification ranges over all stutter-equivalent behaviors extended
by an arbitrary stream for the bound variable. It is finitized by
destuttering the suffix, expanding every position by at most
`FlexBound.max_stutter_expansion` extra copies, and enumerating every
assignment of domain values to the positions of the expanded lasso.
"""


# Standard
import itertools
import logging
import random

# Local
from .errors import TraceError, UnboundVariableError
from .interp import Interpretation, RigidEnv, eval_action
from .syntax import ActionBox, Always, And, Atom, Forall, ForallFlex, Formula, Not, flexible_polarity, free_flexible, free_rigid, is_flex_free
from .traces import DiscreteBehavior, State, Value, destutter_disc, expand_disc, suffix_disc
from .verdicts import FlexBound, Verdict, Witness, classify

# Typing
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


# Constants
logger = logging.getLogger(__name__)
Vector = Tuple[bool, ...]
Bindings = Tuple[Tuple[str, Value], ...]


def _reachable(behavior: DiscreteBehavior, i: int) -> range:
    """Canonical positions of all suffixes of the suffix at `i`."""
    start = i if i < len(behavior.prefix) else len(behavior.prefix)
    return range(start, behavior.positions)


def next_distinct(behavior: DiscreteBehavior, i: int) -> State:
    """First state after position `i` that differs from it, or the state itself."""
    state = behavior.at(i)
    for j in range(i + 1, i + 1 + behavior.positions):
        if behavior.at(j) != state:
            return behavior.at(j)
    return state


class DiscreteEvaluator:
    """Memoizing evaluator of core formulas over lasso behaviors.

    Attributes:
        interp (Interpretation): Meaning of the symbols.
        bound (FlexBound): Finitization of flexible quantifiers.
        truncated (bool): Whether some enumeration hit `bound.limit`.
    """

    def __init__(self, interp: Interpretation, bound: FlexBound) -> None:
        """Instantiates the evaluator.

        Args:
            interp (Interpretation): Meaning of the symbols.
            bound (FlexBound): Finitization of flexible quantifiers.
        """
        self.interp = interp
        self.bound = bound
        self.truncated = False
        self.memo: Dict[Tuple[Formula, Bindings, DiscreteBehavior], Vector] = {}
        self.refutations: Dict[Tuple[Formula, Bindings, DiscreteBehavior], Optional[DiscreteBehavior]] = {}
        self.hits = 0

    # Evaluation

    def vector(self, formula: Formula, theta: RigidEnv, behavior: DiscreteBehavior) -> Vector:
        """Truth value of `formula` at every canonical position of `behavior`."""
        key = (formula, tuple(sorted(theta.items())), behavior)
        cached = self.memo.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        result = self._compute(formula, theta, behavior)
        self.memo[key] = result
        return result

    def _compute(self, formula: Formula, theta: RigidEnv, behavior: DiscreteBehavior) -> Vector:
        n = behavior.positions
        if isinstance(formula, Atom):
            return tuple(
                eval_action(formula.action, theta, behavior.at(i), next_distinct(behavior, i), self.interp)
                for i in range(n)
            )
        if isinstance(formula, Not):
            return tuple(not v for v in self.vector(formula.body, theta, behavior))
        if isinstance(formula, And):
            left = self.vector(formula.left, theta, behavior)
            right = self.vector(formula.right, theta, behavior)
            return tuple(a and b for (a, b) in zip(left, right))
        if isinstance(formula, Always):
            return self._always(self.vector(formula.body, theta, behavior), behavior)
        if isinstance(formula, ActionBox):
            return self._always(self._steps(formula, theta, behavior), behavior)
        if isinstance(formula, Forall):
            vectors = [self.vector(formula.body, {**theta, formula.var: d}, behavior) for d in self.interp.domain]
            return tuple(all(column) for column in zip(*vectors))
        if isinstance(formula, ForallFlex):
            return tuple(self._refute_flexible(formula, theta, behavior, i) is None for i in range(n))
        raise TypeError(f"not a core temporal formula: {formula}")

    @staticmethod
    def _always(values: Vector, behavior: DiscreteBehavior) -> Vector:
        return tuple(all(values[j] for j in _reachable(behavior, i)) for i in range(behavior.positions))

    def _steps(self, formula: ActionBox, theta: RigidEnv, behavior: DiscreteBehavior) -> Vector:
        """Whether the step leaving each position satisfies `[A]_v`."""
        out = []
        for i in range(behavior.positions):
            state, following = behavior.at(i), behavior.at(behavior.successor(i))
            unchanged = state.restrict(formula.subscript) == following.restrict(formula.subscript)
            out.append(unchanged or eval_action(formula.action, theta, state, following, self.interp))
        return tuple(out)

    # Flexible quantification

    def extensions(self, base: DiscreteBehavior, var: str) -> Iterator[DiscreteBehavior]:
        """Bounded stutter expansions of `base` extended by lasso-aligned streams for `var`."""
        k = self.bound.max_stutter_expansion
        p, c = len(base.prefix), len(base.cycle)
        produced = 0
        for counts in itertools.product(range(k + 1), repeat=p + c):
            expanded = expand_disc(base, counts[:p], counts[p:])
            split = len(expanded.prefix)
            for values in itertools.product(self.interp.domain, repeat=expanded.positions):
                produced += 1
                if produced > self.bound.limit:
                    logger.warning("flexible quantifier over %s stopped after %d witnesses", var, self.bound.limit)
                    self.truncated = True
                    return
                prefix = tuple(s.extend(var, v) for (s, v) in zip(expanded.prefix, values[:split]))
                cycle = tuple(s.extend(var, v) for (s, v) in zip(expanded.cycle, values[split:]))
                yield DiscreteBehavior(prefix, cycle)

    def _refute_flexible(
        self,
        formula: ForallFlex,
        theta: RigidEnv,
        behavior: DiscreteBehavior,
        i: int,
    ) -> Optional[DiscreteBehavior]:
        """Extended behavior on which the body fails at its first position, if any."""
        base = destutter_disc(suffix_disc(behavior, i))
        key = (formula, tuple(sorted(theta.items())), base)
        if key in self.refutations:
            return self.refutations[key]
        found = None
        tried = 0
        for extended in self.extensions(base, formula.var):
            tried += 1
            if not self.vector(formula.body, theta, extended)[0]:
                found = extended
                break
        logger.debug("flexible %s at %s: %d witnesses tried, refuted=%s", formula.var, base.render(), tried, found is not None)
        self.refutations[key] = found
        return found

    # Explanations

    def explain(
        self,
        formula: Formula,
        theta: RigidEnv,
        behavior: DiscreteBehavior,
        i: int,
        root: Optional[DiscreteBehavior] = None,
    ) -> Witness:
        """Witness for a formula that is false at position `i`.

        Args:
            formula (Formula): Formula false at `i`.
            theta (RigidEnv): Rigid environment.
            behavior (DiscreteBehavior): Behavior it is false on.
            i (int): Canonical position.
            root (Optional[DiscreteBehavior]): Behavior the evaluation started
                from; witnesses on other behaviors record theirs.

        Returns:
            Witness: The explanation.
        """
        root = behavior if root is None else root
        bindings = tuple(sorted(theta.items()))
        on = None if behavior == root else behavior

        if isinstance(formula, Atom):
            step = (behavior.at(i), next_distinct(behavior, i))
            return Witness(formula, bindings, position=i, behavior=on, step=step)
        if isinstance(formula, And):
            part = formula.left if not self.vector(formula.left, theta, behavior)[i] else formula.right
            nested = self.explain(part, theta, behavior, i, root)
            return Witness(formula, bindings, position=i, behavior=on, nested=nested)
        if isinstance(formula, Always):
            values = self.vector(formula.body, theta, behavior)
            j = next(j for j in _reachable(behavior, i) if not values[j])
            nested = self.explain(formula.body, theta, behavior, j, root)
            return Witness(formula, bindings, position=i, behavior=on, nested=nested)
        if isinstance(formula, ActionBox):
            steps = self._steps(formula, theta, behavior)
            j = next(j for j in _reachable(behavior, i) if not steps[j])
            step = (behavior.at(j), behavior.at(behavior.successor(j)))
            return Witness(formula, bindings, position=j, behavior=on, step=step)
        if isinstance(formula, Forall):
            for d in self.interp.domain:
                inner = {**theta, formula.var: d}
                if not self.vector(formula.body, inner, behavior)[i]:
                    nested = self.explain(formula.body, inner, behavior, i, root)
                    return Witness(formula, bindings, position=i, behavior=on, nested=nested)
        if isinstance(formula, ForallFlex):
            extended = self._refute_flexible(formula, theta, behavior, i)
            assert extended is not None
            nested = self.explain(formula.body, theta, extended, 0, root)
            return Witness(formula, bindings, position=i, behavior=on, variable=formula.var, nested=nested)
        return Witness(formula, bindings, position=i, behavior=on)


def _check_closed(formula: Formula, theta: RigidEnv, behavior: DiscreteBehavior) -> None:
    missing = free_rigid(formula) - set(theta)
    if missing:
        raise UnboundVariableError(f"unbound rigid variables {sorted(missing)}")
    unknown = free_flexible(formula) - behavior.variables
    if unknown:
        raise TraceError(f"behavior does not assign {sorted(unknown)}")


def eval_disc(
    formula: Formula,
    theta: RigidEnv,
    behavior: DiscreteBehavior,
    interp: Interpretation,
    bound: FlexBound = FlexBound(),
) -> Verdict:
    """Evaluates a core formula at the first position of a behavior.

    Args:
        formula (Formula): Core formula, closed under `theta`.
        theta (RigidEnv): Values of the free rigid variables.
        behavior (DiscreteBehavior): Lasso to evaluate on.
        interp (Interpretation): Meaning of the symbols.
        bound (FlexBound): Finitization of flexible quantifiers.

    Returns:
        Verdict: Honest verdict with a witness when false.
    """
    _check_closed(formula, theta, behavior)
    evaluator = DiscreteEvaluator(interp, bound)
    value = evaluator.vector(formula, theta, behavior)[0]
    witness = None if value else evaluator.explain(formula, theta, behavior, 0)
    logger.debug("discrete evaluation: %d vectors, %d memo hits", len(evaluator.memo), evaluator.hits)
    return classify(value, not is_flex_free(formula), flexible_polarity(formula), witness, bound)


def replay_witness(
    witness: Witness,
    behavior: DiscreteBehavior,
    interp: Interpretation,
    bound: FlexBound = FlexBound(),
) -> bool:
    """Re-evaluates the refuted subformula where the witness says it fails.

    Args:
        witness (Witness): Witness produced by `eval_disc`.
        behavior (DiscreteBehavior): Behavior the verdict was computed on;
            used unless the witness records its own.
        interp (Interpretation): Meaning of the symbols.
        bound (FlexBound): Bound the verdict was computed with.

    Returns:
        bool: Truth value of the subformula there (False for a sound witness).
    """
    on = witness.behavior if witness.behavior is not None else behavior
    position = witness.position or 0
    return DiscreteEvaluator(interp, bound).vector(witness.formula, dict(witness.bindings), on)[position]


def stutter_invariance_violations(
    formula: Formula,
    theta: RigidEnv,
    behavior: DiscreteBehavior,
    interp: Interpretation,
    trials: int,
    bound: FlexBound = FlexBound(),
    rng: Optional[random.Random] = None,
    max_repeat: int = 3,
) -> List[Tuple[Sequence[int], Sequence[int], Verdict]]:
    """Random stutter expansions on which the verdict differs.

    Args:
        formula (Formula): Closed core formula.
        theta (RigidEnv): Rigid environment.
        behavior (DiscreteBehavior): Behavior to expand.
        interp (Interpretation): Meaning of the symbols.
        trials (int): Number of random expansions.
        bound (FlexBound): Finitization of flexible quantifiers.
        rng (Optional[random.Random]): Source of randomness.
        max_repeat (int): Maximal extra copies per position.

    Returns:
        List[Tuple[Sequence[int], Sequence[int], Verdict]]: Expansion counts
            (prefix, cycle) and the differing verdict of every violation.
    """
    rng = rng or random.Random(0)  # noqa: S311
    expected = eval_disc(formula, theta, behavior, interp, bound).kind
    violations = []
    for _ in range(trials):
        prefix = [rng.randint(0, max_repeat) for _ in behavior.prefix]
        cycle = [rng.randint(0, max_repeat) for _ in behavior.cycle]
        verdict = eval_disc(formula, theta, expand_disc(behavior, prefix, cycle), interp, bound)
        if verdict.kind != expected:
            logger.debug("stutter expansion %s/%s changes %s to %s", prefix, cycle, expected.value, verdict.kind.value)
            violations.append((prefix, cycle, verdict))
    return violations


def check_stutter_invariance_disc(
    formula: Formula,
    theta: RigidEnv,
    behavior: DiscreteBehavior,
    interp: Interpretation,
    trials: int,
    bound: FlexBound = FlexBound(),
    rng: Optional[random.Random] = None,
) -> bool:
    """Whether random stutter expansions of the behavior all get the same verdict."""
    return not stutter_invariance_violations(formula, theta, behavior, interp, trials, bound, rng)
