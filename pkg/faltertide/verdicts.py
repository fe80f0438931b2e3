"""Verdicts, Witnesses and Quantifier Bounds.

The `verdicts` module contains the result types shared by the discrete and
continuous evaluators. A verdict is honest about bounded search: whenever a
flexible quantifier was decided by enumerating finitely many witnesses, a
positive answer is only `TRUE_WITHIN_BOUND`, and a negative answer is only
`FALSE_WITHIN_BOUND` unless the refutation is sound.
"""


# Standard
import dataclasses
import enum
from fractions import Fraction

# Local
from .errors import InputError
from .syntax import Formula
from .traces import ContTrace, DiscreteBehavior, State, Value

# Typing
from typing import List, Optional, Tuple


class VerdictKind(str, enum.Enum):
    """Outcome of evaluating a closed formula."""

    TRUE = "True"
    FALSE = "False"
    TRUE_WITHIN_BOUND = "TrueWithinBound"
    FALSE_WITNESSED = "FalseWitnessed"
    FALSE_WITHIN_BOUND = "FalseWithinBound"

    @property
    def exit_code(self) -> int:
        """Process exit status reported by the CLI."""
        return {
            VerdictKind.TRUE: 0,
            VerdictKind.FALSE: 1,
            VerdictKind.FALSE_WITNESSED: 1,
            VerdictKind.TRUE_WITHIN_BOUND: 2,
            VerdictKind.FALSE_WITHIN_BOUND: 4,
        }[self]

    @property
    def holds(self) -> bool:
        """Whether the verdict is positive."""
        return self in (VerdictKind.TRUE, VerdictKind.TRUE_WITHIN_BOUND)


@dataclasses.dataclass(frozen=True)
class FlexBound:
    """Finitization of flexible quantification.

    Attributes:
        max_stutter_expansion (int): Extra repeats per lasso position
            (discrete) or extra cuts per segment (continuous).
        limit (int): Maximal number of witnesses enumerated for one
            quantifier instance; further witnesses are skipped.
    """

    max_stutter_expansion: int = 1
    limit: int = 200_000

    def __post_init__(self) -> None:
        """Validates the bound."""
        if self.max_stutter_expansion < 0:
            raise InputError(f"flex bound must be non-negative, not {self.max_stutter_expansion}")
        if self.limit < 1:
            raise InputError(f"enumeration limit must be positive, not {self.limit}")

    def describe(self) -> str:
        """Short description used in verdict lines."""
        return f"flex-bound={self.max_stutter_expansion}"


@dataclasses.dataclass(frozen=True)
class Witness:
    """Replayable explanation of why a subformula is false.

    Attributes:
        formula (Formula): The refuted subformula.
        bindings (Tuple[Tuple[str, Value], ...]): Rigid environment it was refuted under.
        position (Optional[int]): Discrete position at which it is false.
        time (Optional[Fraction]): Continuous instant at which it is false.
        behavior (Optional[DiscreteBehavior]): Behavior it is false on, when
            different from the evaluated one (extended by a flexible quantifier).
        trace (Optional[ContTrace]): Continuous counterpart of `behavior`.
        variable (Optional[str]): Flexible variable whose witness stream was added.
        step (Optional[Tuple[State, State]]): Failing pair of states, if any.
        nested (Optional[Witness]): Explanation of the falsity of a subformula.
    """

    formula: Formula
    bindings: Tuple[Tuple[str, Value], ...] = ()
    position: Optional[int] = None
    time: Optional[Fraction] = None
    behavior: Optional[DiscreteBehavior] = None
    trace: Optional[ContTrace] = None
    variable: Optional[str] = None
    step: Optional[Tuple[State, State]] = None
    nested: Optional["Witness"] = None

    def chain(self) -> List["Witness"]:
        """This witness followed by its nested witnesses."""
        out, node = [], self
        while node is not None:
            out.append(node)
            node = node.nested  # type: ignore[assignment]
        return out

    @property
    def concrete(self) -> bool:
        """Whether the chain ends in a failing step or an extended behavior."""
        return any(w.step is not None or w.behavior is not None or w.trace is not None for w in self.chain())

    def render(self) -> str:
        """One line per level of the chain."""
        lines = []
        for w in self.chain():
            where = f"position {w.position}" if w.position is not None else f"time {w.time}"
            parts = [f"{where}: {w.formula}"]
            if w.bindings:
                parts.append("with " + ", ".join(f"{k}={v}" for (k, v) in w.bindings))
            if w.variable is not None:
                parts.append(f"refuted by a stream for {w.variable}")
            if w.behavior is not None:
                parts.append(f"on {w.behavior.render()}")
            if w.trace is not None:
                parts.append(f"on {w.trace.render()}")
            if w.step is not None:
                parts.append(f"step {w.step[0].render()} -> {w.step[1].render()}")
            lines.append("  " + "; ".join(parts))
        return "\n".join(lines)


@dataclasses.dataclass(frozen=True)
class Verdict:
    """Result of evaluating a closed formula.

    Attributes:
        kind (VerdictKind): The outcome.
        witness (Optional[Witness]): Counterexample for negative outcomes.
        bound (Optional[FlexBound]): Bound used when a flexible quantifier was enumerated.
    """

    kind: VerdictKind
    witness: Optional[Witness] = None
    bound: Optional[FlexBound] = None

    @property
    def holds(self) -> bool:
        """Whether the verdict is positive."""
        return self.kind.holds

    @property
    def exit_code(self) -> int:
        """Process exit status reported by the CLI."""
        return self.kind.exit_code

    def render(self) -> str:
        """Verdict line, followed by the witness chain if any."""
        head = self.kind.value if self.bound is None else f"{self.kind.value} ({self.bound.describe()})"
        return head if self.witness is None else f"{head}\n{self.witness.render()}"


def classify(value: bool, flexible: bool, sound_refutation: bool, witness: Optional[Witness], bound: FlexBound) -> Verdict:
    """Maps a computed truth value to an honest verdict.

    Args:
        value (bool): Truth value computed by bounded evaluation.
        flexible (bool): Whether the formula contains a flexible quantifier.
        sound_refutation (bool): Whether every flexible universal is positive.
        witness (Optional[Witness]): Explanation of a false value.
        bound (FlexBound): Bound the evaluation used.

    Returns:
        Verdict: The verdict.
    """
    if not flexible:
        if value:
            return Verdict(VerdictKind.TRUE)
        kind = VerdictKind.FALSE_WITNESSED if witness is not None and witness.concrete else VerdictKind.FALSE
        return Verdict(kind, witness)
    if value:
        return Verdict(VerdictKind.TRUE_WITHIN_BOUND, bound=bound)
    if not sound_refutation:
        return Verdict(VerdictKind.FALSE_WITHIN_BOUND, witness, bound)
    kind = VerdictKind.FALSE_WITNESSED if witness is not None and witness.concrete else VerdictKind.FALSE
    return Verdict(kind, witness, bound)
