"""Finite First-Order Interpretations.

The `interp` module contains the signature formulas are parsed against, the
finite interpretation structures giving meaning to its symbols, and the
evaluation of terms and actions on a pair of states. Both temporal semantics
evaluate their atoms through `eval_action`.
"""


# Standard
import dataclasses
import itertools
import logging

# Local
from .errors import ModelError, UnboundVariableError, UnknownSymbolError
from .syntax import And, App, Eq, FlexVar, Forall, Formula, Not, Primed, Rel, RigidVar, Term
from .traces import State, Value

# Typing
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple


# Constants
logger = logging.getLogger(__name__)
RigidEnv = Mapping[str, Value]


@dataclasses.dataclass(frozen=True)
class Signature:
    """Symbols and flexible variables a formula may use.

    Attributes:
        functions (Dict[str, int]): Function symbols with their arities;
            domain constants appear as 0-ary functions.
        relations (Dict[str, int]): Relation symbols with their arities.
        flexible (Tuple[str, ...]): Declared flexible variables.
    """

    functions: Dict[str, int] = dataclasses.field(default_factory=dict)
    relations: Dict[str, int] = dataclasses.field(default_factory=dict)
    flexible: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        """Checks that all names are distinct and arities non-negative."""
        seen: Dict[str, str] = {}
        kinds = [("function", self.functions), ("relation", self.relations), ("variable", dict.fromkeys(self.flexible, 0))]
        for (kind, table) in kinds:
            for (name, arity) in table.items():
                if name in seen:
                    raise ModelError(f"{kind} {name!r} clashes with {seen[name]} of the same name")
                if arity < 0:
                    raise ModelError(f"{kind} {name!r} has negative arity")
                seen[name] = kind
        if len(set(self.flexible)) != len(self.flexible):
            raise ModelError("flexible variables must be declared once")


@dataclasses.dataclass(frozen=True)
class Interpretation:
    """Finite structure interpreting a signature.

    Attributes:
        signature (Signature): Interpreted signature.
        domain (Tuple[Value, ...]): Finite, non-empty, ordered domain.
        functions (Dict[str, Dict[Tuple[Value, ...], Value]]): Total function tables.
        relations (Dict[str, FrozenSet[Tuple[Value, ...]]]): Relation extensions.
    """

    signature: Signature
    domain: Tuple[Value, ...]
    functions: Dict[str, Dict[Tuple[Value, ...], Value]]
    relations: Dict[str, FrozenSet[Tuple[Value, ...]]]

    def __post_init__(self) -> None:
        """Checks the tables against the signature and the domain."""
        if not self.domain:
            raise ModelError("domain must not be empty")
        if len(set(self.domain)) != len(self.domain):
            raise ModelError("domain elements must be distinct")
        elements = set(self.domain)
        for (name, arity) in self.signature.functions.items():
            if name not in self.functions:
                if arity == 0 and name in elements:
                    continue
                raise ModelError(f"function {name!r} has no table")
            table = self.functions[name]
            for args in itertools.product(self.domain, repeat=arity):
                if args not in table:
                    raise ModelError(f"function {name!r} is undefined at {args}")
                if table[args] not in elements:
                    raise ModelError(f"function {name!r} maps {args} outside the domain")
        for (name, arity) in self.signature.relations.items():
            for row in self.relations.get(name, frozenset()):
                if len(row) != arity or not set(row) <= elements:
                    raise ModelError(f"relation {name!r} has an invalid row {row}")

    def check_state(self, state: State) -> None:
        """Checks that a state assigns domain values to exactly the declared variables."""
        if state.variables != set(self.signature.flexible):
            raise ModelError(f"state {state.render()} does not match the declared variables {list(self.signature.flexible)}")
        for (name, value) in state.items:
            if value not in self.domain:
                raise ModelError(f"{name}={value} lies outside the domain")


def eval_term(term: Term, theta: RigidEnv, state: State, next_state: State, interp: Interpretation) -> Value:
    """Value of a term on a pair of states.

    Args:
        term (Term): Term to evaluate.
        theta (RigidEnv): Values of the rigid variables.
        state (State): Current state, read by flexible variables.
        next_state (State): Next state, read by primed variables.
        interp (Interpretation): Meaning of the function symbols.

    Returns:
        Value: Domain element denoted by the term.

    Raises:
        UnboundVariableError: If a rigid variable has no value in `theta`.
        UnknownSymbolError: If a function symbol is not interpreted.
    """
    if isinstance(term, RigidVar):
        try:
            return theta[term.name]
        except KeyError:
            raise UnboundVariableError(f"unbound rigid variable {term.name!r}") from None
    if isinstance(term, FlexVar):
        return state[term.name]
    if isinstance(term, Primed):
        return next_state[term.name]
    assert isinstance(term, App)
    args = tuple(eval_term(a, theta, state, next_state, interp) for a in term.args)
    table = interp.functions.get(term.fsym)
    if table is None:
        if not args and term.fsym in interp.domain:
            return term.fsym
        raise UnknownSymbolError(f"uninterpreted function {term.fsym!r}")
    return table[args]


def eval_action(action: Formula, theta: RigidEnv, state: State, next_state: State, interp: Interpretation) -> bool:
    """Whether a pair of states satisfies an action.

    Rigid quantifiers range over the whole (finite) domain.

    Args:
        action (Formula): Core action.
        theta (RigidEnv): Values of the free rigid variables.
        state (State): Current state.
        next_state (State): Next state.
        interp (Interpretation): Meaning of the symbols.

    Returns:
        bool: Satisfaction of the action.
    """
    if isinstance(action, Eq):
        left = eval_term(action.left, theta, state, next_state, interp)
        return left == eval_term(action.right, theta, state, next_state, interp)
    if isinstance(action, Rel):
        if action.rsym not in interp.relations and action.rsym not in interp.signature.relations:
            raise UnknownSymbolError(f"uninterpreted relation {action.rsym!r}")
        args = tuple(eval_term(a, theta, state, next_state, interp) for a in action.args)
        return args in interp.relations.get(action.rsym, frozenset())
    if isinstance(action, Not):
        return not eval_action(action.body, theta, state, next_state, interp)
    if isinstance(action, And):
        return (
            eval_action(action.left, theta, state, next_state, interp)
            and eval_action(action.right, theta, state, next_state, interp)
        )
    if isinstance(action, Forall):
        return all(
            eval_action(action.body, {**theta, action.var: value}, state, next_state, interp)
            for value in interp.domain
        )
    raise TypeError(f"not a core action: {action}")


def rigid_environments(names: Iterable[str], interp: Interpretation) -> Iterable[Dict[str, Value]]:
    """Every assignment of domain values to the given rigid variables."""
    names = list(names)
    for values in itertools.product(interp.domain, repeat=len(names)):
        yield dict(zip(names, values))
