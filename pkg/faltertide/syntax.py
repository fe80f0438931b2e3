"""Abstract and Concrete Syntax of TLA Formulas.

The `syntax` module contains the formula AST, the parser for the concrete
grammar in `grammars/tla.lark`, the printer, and the expansion of syntactic
sugar into the core connectives.

Terms, actions and temporal formulas share one family of dataclasses. The
connectives `Not`, `And` and `Forall` (and the sugar built from them) are
used at both levels; which level a node belongs to is fixed by its position:
the body of an `Atom` or of an `ActionBox` is an action, everything else in a
temporal formula is temporal.

Parsing resolves every name against the signature and the enclosing binders,
and renames bound variables that would shadow another name in scope, so the
evaluators can extend environments without capture.
"""


# Standard
import dataclasses
import functools
import itertools
import logging
import pathlib

# Third-Party
import lark

# Local
from .errors import ArityError, ParseError, PrimeError, UnboundVariableError, UnknownSymbolError

# Typing
from typing import TYPE_CHECKING, Any, Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Set, Tuple

if TYPE_CHECKING:
    from .interp import Signature


# Constants
logger = logging.getLogger(__name__)
GRAMMAR = pathlib.Path(__file__).parent / "grammars" / "tla.lark"


class Node:
    """Base class of all syntax tree nodes."""

    def __str__(self) -> str:
        """Concrete syntax of the node."""
        return render(self)


class Term(Node):
    """Base class of terms."""


class Formula(Node):
    """Base class of actions and temporal formulas."""


# Actions and temporal formulas share their node classes
Action = Formula
TempFormula = Formula


@dataclasses.dataclass(frozen=True)
class RigidVar(Term):
    """Rigid (state-independent) variable."""

    name: str


@dataclasses.dataclass(frozen=True)
class FlexVar(Term):
    """Flexible variable, read in the current state."""

    name: str


@dataclasses.dataclass(frozen=True)
class Primed(Term):
    """Primed flexible variable, read in the next state."""

    name: str


@dataclasses.dataclass(frozen=True)
class App(Term):
    """Function application; constants are 0-ary applications."""

    fsym: str
    args: Tuple[Term, ...] = ()


@dataclasses.dataclass(frozen=True)
class Rel(Formula):
    """Relation application."""

    rsym: str
    args: Tuple[Term, ...] = ()


@dataclasses.dataclass(frozen=True)
class Eq(Formula):
    """Equality of two terms."""

    left: Term
    right: Term


@dataclasses.dataclass(frozen=True)
class Not(Formula):
    """Negation."""

    body: Formula


@dataclasses.dataclass(frozen=True)
class And(Formula):
    """Conjunction."""

    left: Formula
    right: Formula


@dataclasses.dataclass(frozen=True)
class Forall(Formula):
    """Quantification of a rigid variable over the domain."""

    var: str
    body: Formula


@dataclasses.dataclass(frozen=True)
class Atom(Formula):
    """Action used as a temporal formula."""

    action: Formula


@dataclasses.dataclass(frozen=True)
class Always(Formula):
    """Temporal box."""

    body: Formula


@dataclasses.dataclass(frozen=True)
class ActionBox(Formula):
    """`[A]_<v>`: every step changing the subscript satisfies the action."""

    action: Formula
    subscript: Tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class ForallFlex(Formula):
    """Quantification of a flexible variable, up to stuttering."""

    var: str
    body: Formula


@dataclasses.dataclass(frozen=True)
class Or(Formula):
    """Disjunction (sugar)."""

    left: Formula
    right: Formula


@dataclasses.dataclass(frozen=True)
class Implies(Formula):
    """Implication (sugar)."""

    left: Formula
    right: Formula


@dataclasses.dataclass(frozen=True)
class Exists(Formula):
    """Rigid existential quantifier (sugar)."""

    var: str
    body: Formula


@dataclasses.dataclass(frozen=True)
class ExistsFlex(Formula):
    """Flexible existential quantifier (sugar)."""

    var: str
    body: Formula


@dataclasses.dataclass(frozen=True)
class Eventually(Formula):
    """Temporal diamond (sugar)."""

    body: Formula


@dataclasses.dataclass(frozen=True)
class LeadsTo(Formula):
    """`P ~> Q` (sugar)."""

    left: Formula
    right: Formula


@dataclasses.dataclass(frozen=True)
class Const(Formula):
    """The action `TRUE` or `FALSE` (sugar)."""

    value: bool


CORE = (Rel, Eq, Not, And, Forall, Atom, Always, ActionBox, ForallFlex)
SUGAR = (Or, Implies, Exists, ExistsFlex, Eventually, LeadsTo, Const)


# ---------------------------------------------------------------------------
# Traversals
# ---------------------------------------------------------------------------

def _rebuild(node: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """Applies `fn` to every direct sub-formula of `node`."""
    changes = {
        field.name: fn(getattr(node, field.name))
        for field in dataclasses.fields(node)  # type: ignore[arg-type]
        if isinstance(getattr(node, field.name), Formula)
    }
    return dataclasses.replace(node, **changes) if changes else node  # type: ignore[type-var]


def subformulas(node: Formula) -> Iterator[Formula]:
    """Yields `node` and all of its sub-formulas, parents first."""
    yield node
    for field in dataclasses.fields(node):  # type: ignore[arg-type]
        value = getattr(node, field.name)
        if isinstance(value, Formula):
            yield from subformulas(value)


def _terms(node: Formula) -> Iterator[Term]:
    """Yields every term occurring directly in `node`, subterms included."""
    def walk(term: Term) -> Iterator[Term]:
        yield term
        if isinstance(term, App):
            for arg in term.args:
                yield from walk(arg)

    if isinstance(node, Rel):
        for arg in node.args:
            yield from walk(arg)
    elif isinstance(node, Eq):
        yield from walk(node.left)
        yield from walk(node.right)


def names(node: Formula) -> FrozenSet[str]:
    """Every variable and symbol name occurring in `node`, binders included."""
    found: Set[str] = set()
    for sub in subformulas(node):
        if isinstance(sub, (Forall, ForallFlex, Exists, ExistsFlex)):
            found.add(sub.var)
        elif isinstance(sub, ActionBox):
            found.update(sub.subscript)
        elif isinstance(sub, Rel):
            found.add(sub.rsym)
        for term in _terms(sub):
            found.add(term.fsym if isinstance(term, App) else term.name)
    return frozenset(found)


def free_rigid(node: Formula) -> FrozenSet[str]:
    """Rigid variables occurring free in `node`."""
    if isinstance(node, (Forall, Exists)):
        return free_rigid(node.body) - {node.var}
    found = {t.name for t in _terms(node) if isinstance(t, RigidVar)}
    for field in dataclasses.fields(node):  # type: ignore[arg-type]
        value = getattr(node, field.name)
        if isinstance(value, Formula):
            found |= free_rigid(value)
    return frozenset(found)


def free_flexible(node: Formula) -> FrozenSet[str]:
    """Flexible variables occurring free in `node`, subscripts included."""
    if isinstance(node, (ForallFlex, ExistsFlex)):
        return free_flexible(node.body) - {node.var}
    found = {t.name for t in _terms(node) if isinstance(t, (FlexVar, Primed))}
    if isinstance(node, ActionBox):
        found.update(node.subscript)
    for field in dataclasses.fields(node):  # type: ignore[arg-type]
        value = getattr(node, field.name)
        if isinstance(value, Formula):
            found |= free_flexible(value)
    return frozenset(found)


def free_variables(node: Formula) -> FrozenSet[str]:
    """Free rigid and flexible variables of `node`."""
    return free_rigid(node) | free_flexible(node)


def is_flex_free(node: Formula) -> bool:
    """Whether `node` contains no flexible quantifier."""
    return not any(isinstance(sub, (ForallFlex, ExistsFlex)) for sub in subformulas(node))


def flexible_polarity(node: Formula) -> bool:
    """Whether every flexible universal occurs under an even number of negations.

    The formula is desugared first, so `\\EE` counts as a negated `\\AA`.
    """
    def walk(sub: Formula, negated: bool) -> bool:
        if isinstance(sub, ForallFlex) and negated:
            return False
        if isinstance(sub, Not):
            return walk(sub.body, not negated)
        return all(
            walk(getattr(sub, f.name), negated)
            for f in dataclasses.fields(sub)  # type: ignore[arg-type]
            if isinstance(getattr(sub, f.name), Formula)
        )

    return walk(desugar(node), False)


def subscripts_cover(node: Formula) -> bool:
    """Whether every action box's subscript lists all flexible variables of its action."""
    return all(
        free_flexible(sub.action) <= set(sub.subscript)
        for sub in subformulas(node)
        if isinstance(sub, ActionBox)
    )


def _fresh(name: str, taken: Iterable[str]) -> str:
    """`name`, or the first `name_k` not in `taken`."""
    taken = set(taken)
    if name not in taken:
        return name
    return next(f"{name}_{k}" for k in itertools.count(1) if f"{name}_{k}" not in taken)


def _rename_term(term: Term, rigid: Mapping[str, str], flexible: Mapping[str, str]) -> Term:
    if isinstance(term, RigidVar):
        return RigidVar(rigid.get(term.name, term.name))
    if isinstance(term, FlexVar):
        return FlexVar(flexible.get(term.name, term.name))
    if isinstance(term, Primed):
        return Primed(flexible.get(term.name, term.name))
    assert isinstance(term, App)
    return App(term.fsym, tuple(_rename_term(a, rigid, flexible) for a in term.args))


def alpha_rename(node: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Renames every bound variable to a fresh name.

    Args:
        node (Formula): Formula to rename.
        avoid (Iterable[str]): Extra names the new binders must not use.

    Returns:
        Formula: An alpha-equivalent formula whose binders are pairwise
            distinct and disjoint from `avoid` and from the names of `node`.
    """
    taken = set(names(node)) | set(avoid)

    def bind(var: str) -> str:
        new = _fresh(f"{var}_1", taken)
        taken.add(new)
        return new

    def walk(sub: Formula, rigid: Dict[str, str], flexible: Dict[str, str]) -> Formula:
        if isinstance(sub, (Forall, Exists)):
            new = bind(sub.var)
            return type(sub)(new, walk(sub.body, {**rigid, sub.var: new}, flexible))
        if isinstance(sub, (ForallFlex, ExistsFlex)):
            new = bind(sub.var)
            return type(sub)(new, walk(sub.body, rigid, {**flexible, sub.var: new}))
        if isinstance(sub, Rel):
            return Rel(sub.rsym, tuple(_rename_term(a, rigid, flexible) for a in sub.args))
        if isinstance(sub, Eq):
            return Eq(_rename_term(sub.left, rigid, flexible), _rename_term(sub.right, rigid, flexible))
        if isinstance(sub, ActionBox):
            subscript = tuple(flexible.get(v, v) for v in sub.subscript)
            return ActionBox(walk(sub.action, rigid, flexible), subscript)
        return _rebuild(sub, lambda child: walk(child, rigid, flexible))

    return walk(node, {}, {})


# ---------------------------------------------------------------------------
# Sugar
# ---------------------------------------------------------------------------

def desugar(node: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Eliminates the derived connectives.

    `P \\/ Q` becomes `~(~P /\\ ~Q)`, `P => Q` becomes `~P \\/ Q`, the
    existential quantifiers become `~\\A x . ~P` and `~\\AA x . ~P`, `<>P`
    becomes `~[]~P`, `P ~> Q` becomes `[](P => <>Q)` and `TRUE` becomes
    `\\A v . v = v` for a fresh `v`.

    Args:
        node (Formula): Formula, possibly with sugar.
        avoid (Iterable[str]): Names the binder introduced for `TRUE` must not use.

    Returns:
        Formula: Formula built from core constructors only.
    """
    var = _fresh("v", set(names(node)) | set(avoid))

    def walk(sub: Formula) -> Formula:
        sub = _rebuild(sub, walk)
        if isinstance(sub, Or):
            return Not(And(Not(sub.left), Not(sub.right)))
        if isinstance(sub, Implies):
            return walk(Or(Not(sub.left), sub.right))
        if isinstance(sub, Exists):
            return Not(Forall(sub.var, Not(sub.body)))
        if isinstance(sub, ExistsFlex):
            return Not(ForallFlex(sub.var, Not(sub.body)))
        if isinstance(sub, Eventually):
            return Not(Always(Not(sub.body)))
        if isinstance(sub, LeadsTo):
            return walk(Always(Implies(sub.left, Eventually(sub.right))))
        if isinstance(sub, Const):
            true = Forall(var, Eq(RigidVar(var), RigidVar(var)))
            return true if sub.value else Not(true)
        return sub

    return walk(node)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

# Binding strength of the printed forms, loosest first
QUANT, LEADS, IMPLIES, DISJ, CONJ, UNARY, PRIMARY = range(7)

_BINARY = {
    And: (" /\\ ", CONJ, CONJ, UNARY),
    Or: (" \\/ ", DISJ, DISJ, CONJ),
    Implies: (" => ", IMPLIES, DISJ, IMPLIES),
    LeadsTo: (" ~> ", LEADS, IMPLIES, IMPLIES),
}
_PREFIX = {Not: "~", Always: "[] ", Eventually: "<> "}
_BINDER = {Forall: "\\A", Exists: "\\E", ForallFlex: "\\AA", ExistsFlex: "\\EE"}


def _render_term(term: Term) -> str:
    if isinstance(term, (RigidVar, FlexVar)):
        return term.name
    if isinstance(term, Primed):
        return f"{term.name}'"
    assert isinstance(term, App)
    if not term.args:
        return term.fsym
    return f"{term.fsym}({', '.join(_render_term(a) for a in term.args)})"


def _render(node: Node) -> Tuple[str, int]:
    """Concrete syntax of `node` with its binding strength."""
    if isinstance(node, Term):
        return _render_term(node), PRIMARY
    if isinstance(node, Rel):
        args = ", ".join(_render_term(a) for a in node.args)
        return (f"{node.rsym}({args})" if node.args else node.rsym), PRIMARY
    if isinstance(node, Eq):
        return f"{_render_term(node.left)} = {_render_term(node.right)}", PRIMARY
    if isinstance(node, Const):
        return ("TRUE" if node.value else "FALSE"), PRIMARY
    if isinstance(node, Atom):
        if isinstance(node.action, (Rel, Eq, Const)):
            return _render(node.action)
        return "{" + render(node.action) + "}", PRIMARY
    if isinstance(node, ActionBox):
        return f"[{render(node.action)}]_<{', '.join(node.subscript)}>", PRIMARY
    if type(node) in _PREFIX:
        op = _PREFIX[type(node)]  # type: ignore[index]
        text, level = _render(node.body)  # type: ignore[attr-defined]
        if level == QUANT:
            return f"{op}{text}", QUANT
        if level < UNARY:
            text = f"({text})"
        return f"{op}{text}", UNARY
    if type(node) in _BINARY:
        op, level, left_min, right_min = _BINARY[type(node)]  # type: ignore[index]
        left, left_level = _render(node.left)  # type: ignore[attr-defined]
        right, right_level = _render(node.right)  # type: ignore[attr-defined]
        left = left if left_level >= left_min else f"({left})"
        right = right if right_level >= right_min else f"({right})"
        return f"{left}{op}{right}", level
    if type(node) in _BINDER:
        return f"{_BINDER[type(node)]} {node.var} . {render(node.body)}", QUANT  # type: ignore[index,attr-defined]
    raise TypeError(f"not a syntax node: {node!r}")


def render(node: Node) -> str:
    """Prints a term or formula in the concrete grammar.

    The output uses the fewest parentheses the grammar allows and parses back
    to the same tree.

    Args:
        node (Node): Term or formula.

    Returns:
        str: Concrete syntax.
    """
    return _render(node)[0]


def as_tree(node: Node) -> Dict[str, Any]:
    """JSON-ready nested dictionary of a syntax tree."""
    out: Dict[str, Any] = {"node": type(node).__name__}
    for field in dataclasses.fields(node):  # type: ignore[arg-type]
        value = getattr(node, field.name)
        if isinstance(value, Node):
            out[field.name] = as_tree(value)
        elif isinstance(value, tuple):
            out[field.name] = [as_tree(v) if isinstance(v, Node) else v for v in value]
        else:
            out[field.name] = value
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _parser() -> lark.Lark:
    """Loads the formula grammar once."""
    return lark.Lark(GRAMMAR.read_text(encoding="utf-8"), parser="lalr", propagate_positions=True)


def _position(item: Any) -> Tuple[Optional[int], Optional[int]]:
    """Line and column of a token or tree, if known."""
    if isinstance(item, lark.Token):
        return item.line, item.column
    meta = getattr(item, "meta", None)
    if meta is None or getattr(meta, "empty", True):
        return None, None
    return meta.line, meta.column


class _Elaborator:
    """Turns parse trees into formulas, resolving names against a signature."""

    def __init__(self, sig: "Signature", rigid: Iterable[str], source: Optional[str]) -> None:
        self.functions = dict(sig.functions)
        self.relations = dict(sig.relations)
        self.declared = set(sig.flexible)
        self.source = source
        self.reserved = set(self.functions) | set(self.relations) | self.declared | {"TRUE", "FALSE"}
        self.free_rigid = {name: name for name in rigid}

    def fail(self, error: type, message: str, item: Any) -> Exception:
        line, column = _position(item)
        return error(message, self.source, line, column)  # type: ignore[no-any-return]

    def bind(self, name: str, rigid: Dict[str, str], flexible: Dict[str, str]) -> str:
        """Internal name for a new binder, renamed if it would shadow."""
        return _fresh(name, self.reserved | set(rigid.values()) | set(flexible.values()))

    # Terms

    def term(self, tree: Any, rigid: Dict[str, str], flexible: Dict[str, str]) -> Term:
        """Elaborates a term."""
        token = tree.children[0]
        name = str(token)
        if tree.data == "primed":
            if name in rigid:
                raise self.fail(PrimeError, f"rigid variable {name!r} cannot be primed", token)
            if name in flexible or name in self.declared:
                return Primed(flexible.get(name, name))
            if name in self.functions:
                raise self.fail(PrimeError, f"constant {name!r} cannot be primed", token)
            raise self.fail(UnboundVariableError, f"unbound variable {name!r}", token)
        if tree.data == "app":
            args = tuple(self.term(child, rigid, flexible) for child in tree.children[1].children)
            self.check_symbol(self.functions, "function", token, len(args))
            return App(name, args)
        if name in rigid:
            return RigidVar(rigid[name])
        if name in flexible:
            return FlexVar(flexible[name])
        if name in self.declared:
            return FlexVar(name)
        if name in self.functions:
            self.check_symbol(self.functions, "function", token, 0)
            return App(name, ())
        raise self.fail(UnboundVariableError, f"unbound variable {name!r}", token)

    def check_symbol(self, table: Dict[str, int], kind: str, token: Any, arity: int) -> None:
        """Checks that a symbol is declared with the given arity."""
        name = str(token)
        if name not in table:
            raise self.fail(UnknownSymbolError, f"unknown {kind} {name!r}", token)
        if table[name] != arity:
            raise self.fail(ArityError, f"{kind} {name!r} expects {table[name]} arguments, got {arity}", token)

    # Formulas

    def formula(self, tree: Any, rigid: Dict[str, str], flexible: Dict[str, str], action: bool) -> Formula:
        """Elaborates a formula at action or temporal level."""
        data = tree.data
        if data == "start":
            return self.formula(tree.children[0], rigid, flexible, action)

        if data == "quantifier":
            (kind, token, body) = tree.children
            new = self.bind(str(token), rigid, flexible)
            if kind.type in ("FORALL", "EXISTS"):
                inner = self.formula(body, {**rigid, str(token): new}, flexible, action)
                return (Forall if kind.type == "FORALL" else Exists)(new, inner)
            if action:
                raise self.fail(ParseError, "flexible quantifier inside an action", kind)
            inner = self.formula(body, rigid, {**flexible, str(token): new}, action)
            return (ForallFlex if kind.type == "FORALL_FLEX" else ExistsFlex)(new, inner)

        if data in ("prefixed", "prefix"):
            (op, body) = tree.children
            inner = self.formula(body, rigid, flexible, action)
            if op.type == "NOT":
                return Not(inner)
            if action:
                raise self.fail(ParseError, f"temporal operator {str(op)!r} inside an action", op)
            return Always(inner) if op.type == "ALWAYS" else Eventually(inner)

        if data in ("leadsto", "imp", "disj", "conj"):
            (left, op, right) = tree.children
            if data == "leadsto" and action:
                raise self.fail(ParseError, "temporal operator '~>' inside an action", op)
            cls = {"leadsto": LeadsTo, "imp": Implies, "disj": Or, "conj": And}[data]
            return cls(self.formula(left, rigid, flexible, action), self.formula(right, rigid, flexible, action))

        if data == "braced":
            inner = self.formula(tree.children[1], rigid, flexible, True)
            return inner if action else Atom(inner)

        if data == "box":
            (bracket, body, subscript) = tree.children
            if action:
                raise self.fail(ParseError, "action box inside an action", bracket)
            resolved = []
            for token in subscript.children:
                name = str(token)
                if name in flexible:
                    resolved.append(flexible[name])
                elif name in self.declared and name not in rigid:
                    resolved.append(name)
                else:
                    raise self.fail(UnboundVariableError, f"{name!r} is not a flexible variable", token)
            return ActionBox(self.formula(body, rigid, flexible, True), tuple(resolved))

        # Atomic actions
        if data == "eq":
            (left, _, right) = tree.children
            atom: Formula = Eq(self.term(left, rigid, flexible), self.term(right, rigid, flexible))
        elif data == "rel":
            (token, args) = tree.children
            terms = tuple(self.term(child, rigid, flexible) for child in args.children)
            self.check_symbol(self.relations, "relation", token, len(terms))
            atom = Rel(str(token), terms)
        elif data == "rel0":
            token = tree.children[0]
            if str(token) not in self.relations and str(token) in (set(rigid) | set(flexible) | self.declared | set(self.functions)):
                raise self.fail(ParseError, f"expected a formula, found the term {str(token)!r}", token)
            self.check_symbol(self.relations, "relation", token, 0)
            atom = Rel(str(token), ())
        elif data == "const":
            atom = Const(tree.children[0].type == "TRUE")
        else:  # pragma: no cover
            raise self.fail(ParseError, f"unexpected construct {data!r}", tree)
        return atom if action else Atom(atom)


def _parse_tree(text: str, source: Optional[str]) -> lark.Tree:
    """Runs the grammar, converting lark errors into positioned `ParseError`s."""
    try:
        return _parser().parse(text)
    except lark.exceptions.UnexpectedInput as exc:
        line, column = getattr(exc, "line", -1), getattr(exc, "column", -1)
        if line is None or line < 1:
            # End of input
            lines = text.split("\n")
            line, column = len(lines), len(lines[-1]) + 1
        if isinstance(exc, lark.exceptions.UnexpectedCharacters):
            message = f"unexpected character {exc.char!r}"
        elif isinstance(exc, lark.exceptions.UnexpectedToken) and exc.token.type != "$END":
            message = f"unexpected {str(exc.token)!r}"
        else:
            message = "unexpected end of input"
        raise ParseError(message, source, line, column) from exc


def _elaborate(
    text: str,
    sig: "Signature",
    rigid: Iterable[str],
    keep_sugar: bool,
    source: Optional[str],
    action: bool,
) -> Formula:
    elaborator = _Elaborator(sig, rigid, source)
    tree = _parse_tree(text, source)
    formula = elaborator.formula(tree, dict(elaborator.free_rigid), {}, action)
    if not keep_sugar:
        formula = desugar(formula, elaborator.reserved)
    logger.debug("parsed %s", formula)
    return formula


def parse(
    text: str,
    sig: "Signature",
    rigid: Iterable[str] = (),
    keep_sugar: bool = False,
    source: Optional[str] = None,
) -> Formula:
    """Parses a temporal formula.

    Args:
        text (str): Formula in the concrete grammar.
        sig (Signature): Symbols and flexible variables names resolve against.
        rigid (Iterable[str]): Rigid variables allowed to occur free.
        keep_sugar (bool): Whether to keep derived connectives as nodes.
        source (Optional[str]): Name used in error positions.

    Returns:
        Formula: Core formula (or formula with sugar if `keep_sugar`).

    Raises:
        ParseError: If the text is not in the grammar.
        ArityError: If a symbol is applied to the wrong number of arguments.
        UnknownSymbolError: If a function or relation is not declared.
        UnboundVariableError: If a name is neither bound nor declared.
        PrimeError: If a name other than a flexible variable is primed.
    """
    return _elaborate(text, sig, rigid, keep_sugar, source, action=False)


def parse_action(
    text: str,
    sig: "Signature",
    rigid: Iterable[str] = (),
    keep_sugar: bool = False,
    source: Optional[str] = None,
) -> Formula:
    """Parses an action; temporal operators are rejected.

    Raises:
        ParseError: If the text is not an action.
    """
    return _elaborate(text, sig, rigid, keep_sugar, source, action=True)
