"""Proof Checking Kernel for Intuitionistic Higher-Order Logic.

The `hol` module contains simple types, terms, the three judgment forms,
explicit derivation trees and the checker deciding whether every node of a
derivation instantiates its named rule. Definitional equality is decided by
comparing beta-eta normal forms up to renaming of bound variables.

Derivations are read from and written to S-expressions:

    types        Prop | NAME | (-> T S ...)
    terms        NAME | (lambda (x T) M) | (M N ...) | imp | (all T)
                 (=> M N) | (forall (x T) M) | (exists (x T) M)
                 (and M N) | (or M N) | (not M) | bot | top
    judgments    (true CTX HYPS M) | (wf CTX HYPS) | (eq CTX M N T)
    contexts     ((x T) ...)
    derivations  (RULE (PREMISE ...) JUDGMENT)
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
from .errors import HolError, HolSyntaxError, HolTypeError

# Typing
from typing import Any, Callable, Collection, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union


# Constants
logger = logging.getLogger(__name__)
GRAMMAR = pathlib.Path(__file__).parent / "grammars" / "sexp.lark"


# ----------------------------------------------------------------------------
# Types and terms
# ----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Base:
    """Base type."""

    name: str


@dataclasses.dataclass(frozen=True)
class Arrow:
    """Function type `dom -> cod`."""

    dom: "HolType"
    cod: "HolType"


@dataclasses.dataclass(frozen=True)
class PropType:
    """Type of propositions."""


HolType = Union[Base, Arrow, PropType]
PROP = PropType()


@dataclasses.dataclass(frozen=True)
class Var:
    """Variable."""

    name: str


@dataclasses.dataclass(frozen=True)
class Lam:
    """Abstraction `lambda (var : type). body`."""

    var: str
    type: HolType
    body: "HolTerm"


@dataclasses.dataclass(frozen=True)
class Apply:
    """Application `fn arg`."""

    fn: "HolTerm"
    arg: "HolTerm"


@dataclasses.dataclass(frozen=True)
class Imp:
    """The implication constant."""


@dataclasses.dataclass(frozen=True)
class ForallC:
    """The universal quantifier constant over a type."""

    type: HolType


HolTerm = Union[Var, Lam, Apply, Imp, ForallC]
Context = Tuple[Tuple[str, HolType], ...]
Hyps = Tuple[HolTerm, ...]


# ----------------------------------------------------------------------------
# Judgments and derivations
# ----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DefEq:
    """Definitional equality `ctx |- left == right : type`."""

    ctx: Context
    left: HolTerm
    right: HolTerm
    type: HolType


@dataclasses.dataclass(frozen=True)
class Wf:
    """Well-formed hypotheses `ctx | hyps |- wf`."""

    ctx: Context
    hyps: Hyps


@dataclasses.dataclass(frozen=True)
class Truth:
    """Truth `ctx | hyps |- prop true`."""

    ctx: Context
    hyps: Hyps
    prop: HolTerm


Judgment = Union[DefEq, Wf, Truth]

EQUALITY_RULES = ("eq-sym", "eq-trans", "eq-var", "eq-app", "eq-lam", "eq-beta", "eq-eta", "eq-imp", "eq-forall")
WF_RULES = ("wf-empty", "wf-extend")
TRUTH_RULES = ("hyp", "conv", "imp-elim", "imp-intro", "forall-elim", "forall-intro")
RULES = EQUALITY_RULES + WF_RULES + TRUTH_RULES

# Number of truth premises each truth rule takes
TRUTH_ARITY = {"hyp": 0, "conv": 1, "imp-elim": 2, "imp-intro": 1, "forall-elim": 1, "forall-intro": 1}


@dataclasses.dataclass(frozen=True)
class Derivation:
    """Derivation tree node.

    Attributes:
        rule (str): Name of the rule applied at this node.
        premises (Tuple[Derivation, ...]): Sub-derivations of the premises.
        conclusion (Judgment): Judgment derived by this node.
    """

    rule: str
    premises: Tuple["Derivation", ...]
    conclusion: Judgment

    def nodes(self, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], "Derivation"]]:
        """Every node of the tree in pre-order, with its path from the root."""
        yield path, self
        for (index, premise) in enumerate(self.premises):
            yield from premise.nodes(path + (index,))

    def replace(self, path: Tuple[int, ...], node: "Derivation") -> "Derivation":
        """Copy of the tree with the node at `path` replaced."""
        if not path:
            return node
        premises = list(self.premises)
        premises[path[0]] = premises[path[0]].replace(path[1:], node)
        return dataclasses.replace(self, premises=tuple(premises))


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """Outcome of checking a derivation.

    Attributes:
        ok (bool): Whether the derivation is valid.
        rule (Optional[str]): Rule of the first failing node.
        path (Tuple[int, ...]): Premise indices leading to the first failing node.
        reason (str): Why the node fails.
    """

    ok: bool
    rule: Optional[str] = None
    path: Tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def render(self) -> str:
        """One-line report."""
        if self.ok:
            return "valid"
        where = "root" if not self.path else "premise " + ".".join(str(i) for i in self.path)
        return f"invalid at {where} ({self.rule}): {self.reason}"


# ----------------------------------------------------------------------------
# Term constructors
# ----------------------------------------------------------------------------


def imp(left: HolTerm, right: HolTerm) -> HolTerm:
    """`left => right`."""
    return Apply(Apply(Imp(), left), right)


def forall(var: str, type: HolType, body: HolTerm) -> HolTerm:
    """`forall (var : type). body`."""
    return Apply(ForallC(type), Lam(var, type, body))


def _pick(base: str, *terms: HolTerm) -> str:
    """Name not free in any of the terms."""
    taken = set().union(*(free_vars(t) for t in terms)) if terms else set()
    return fresh(base, taken)


def bottom() -> HolTerm:
    """`forall (p : Prop). p`."""
    return forall("p", PROP, Var("p"))


def top() -> HolTerm:
    """`forall (p : Prop). p => p`."""
    return forall("p", PROP, imp(Var("p"), Var("p")))


def neg(m: HolTerm) -> HolTerm:
    """`m => bot`."""
    return imp(m, bottom())


def conj(m: HolTerm, n: HolTerm) -> HolTerm:
    """`forall (p : Prop). (m => n => p) => p`."""
    p = _pick("p", m, n)
    return forall(p, PROP, imp(imp(m, imp(n, Var(p))), Var(p)))


def disj(m: HolTerm, n: HolTerm) -> HolTerm:
    """`forall (p : Prop). (m => p) => (n => p) => p`."""
    p = _pick("p", m, n)
    return forall(p, PROP, imp(imp(m, Var(p)), imp(imp(n, Var(p)), Var(p))))


def exists(var: str, type: HolType, body: HolTerm) -> HolTerm:
    """`forall (p : Prop). (forall (var : type). body => p) => p`."""
    p = _pick("p", body, Var(var))
    return forall(p, PROP, imp(forall(var, type, imp(body, Var(p))), Var(p)))


def elaborate_sugar(name: str, type: Optional[HolType] = None) -> HolTerm:
    """Closed encoding of a derived connective.

    Args:
        name (str): One of `bot`, `top`, `not`, `and`, `or`, `exists` or the
            symbols `⊥`, `⊤`, `¬`, `∧`, `∨`, `∃`.
        type (Optional[HolType]): Domain of the quantifier, for `exists`.

    Returns:
        HolTerm: `bot` and `top` are propositions, the connectives are
            abstractions over their operands, and `exists` abstracts over a
            predicate on `type`.

    Raises:
        HolError: If the name is unknown or `exists` lacks its type.
    """
    m, n = Var("m"), Var("n")
    name = {"⊥": "bot", "⊤": "top", "¬": "not", "∧": "and", "∨": "or", "∃": "exists"}.get(name, name)
    if name == "bot":
        return bottom()
    if name == "top":
        return top()
    if name == "not":
        return Lam("m", PROP, neg(m))
    if name == "and":
        return Lam("m", PROP, Lam("n", PROP, conj(m, n)))
    if name == "or":
        return Lam("m", PROP, Lam("n", PROP, disj(m, n)))
    if name == "exists":
        if type is None:
            raise HolError("the existential quantifier needs the type it ranges over")
        return Lam("q", Arrow(type, PROP), exists("x", type, Apply(Var("q"), Var("x"))))
    raise HolError(f"unknown connective {name!r}")


# ----------------------------------------------------------------------------
# Substitution and normalization
# ----------------------------------------------------------------------------


def free_vars(term: HolTerm) -> FrozenSet[str]:
    """Free variables of a term."""
    if isinstance(term, Var):
        return frozenset((term.name,))
    if isinstance(term, Lam):
        return free_vars(term.body) - {term.var}
    if isinstance(term, Apply):
        return free_vars(term.fn) | free_vars(term.arg)
    return frozenset()


def fresh(name: str, taken: Collection[str]) -> str:
    """First of `name`, `name_1`, `name_2`, ... not in `taken`."""
    if name not in taken:
        return name
    stem = name.rsplit("_", 1)[0] if name.rsplit("_", 1)[-1].isdigit() else name
    return next(f"{stem}_{k}" for k in itertools.count(1) if f"{stem}_{k}" not in taken)


def subst(term: HolTerm, var: str, value: HolTerm) -> HolTerm:
    """Capture-avoiding substitution of `value` for `var` in `term`."""
    if isinstance(term, Var):
        return value if term.name == var else term
    if isinstance(term, Apply):
        return Apply(subst(term.fn, var, value), subst(term.arg, var, value))
    if isinstance(term, Lam):
        if term.var == var or var not in free_vars(term.body):
            return term
        binder, body = term.var, term.body
        if binder in free_vars(value):
            binder = fresh(binder, free_vars(value) | free_vars(body) | {var})
            body = subst(body, term.var, Var(binder))
        return Lam(binder, term.type, subst(body, var, value))
    return term


def beta_normal(term: HolTerm) -> HolTerm:
    """Beta normal form; terminates on well-typed terms."""
    if isinstance(term, Apply):
        fn = beta_normal(term.fn)
        if isinstance(fn, Lam):
            return beta_normal(subst(fn.body, fn.var, term.arg))
        return Apply(fn, beta_normal(term.arg))
    if isinstance(term, Lam):
        return Lam(term.var, term.type, beta_normal(term.body))
    return term


def _eta(term: HolTerm) -> HolTerm:
    if isinstance(term, Lam):
        body = _eta(term.body)
        if (
            isinstance(body, Apply)
            and body.arg == Var(term.var)
            and term.var not in free_vars(body.fn)
        ):
            return body.fn
        return Lam(term.var, term.type, body)
    if isinstance(term, Apply):
        return Apply(_eta(term.fn), _eta(term.arg))
    return term


def normalize(term: HolTerm) -> HolTerm:
    """Beta-eta normal form."""
    return _eta(beta_normal(term))


def _nameless(term: HolTerm, bound: Tuple[str, ...] = ()) -> Any:
    """De Bruijn form, used to compare terms up to renaming of binders."""
    if isinstance(term, Var):
        for (index, name) in enumerate(reversed(bound)):
            if name == term.name:
                return ("bound", index)
        return ("free", term.name)
    if isinstance(term, Lam):
        return ("lam", term.type, _nameless(term.body, bound + (term.var,)))
    if isinstance(term, Apply):
        return ("app", _nameless(term.fn, bound), _nameless(term.arg, bound))
    return term


def alpha_eq(left: HolTerm, right: HolTerm) -> bool:
    """Whether two terms differ only in the names of bound variables."""
    return bool(_nameless(left) == _nameless(right))


def judgment_eq(left: Judgment, right: Judgment) -> bool:
    """Whether two judgments agree up to renaming of bound variables."""
    if type(left) is not type(right) or left.ctx != right.ctx:
        return False
    if isinstance(left, DefEq):
        assert isinstance(right, DefEq)
        return left.type == right.type and alpha_eq(left.left, right.left) and alpha_eq(left.right, right.right)
    if not _hyps_eq(left.hyps, right.hyps):  # type: ignore[union-attr]
        return False
    if isinstance(left, Truth):
        assert isinstance(right, Truth)
        return alpha_eq(left.prop, right.prop)
    return True


def _hyps_eq(left: Hyps, right: Hyps) -> bool:
    return len(left) == len(right) and all(alpha_eq(a, b) for (a, b) in zip(left, right))


# ----------------------------------------------------------------------------
# Typing and definitional equality
# ----------------------------------------------------------------------------


def check_context(ctx: Context) -> None:
    """Raises `HolTypeError` if a context binds a name twice."""
    names = [name for (name, _) in ctx]
    if len(set(names)) != len(names):
        raise HolTypeError(f"context binds a variable twice: {render_context(ctx)}")


def lookup(ctx: Context, name: str) -> Optional[HolType]:
    """Type of the innermost binding of `name`."""
    for (bound, type) in reversed(ctx):
        if bound == name:
            return type
    return None


def infer_type(ctx: Context, term: HolTerm) -> HolType:
    """Type of a term under a context.

    Args:
        ctx (Context): Typing context.
        term (HolTerm): Term to type.

    Returns:
        HolType: The unique type of the term.

    Raises:
        HolTypeError: If a variable is unbound or an application is ill-typed.
    """
    if isinstance(term, Var):
        found = lookup(ctx, term.name)
        if found is None:
            raise HolTypeError(f"unbound variable {term.name!r}")
        return found
    if isinstance(term, Imp):
        return Arrow(PROP, Arrow(PROP, PROP))
    if isinstance(term, ForallC):
        return Arrow(Arrow(term.type, PROP), PROP)
    if isinstance(term, Lam):
        return Arrow(term.type, infer_type(ctx + ((term.var, term.type),), term.body))
    fn = infer_type(ctx, term.fn)
    arg = infer_type(ctx, term.arg)
    if not isinstance(fn, Arrow):
        raise HolTypeError(f"{render_term(term.fn)} : {render_type(fn)} is applied but is not a function")
    if fn.dom != arg:
        raise HolTypeError(
            f"{render_term(term.fn)} expects {render_type(fn.dom)} but "
            f"{render_term(term.arg)} has type {render_type(arg)}"
        )
    return fn.cod


def def_eq(ctx: Context, left: HolTerm, right: HolTerm, type: HolType) -> bool:
    """Decides `ctx |- left == right : type`.

    Raises:
        HolTypeError: If either side does not have type `type`.
    """
    for side in (left, right):
        found = infer_type(ctx, side)
        if found != type:
            raise HolTypeError(f"{render_term(side)} has type {render_type(found)}, not {render_type(type)}")
    return alpha_eq(normalize(left), normalize(right))


def _check_hyps(ctx: Context, hyps: Hyps) -> None:
    for hyp in hyps:
        found = infer_type(ctx, hyp)
        if found != PROP:
            raise HolTypeError(f"hypothesis {render_term(hyp)} has type {render_type(found)}, not Prop")


def check_judgment(judgment: Judgment) -> None:
    """Raises `HolTypeError` unless the judgment is well-typed."""
    check_context(judgment.ctx)
    if isinstance(judgment, DefEq):
        for side in (judgment.left, judgment.right):
            found = infer_type(judgment.ctx, side)
            if found != judgment.type:
                raise HolTypeError(
                    f"{render_term(side)} has type {render_type(found)}, not {render_type(judgment.type)}"
                )
        return
    _check_hyps(judgment.ctx, judgment.hyps)
    if isinstance(judgment, Truth):
        found = infer_type(judgment.ctx, judgment.prop)
        if found != PROP:
            raise HolTypeError(f"{render_term(judgment.prop)} has type {render_type(found)}, not Prop")


# ----------------------------------------------------------------------------
# Checker
# ----------------------------------------------------------------------------


class _Reject(Exception):
    """Raised by rule checks."""


def _expect(condition: bool, reason: str) -> None:
    if not condition:
        raise _Reject(reason)


def _as(node: Derivation, kind: type, what: str) -> Any:
    _expect(isinstance(node.conclusion, kind), f"{what} must be a {kind.__name__.lower()} judgment")
    return node.conclusion


def _split(d: Derivation) -> Tuple[List[Derivation], List[Derivation]]:
    truths = [p for p in d.premises if isinstance(p.conclusion, Truth)]
    sides = [p for p in d.premises if not isinstance(p.conclusion, Truth)]
    return truths, sides


def _optional(sides: Sequence[Derivation], expected: Sequence[Judgment]) -> None:
    """Every supplied side premise must derive one of the expected judgments."""
    for side in sides:
        _expect(
            any(judgment_eq(side.conclusion, e) for e in expected),
            f"unexpected premise {render_judgment(side.conclusion)}",
        )


def _exact(d: Derivation, count: int) -> None:
    _expect(len(d.premises) == count, f"{d.rule} takes {count} premises, got {len(d.premises)}")


def _same_hyps(premise: Truth, ctx: Context, hyps: Hyps, what: str) -> None:
    _expect(premise.ctx == ctx, f"{what} changes the context")
    _expect(_hyps_eq(premise.hyps, hyps), f"{what} changes the hypotheses")


def _imp_parts(term: HolTerm) -> Optional[Tuple[HolTerm, HolTerm]]:
    if isinstance(term, Apply) and isinstance(term.fn, Apply) and isinstance(term.fn.fn, Imp):
        return term.fn.arg, term.arg
    return None


def _forall_parts(term: HolTerm) -> Optional[Tuple[HolType, HolTerm]]:
    if isinstance(term, Apply) and isinstance(term.fn, ForallC):
        return term.fn.type, term.arg
    return None


def _eq_rule(d: Derivation, j: DefEq) -> None:
    """Equality rules; their premises are all equality judgments."""
    ctx = j.ctx
    if d.rule == "eq-sym":
        _exact(d, 1)
        p = _as(d.premises[0], DefEq, "premise")
        _expect(judgment_eq(p, DefEq(ctx, j.right, j.left, j.type)), "premise is not the symmetric equation")
    elif d.rule == "eq-trans":
        _exact(d, 2)
        (p, q) = (_as(d.premises[0], DefEq, "first premise"), _as(d.premises[1], DefEq, "second premise"))
        _expect(p.ctx == ctx and q.ctx == ctx, "premises change the context")
        _expect(p.type == j.type and q.type == j.type, "premises are at another type")
        _expect(alpha_eq(p.left, j.left) and alpha_eq(q.right, j.right), "premises do not connect the two sides")
        _expect(alpha_eq(p.right, q.left), "premises do not share their middle term")
    elif d.rule == "eq-var":
        _exact(d, 0)
        _expect(isinstance(j.left, Var) and j.left == j.right, "both sides must be the same variable")
        _expect(lookup(ctx, j.left.name) == j.type, "variable is not declared at this type")  # type: ignore[union-attr]
    elif d.rule == "eq-app":
        _exact(d, 2)
        _expect(isinstance(j.left, Apply) and isinstance(j.right, Apply), "both sides must be applications")
        (p, q) = (_as(d.premises[0], DefEq, "first premise"), _as(d.premises[1], DefEq, "second premise"))
        _expect(p.ctx == ctx and q.ctx == ctx, "premises change the context")
        _expect(p.type == Arrow(q.type, j.type), "premise types do not fit the application")
        _expect(
            alpha_eq(p.left, j.left.fn) and alpha_eq(p.right, j.right.fn),  # type: ignore[union-attr]
            "first premise does not equate the functions",
        )
        _expect(
            alpha_eq(q.left, j.left.arg) and alpha_eq(q.right, j.right.arg),  # type: ignore[union-attr]
            "second premise does not equate the arguments",
        )
    elif d.rule == "eq-lam":
        _exact(d, 1)
        (m, n) = (j.left, j.right)
        _expect(isinstance(m, Lam) and isinstance(n, Lam), "both sides must be abstractions")
        assert isinstance(m, Lam) and isinstance(n, Lam)
        _expect(m.type == n.type, "binders have different types")
        _expect(isinstance(j.type, Arrow) and j.type.dom == m.type, "type is not a function type from the binder")
        p = _as(d.premises[0], DefEq, "premise")
        _expect(len(p.ctx) == len(ctx) + 1 and p.ctx[:-1] == ctx, "premise must extend the context by one variable")
        (x, t) = p.ctx[-1]
        _expect(t == m.type, "premise binds the variable at another type")
        _expect(x not in dict(ctx), f"variable {x!r} is not fresh")
        _expect(p.type == j.type.cod, "premise is at another type")  # type: ignore[union-attr]
        _expect(alpha_eq(p.left, subst(m.body, m.var, Var(x))), "premise does not relate the left body")
        _expect(alpha_eq(p.right, subst(n.body, n.var, Var(x))), "premise does not relate the right body")
    elif d.rule == "eq-beta":
        redex = j.left
        _expect(isinstance(redex, Apply) and isinstance(redex.fn, Lam), "left side must be a beta redex")
        assert isinstance(redex, Apply) and isinstance(redex.fn, Lam)
        lam = redex.fn
        _expect(alpha_eq(j.right, subst(lam.body, lam.var, redex.arg)), "right side is not the contractum")
        _expect(len(d.premises) in (0, 2), "eq-beta takes no premises or both typing premises")
        _optional(
            d.premises,
            (
                DefEq(ctx + ((lam.var, lam.type),), lam.body, lam.body, j.type),
                DefEq(ctx, redex.arg, redex.arg, lam.type),
            ),
        )
    elif d.rule == "eq-eta":
        _exact(d, 1)
        _expect(isinstance(j.type, Arrow), "type must be a function type")
        assert isinstance(j.type, Arrow)
        p = _as(d.premises[0], DefEq, "premise")
        _expect(len(p.ctx) == len(ctx) + 1 and p.ctx[:-1] == ctx, "premise must extend the context by one variable")
        (x, t) = p.ctx[-1]
        _expect(t == j.type.dom, "premise binds the variable at another type")
        _expect(x not in dict(ctx), f"variable {x!r} is not fresh")
        _expect(x not in free_vars(j.left) | free_vars(j.right), f"variable {x!r} occurs in the equated terms")
        _expect(p.type == j.type.cod, "premise is at another type")
        _expect(
            alpha_eq(p.left, Apply(j.left, Var(x))) and alpha_eq(p.right, Apply(j.right, Var(x))),
            "premise does not apply both sides to the variable",
        )
    elif d.rule == "eq-imp":
        _exact(d, 0)
        _expect(isinstance(j.left, Imp) and isinstance(j.right, Imp), "both sides must be the implication constant")
    else:
        _exact(d, 0)
        _expect(
            isinstance(j.left, ForallC) and j.left == j.right,
            "both sides must be the same quantifier constant",
        )


def _wf_rule(d: Derivation, j: Wf) -> None:
    if d.rule == "wf-empty":
        _exact(d, 0)
        _expect(not j.hyps, "hypotheses must be empty")
        return
    _expect(bool(j.hyps), "hypotheses must not be empty")
    (rest, last) = (j.hyps[:-1], j.hyps[-1])
    _optional(d.premises, (Wf(j.ctx, rest), DefEq(j.ctx, last, last, PROP)))


def _truth_rule(d: Derivation, j: Truth) -> None:
    (truths, sides) = _split(d)
    arity = TRUTH_ARITY[d.rule]
    _expect(len(truths) == arity, f"{d.rule} takes {arity} truth premises, got {len(truths)}")
    (ctx, hyps, prop) = (j.ctx, j.hyps, j.prop)
    wf = Wf(ctx, hyps)

    if d.rule == "hyp":
        _expect(any(alpha_eq(prop, h) for h in hyps), f"{render_term(prop)} is not a hypothesis")
        _optional(sides, (wf,))
    elif d.rule == "conv":
        p = truths[0].conclusion
        _same_hyps(p, ctx, hyps, "premise")
        _expect(def_eq(ctx, p.prop, prop, PROP), "premise is not definitionally equal to the conclusion")
        _optional(sides, (DefEq(ctx, p.prop, prop, PROP),))
    elif d.rule == "imp-elim":
        (major, minor) = (truths[0].conclusion, truths[1].conclusion)
        _same_hyps(major, ctx, hyps, "first premise")
        _same_hyps(minor, ctx, hyps, "second premise")
        parts = _imp_parts(major.prop)
        _expect(parts is not None, "first premise is not an implication")
        assert parts is not None
        _expect(alpha_eq(parts[1], prop), "conclusion is not the consequent")
        _expect(alpha_eq(parts[0], minor.prop), "second premise is not the antecedent")
        _optional(sides, ())
    elif d.rule == "imp-intro":
        parts = _imp_parts(prop)
        _expect(parts is not None, "conclusion is not an implication")
        assert parts is not None
        p = truths[0].conclusion
        _expect(p.ctx == ctx, "premise changes the context")
        _expect(len(p.hyps) == len(hyps) + 1 and _hyps_eq(p.hyps[:-1], hyps), "premise must add one hypothesis")
        _expect(alpha_eq(p.hyps[-1], parts[0]), "added hypothesis is not the antecedent")
        _expect(alpha_eq(p.prop, parts[1]), "premise does not derive the consequent")
        _optional(sides, ())
    elif d.rule == "forall-elim":
        _expect(isinstance(prop, Apply), "conclusion is not an instance")
        assert isinstance(prop, Apply)
        p = truths[0].conclusion
        _same_hyps(p, ctx, hyps, "premise")
        parts = _forall_parts(p.prop)
        _expect(parts is not None, "premise is not universally quantified")
        assert parts is not None
        (type, body) = parts
        _expect(alpha_eq(prop.fn, body), "conclusion does not instantiate the premise")
        witness = infer_type(ctx, prop.arg)
        _expect(witness == type, f"witness has type {render_type(witness)}, not {render_type(type)}")
        _optional(sides, (DefEq(ctx, prop.arg, prop.arg, type),))
    else:
        parts = _forall_parts(prop)
        _expect(parts is not None, "conclusion is not universally quantified")
        assert parts is not None
        (type, body) = parts
        p = truths[0].conclusion
        _expect(len(p.ctx) == len(ctx) + 1 and p.ctx[:-1] == ctx, "premise must extend the context by one variable")
        (x, t) = p.ctx[-1]
        _expect(t == type, "premise binds the variable at another type")
        _expect(x not in dict(ctx), f"variable {x!r} is not fresh")
        _expect(
            x not in free_vars(body) and all(x not in free_vars(h) for h in hyps),
            f"variable {x!r} occurs free in the conclusion or hypotheses",
        )
        _expect(_hyps_eq(p.hyps, hyps), "premise changes the hypotheses")
        _expect(alpha_eq(p.prop, Apply(body, Var(x))), "premise is not the body applied to the variable")
        _optional(sides, (wf, DefEq(ctx, body, body, Arrow(type, PROP))))


def _check_node(d: Derivation) -> None:
    _expect(d.rule in RULES, f"unknown rule {d.rule!r}")
    j = d.conclusion
    try:
        check_judgment(j)
        if d.rule in EQUALITY_RULES:
            _expect(isinstance(j, DefEq), f"{d.rule} concludes an equality")
            _eq_rule(d, j)  # type: ignore[arg-type]
        elif d.rule in WF_RULES:
            _expect(isinstance(j, Wf), f"{d.rule} concludes well-formedness")
            _wf_rule(d, j)  # type: ignore[arg-type]
        else:
            _expect(isinstance(j, Truth), f"{d.rule} concludes a truth")
            _truth_rule(d, j)  # type: ignore[arg-type]
    except HolTypeError as error:
        raise _Reject(str(error)) from None


def check(d: Derivation) -> CheckResult:
    """Checks a derivation.

    Every node is checked in pre-order; the first failing node is reported.

    Args:
        d (Derivation): Derivation to check.

    Returns:
        CheckResult: Validity, with the first failing node and reason.
    """
    for (path, node) in d.nodes():
        try:
            _check_node(node)
        except _Reject as reject:
            logger.debug("rejected %s at %s: %s", node.rule, path, reject)
            return CheckResult(False, node.rule, path, str(reject))
    return CheckResult(True)


# ----------------------------------------------------------------------------
# Weakening
# ----------------------------------------------------------------------------


def weaken(d: Derivation, hyp: HolTerm) -> Derivation:
    """Adds a hypothesis in front of every hypothesis list of a derivation.

    `wf-empty` leaves become `wf-extend` nodes over the original leaf.

    Args:
        d (Derivation): Valid derivation.
        hyp (HolTerm): Proposition well-typed under the root context whose
            free variables are not bound further up the tree.

    Returns:
        Derivation: The weakened derivation.
    """
    premises = tuple(weaken(p, hyp) for p in d.premises)
    j = d.conclusion
    if isinstance(j, DefEq):
        return Derivation(d.rule, premises, j)
    if isinstance(j, Wf):
        if d.rule == "wf-empty":
            return Derivation("wf-extend", (d,), Wf(j.ctx, (hyp,)))
        return Derivation(d.rule, premises, Wf(j.ctx, (hyp,) + j.hyps))
    return Derivation(d.rule, premises, Truth(j.ctx, (hyp,) + j.hyps, j.prop))


# ----------------------------------------------------------------------------
# S-expressions
# ----------------------------------------------------------------------------


class _SList(list):  # type: ignore[type-arg]
    """Parsed list remembering where it started."""

    line: Optional[int] = None
    column: Optional[int] = None


@functools.lru_cache(maxsize=None)
def _parser() -> lark.Lark:
    """Loads the S-expression grammar once."""
    return lark.Lark(GRAMMAR.read_text(encoding="utf-8"), parser="lalr", propagate_positions=True)


class _Reader(lark.Transformer):  # type: ignore[type-arg]
    """Turns parse trees into nested lists of tokens."""

    def start(self, items: List[Any]) -> List[Any]:
        return items

    @lark.v_args(meta=True)
    def list(self, meta: Any, items: List[Any]) -> _SList:
        out = _SList(items)
        if not meta.empty:
            (out.line, out.column) = (meta.line, meta.column)
        return out


KEYWORDS = frozenset(
    ("Prop", "->", "lambda", "imp", "all", "=>", "forall", "exists", "and", "or", "not", "bot", "top")
)


class _Decoder:
    """Reads types, terms, judgments and derivations from S-expressions."""

    def __init__(self, source: Optional[str]) -> None:
        self.source = source

    def fail(self, message: str, item: Any) -> HolSyntaxError:
        return HolSyntaxError(message, self.source, getattr(item, "line", None), getattr(item, "column", None))

    def symbol(self, item: Any, what: str) -> str:
        if not isinstance(item, lark.Token):
            raise self.fail(f"expected {what}", item)
        return str(item)

    def name(self, item: Any) -> str:
        name = self.symbol(item, "a variable name")
        if name in KEYWORDS:
            raise self.fail(f"{name!r} is reserved", item)
        return name

    def shape(self, item: Any, head: str, size: int) -> List[Any]:
        if not isinstance(item, list) or len(item) != size:
            raise self.fail(f"malformed {head} form, expected {size - 1} arguments", item)
        return item

    def type(self, item: Any) -> HolType:
        if isinstance(item, lark.Token):
            return PROP if str(item) == "Prop" else Base(self.name(item))
        if len(item) < 3 or not (isinstance(item[0], lark.Token) and str(item[0]) == "->"):
            raise self.fail("expected a type", item)
        types = [self.type(t) for t in item[1:]]
        result = types[-1]
        for dom in reversed(types[:-1]):
            result = Arrow(dom, result)
        return result

    def binder(self, item: Any) -> Tuple[str, HolType]:
        if not isinstance(item, list) or len(item) != 2:
            raise self.fail("expected a binder (x T)", item)
        return self.name(item[0]), self.type(item[1])

    def term(self, item: Any) -> HolTerm:
        if isinstance(item, lark.Token):
            word = str(item)
            if word == "imp":
                return Imp()
            if word == "bot":
                return bottom()
            if word == "top":
                return top()
            return Var(self.name(item))
        if not item:
            raise self.fail("empty term", item)
        head = str(item[0]) if isinstance(item[0], lark.Token) else None
        if head == "lambda":
            (_, bind, body) = self.shape(item, head, 3)
            (var, type) = self.binder(bind)
            return Lam(var, type, self.term(body))
        if head == "all":
            return ForallC(self.type(self.shape(item, head, 2)[1]))
        if head in ("forall", "exists"):
            (_, bind, body) = self.shape(item, head, 3)
            (var, type) = self.binder(bind)
            return (forall if head == "forall" else exists)(var, type, self.term(body))
        if head in ("=>", "and", "or"):
            (_, left, right) = self.shape(item, head, 3)
            build: Callable[[HolTerm, HolTerm], HolTerm] = {"=>": imp, "and": conj, "or": disj}[head]
            return build(self.term(left), self.term(right))
        if head == "not":
            return neg(self.term(self.shape(item, head, 2)[1]))
        if len(item) < 2:
            raise self.fail("application needs an argument", item)
        result = self.term(item[0])
        for arg in item[1:]:
            result = Apply(result, self.term(arg))
        return result

    def context(self, item: Any) -> Context:
        if not isinstance(item, list):
            raise self.fail("expected a context ((x T) ...)", item)
        return tuple(self.binder(b) for b in item)

    def hyps(self, item: Any) -> Hyps:
        if not isinstance(item, list):
            raise self.fail("expected a hypothesis list (M ...)", item)
        return tuple(self.term(h) for h in item)

    def judgment(self, item: Any) -> Judgment:
        head = str(item[0]) if isinstance(item, list) and item and isinstance(item[0], lark.Token) else None
        if head == "true":
            (_, ctx, hyps, prop) = self.shape(item, head, 4)
            return Truth(self.context(ctx), self.hyps(hyps), self.term(prop))
        if head == "wf":
            (_, ctx, hyps) = self.shape(item, head, 3)
            return Wf(self.context(ctx), self.hyps(hyps))
        if head == "eq":
            (_, ctx, left, right, type) = self.shape(item, head, 5)
            return DefEq(self.context(ctx), self.term(left), self.term(right), self.type(type))
        raise self.fail("expected a judgment (true ...), (wf ...) or (eq ...)", item)

    def derivation(self, item: Any) -> Derivation:
        if not isinstance(item, list) or len(item) != 3:
            raise self.fail("expected a derivation (RULE (PREMISE ...) JUDGMENT)", item)
        rule = self.symbol(item[0], "a rule name")
        if rule not in RULES:
            raise self.fail(f"unknown rule {rule!r}", item[0])
        if not isinstance(item[1], list):
            raise self.fail("expected a premise list", item[1])
        return Derivation(rule, tuple(self.derivation(p) for p in item[1]), self.judgment(item[2]))


def read_sexps(text: str, source: Optional[str] = None) -> List[Any]:
    """Reads every S-expression in a text.

    Raises:
        HolSyntaxError: If the parentheses do not balance.
    """
    try:
        tree = _parser().parse(text)
    except lark.exceptions.UnexpectedInput as error:
        raise HolSyntaxError("unbalanced parentheses", source, error.line, error.column) from None
    return _Reader().transform(tree)  # type: ignore[no-any-return]


def parse_sexp(text: str, source: Optional[str] = None) -> List[Derivation]:
    """Reads the derivations in a text, one per top-level S-expression.

    Args:
        text (str): Derivation file contents.
        source (Optional[str]): Name reported in errors.

    Returns:
        List[Derivation]: The derivations, in order.

    Raises:
        HolSyntaxError: If the text is not a sequence of derivations.
    """
    decoder = _Decoder(source)
    return [decoder.derivation(item) for item in read_sexps(text, source)]


def parse_term(text: str, source: Optional[str] = None) -> HolTerm:
    """Reads a single term."""
    items = read_sexps(text, source)
    if len(items) != 1:
        raise HolSyntaxError("expected exactly one term", source)
    return _Decoder(source).term(items[0])


def parse_type(text: str, source: Optional[str] = None) -> HolType:
    """Reads a single type."""
    items = read_sexps(text, source)
    if len(items) != 1:
        raise HolSyntaxError("expected exactly one type", source)
    return _Decoder(source).type(items[0])


def render_type(type: HolType) -> str:
    """S-expression of a type."""
    if isinstance(type, PropType):
        return "Prop"
    if isinstance(type, Base):
        return type.name
    doms = []
    while isinstance(type, Arrow):
        doms.append(render_type(type.dom))
        type = type.cod
    return f"(-> {' '.join(doms)} {render_type(type)})"


def render_term(term: HolTerm) -> str:
    """S-expression of a term, with implications and quantifiers sugared."""
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Imp):
        return "imp"
    if isinstance(term, ForallC):
        return f"(all {render_type(term.type)})"
    if isinstance(term, Lam):
        return f"(lambda ({term.var} {render_type(term.type)}) {render_term(term.body)})"
    parts = _imp_parts(term)
    if parts is not None:
        return f"(=> {render_term(parts[0])} {render_term(parts[1])})"
    quantified = _forall_parts(term)
    if quantified is not None and isinstance(quantified[1], Lam) and quantified[1].type == quantified[0]:
        lam = quantified[1]
        return f"(forall ({lam.var} {render_type(lam.type)}) {render_term(lam.body)})"
    args = []
    while isinstance(term, Apply):
        args.append(term.arg)
        term = term.fn
    return "(" + " ".join([render_term(term)] + [render_term(a) for a in reversed(args)]) + ")"


def render_context(ctx: Context) -> str:
    """S-expression of a context."""
    return "(" + " ".join(f"({name} {render_type(type)})" for (name, type) in ctx) + ")"


def render_judgment(j: Judgment) -> str:
    """S-expression of a judgment."""
    if isinstance(j, DefEq):
        return f"(eq {render_context(j.ctx)} {render_term(j.left)} {render_term(j.right)} {render_type(j.type)})"
    hyps = "(" + " ".join(render_term(h) for h in j.hyps) + ")"
    if isinstance(j, Wf):
        return f"(wf {render_context(j.ctx)} {hyps})"
    return f"(true {render_context(j.ctx)} {hyps} {render_term(j.prop)})"


def render_derivation(d: Derivation, indent: int = 0) -> str:
    """Indented S-expression of a derivation, readable by `parse_sexp`."""
    pad = "  " * indent
    if not d.premises:
        return f"{pad}({d.rule} ()\n{pad}  {render_judgment(d.conclusion)})"
    premises = "\n".join(render_derivation(p, indent + 2) for p in d.premises)
    return f"{pad}({d.rule}\n{pad}  (\n{premises})\n{pad}  {render_judgment(d.conclusion)})"
