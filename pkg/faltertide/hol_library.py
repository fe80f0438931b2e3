"""Library of Checked Derivations.

The `hol_library` module builds derivations of the introduction and
elimination rules of the derived connectives, and a deterministic corpus of
corrupted derivations the kernel has to reject.

Derivations are assembled from small helpers that compute each conclusion
from the premises, so only the leaves name their judgments explicitly.
"""


# Standard
import logging

# Local
from . import hol
from .hol import PROP, Apply, Arrow, Base, Context, Derivation, HolTerm, Hyps, Lam, Truth, Var

# Typing
from typing import Dict, List, Optional


# Constants
logger = logging.getLogger(__name__)

# Replacement conclusions tried by the mutation corpus, in order
_REPLACEMENTS = (hol.bottom(), hol.imp(hol.bottom(), hol.bottom()), hol.imp(hol.top(), hol.bottom()), hol.top())

# Renamings to a rule taking a different number of truth premises
_RENAMES = {
    "hyp": "conv",
    "conv": "imp-elim",
    "imp-elim": "conv",
    "imp-intro": "imp-elim",
    "forall-elim": "imp-elim",
    "forall-intro": "hyp",
}


# ----------------------------------------------------------------------------
# Derivation builders
# ----------------------------------------------------------------------------


def _truth(d: Derivation) -> Truth:
    assert isinstance(d.conclusion, Truth)
    return d.conclusion


def assume(ctx: Context, hyps: Hyps, prop: HolTerm) -> Derivation:
    """`hyp` leaf concluding one of the hypotheses."""
    return Derivation("hyp", (), Truth(ctx, hyps, prop))


def discharge(d: Derivation) -> Derivation:
    """`imp-intro` discharging the last hypothesis of `d`."""
    j = _truth(d)
    return Derivation("imp-intro", (d,), Truth(j.ctx, j.hyps[:-1], hol.imp(j.hyps[-1], j.prop)))


def apply(major: Derivation, minor: Derivation) -> Derivation:
    """`imp-elim` from an implication and its antecedent."""
    j = _truth(major)
    consequent = j.prop.arg  # type: ignore[union-attr]
    return Derivation("imp-elim", (major, minor), Truth(j.ctx, j.hyps, consequent))


def convert(d: Derivation, prop: HolTerm) -> Derivation:
    """`conv` to a definitionally equal proposition."""
    j = _truth(d)
    return Derivation("conv", (d,), Truth(j.ctx, j.hyps, prop))


def instantiate(d: Derivation, witness: HolTerm) -> Derivation:
    """`forall-elim` followed by `conv` to the beta normal instance."""
    j = _truth(d)
    body = j.prop.arg  # type: ignore[union-attr]
    instance = Derivation("forall-elim", (d,), Truth(j.ctx, j.hyps, Apply(body, witness)))
    return convert(instance, hol.beta_normal(Apply(body, witness)))


def generalize(d: Derivation) -> Derivation:
    """`forall-intro` over the last context variable of `d`."""
    j = _truth(d)
    (ctx, (x, type)) = (j.ctx[:-1], j.ctx[-1])
    body = Lam(x, type, j.prop)
    premise = convert(d, Apply(body, Var(x)))
    return Derivation("forall-intro", (premise,), Truth(ctx, j.hyps, Apply(hol.ForallC(type), body)))


# ----------------------------------------------------------------------------
# Library
# ----------------------------------------------------------------------------


def top_intro() -> Derivation:
    """`top true` with no hypotheses."""
    ctx: Context = (("p", PROP),)
    p = Var("p")
    return generalize(discharge(assume(ctx, (p,), p)))


def and_intro() -> Derivation:
    """`a and b` from `a` and `b`."""
    (a, b, p) = (Var("a"), Var("b"), Var("p"))
    ctx: Context = (("a", PROP), ("b", PROP), ("p", PROP))
    hyps: Hyps = (a, b, hol.imp(a, hol.imp(b, p)))
    steps = apply(apply(assume(ctx, hyps, hyps[2]), assume(ctx, hyps, a)), assume(ctx, hyps, b))
    return generalize(discharge(steps))


def _projection(keep: HolTerm) -> Derivation:
    """`a => b => keep` under the hypothesis `a and b`."""
    (a, b) = (Var("a"), Var("b"))
    ctx: Context = (("a", PROP), ("b", PROP))
    hyps: Hyps = (hol.conj(a, b), a, b)
    return discharge(discharge(assume(ctx, hyps, keep)))


def and_elim(left: bool) -> Derivation:
    """`a` (or `b`) from `a and b`."""
    (a, b) = (Var("a"), Var("b"))
    ctx: Context = (("a", PROP), ("b", PROP))
    hyps: Hyps = (hol.conj(a, b),)
    keep = a if left else b
    elim = instantiate(assume(ctx, hyps, hyps[0]), keep)
    return apply(elim, _projection(keep))


def or_intro(left: bool) -> Derivation:
    """`a or b` from `a` (or from `b`)."""
    (a, b, p) = (Var("a"), Var("b"), Var("p"))
    ctx: Context = (("a", PROP), ("b", PROP), ("p", PROP))
    given = a if left else b
    hyps: Hyps = (given, hol.imp(a, p), hol.imp(b, p))
    case = hyps[1] if left else hyps[2]
    steps = apply(assume(ctx, hyps, case), assume(ctx, hyps, given))
    return generalize(discharge(discharge(steps)))


def or_elim() -> Derivation:
    """`c` from `a or b`, `a => c` and `b => c`."""
    (a, b, c) = (Var("a"), Var("b"), Var("c"))
    ctx: Context = (("a", PROP), ("b", PROP), ("c", PROP))
    hyps: Hyps = (hol.disj(a, b), hol.imp(a, c), hol.imp(b, c))
    elim = instantiate(assume(ctx, hyps, hyps[0]), c)
    return apply(apply(elim, assume(ctx, hyps, hyps[1])), assume(ctx, hyps, hyps[2]))


_ENTITY = Base("i")


def exists_intro() -> Derivation:
    """`exists (x i). q x` from `q w`."""
    (q, w, p) = (Var("q"), Var("w"), Var("p"))
    ctx: Context = (("q", Arrow(_ENTITY, PROP)), ("w", _ENTITY), ("p", PROP))
    every = hol.forall("x", _ENTITY, hol.imp(Apply(q, Var("x")), p))
    hyps: Hyps = (Apply(q, w), every)
    steps = apply(instantiate(assume(ctx, hyps, every), w), assume(ctx, hyps, hyps[0]))
    return generalize(discharge(steps))


def exists_elim() -> Derivation:
    """`c` from `exists (x i). q x` and `forall (x i). q x => c`."""
    (q, c) = (Var("q"), Var("c"))
    ctx: Context = (("q", Arrow(_ENTITY, PROP)), ("c", PROP))
    hyps: Hyps = (
        hol.exists("x", _ENTITY, Apply(q, Var("x"))),
        hol.forall("x", _ENTITY, hol.imp(Apply(q, Var("x")), c)),
    )
    elim = instantiate(assume(ctx, hyps, hyps[0]), c)
    return apply(elim, assume(ctx, hyps, hyps[1]))


def ex_falso(ctx: Context, prop: HolTerm) -> Derivation:
    """Any proposition from the hypothesis `bot`.

    Args:
        ctx (Context): Context `prop` is typed under.
        prop (HolTerm): Proposition to derive.

    Returns:
        Derivation: Derivation of `ctx | bot |- prop true`.
    """
    bottom = hol.bottom()
    return instantiate(assume(ctx, (bottom,), bottom), prop)


def library() -> Dict[str, Derivation]:
    """Every library derivation by name, in a fixed order."""
    (a, b) = (Var("a"), Var("b"))
    return {
        "top-intro": top_intro(),
        "and-intro": and_intro(),
        "and-elim-left": and_elim(left=True),
        "and-elim-right": and_elim(left=False),
        "or-intro-left": or_intro(left=True),
        "or-intro-right": or_intro(left=False),
        "or-elim": or_elim(),
        "exists-intro": exists_intro(),
        "exists-elim": exists_elim(),
        "ex-falso": ex_falso((("a", PROP), ("b", PROP)), hol.conj(a, hol.neg(b))),
    }


# ----------------------------------------------------------------------------
# Mutation corpus
# ----------------------------------------------------------------------------


def _replacement(j: Truth) -> Optional[HolTerm]:
    """First replacement conclusion neither equal to `j.prop` nor a hypothesis."""
    for candidate in _REPLACEMENTS:
        if hol.def_eq(j.ctx, candidate, j.prop, PROP):
            continue
        if any(hol.alpha_eq(candidate, h) for h in j.hyps):
            continue
        return candidate
    return None


def _ill_typed(type: hol.HolType) -> HolTerm:
    """Closed term whose type is not `type`."""
    return Lam("z", PROP, Var("z")) if type == PROP else hol.top()


def _mutants(d: Derivation) -> List[Derivation]:
    """Every single mutation of one derivation, node by node."""
    out = []
    for (path, node) in d.nodes():
        j = node.conclusion
        if not isinstance(j, Truth):
            continue
        candidate = _replacement(j)
        if candidate is not None:
            out.append(d.replace(path, Derivation(node.rule, node.premises, Truth(j.ctx, j.hyps, candidate))))
        truths = [i for (i, p) in enumerate(node.premises) if isinstance(p.conclusion, Truth)]
        if truths:
            premises = node.premises[: truths[0]] + node.premises[truths[0] + 1 :]
            out.append(d.replace(path, Derivation(node.rule, premises, j)))
        if node.rule in _RENAMES:
            out.append(d.replace(path, Derivation(_RENAMES[node.rule], node.premises, j)))
        if node.rule == "forall-elim":
            quantified = _truth(node.premises[0]).prop
            type = quantified.fn.type  # type: ignore[union-attr]
            bad = Apply(j.prop.fn, _ill_typed(type))  # type: ignore[union-attr]
            out.append(d.replace(path, Derivation(node.rule, node.premises, Truth(j.ctx, j.hyps, bad))))
    return out


def mutations(derivations: Dict[str, Derivation], count: int = 100) -> List[Derivation]:
    """Deterministic corpus of single-mutation corruptions of valid derivations.

    Each mutant changes exactly one node of one derivation by replacing its
    conclusion, dropping a truth premise, renaming its rule to one with a
    different number of truth premises, or instantiating a universal with an
    ill-typed witness. Mutants of the derivations are interleaved so every
    derivation contributes.

    Args:
        derivations (Dict[str, Derivation]): Valid derivations to corrupt.
        count (int): Size of the corpus.

    Returns:
        List[Derivation]: At most `count` mutants.
    """
    pools = [_mutants(d) for d in derivations.values()]
    corpus: List[Derivation] = []
    depth = 0
    while len(corpus) < count and any(depth < len(pool) for pool in pools):
        corpus.extend(pool[depth] for pool in pools if depth < len(pool))
        depth += 1
    logger.debug("built %d mutants from %d derivations", len(corpus[:count]), len(derivations))
    return corpus[:count]
