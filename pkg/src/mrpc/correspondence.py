"""From shape decompositions to KRel / PRel term inequalities, and the
I-/J-lifting that turns a Kripke correspondent into a polarity one."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotLiftable, ShapeMismatch, SortMismatch
from .syntax import (
    ANALYTIC,
    Modality,
    ShapeDecomposition,
    pick_shape,
    blocks,
    left_adjoint,
    right_adjoint,
)
from .terms import (
    AX,
    XA,
    Circ,
    Delta,
    IComp,
    IRel,
    JRel,
    Semi,
    Star,
    Sym,
    Term,
    print_term,
    print_term_unicode,
    sort_of,
    sym_sort,
    term_json,
)

FLAVORS = ("diamond", "box", "chi", "zeta")


@dataclass(frozen=True)
class TermInequality:
    semantics: str  # "krel" or "prel"
    lhs: Term
    rhs: Term
    shape: str | None = None
    simplified: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.semantics == "prel":
            ls, rs = sort_of(self.lhs), sort_of(self.rhs)
            if ls != rs:
                raise SortMismatch("both sides of a PRel inequality must share a sort")

    @property
    def sort(self) -> tuple | None:
        return sort_of(self.lhs) if self.semantics == "prel" else None

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} <= {print_term(self.rhs)}"

    def unicode(self) -> str:
        return f"{print_term_unicode(self.lhs)} ⊆ {print_term_unicode(self.rhs)}"

    def to_json(self) -> dict:
        out = {"semantics": self.semantics, "shape": self.shape, "text": str(self),
               "lhs": term_json(self.lhs), "rhs": term_json(self.rhs)}
        if self.semantics == "prel":
            out["sort"] = "".join(self.sort)
        return out


def _nest(parts: list[Term], op) -> Term:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = op(p, out)
    return out


def _single_kind(c: Sequence[Modality], diamonds: bool, op, unit: Term) -> Term:
    if any(t.is_diamond != diamonds for t in c):
        raise ShapeMismatch(f"expected only {'diamond' if diamonds else 'box'} tokens")
    if not c:
        return unit
    return _nest([Sym(t) for t in c], op)


def _mixed(c: Sequence[Modality], starts_diamond: bool, seq_op, block_op, unit: Term) -> Term:
    bs = blocks(c)
    if not bs:
        return unit
    if bs[0][0].is_diamond != starts_diamond:
        raise ShapeMismatch(f"chain must start with a {'diamond' if starts_diamond else 'box'} block")
    parts: list[Term] = [_nest([Sym(t) for t in b], block_op) for b in bs]
    if bs[-1][0].is_diamond != starts_diamond:
        parts.append(unit)
    return _nest(parts, seq_op)


def krel_of_chain(c: Sequence[Modality], flavor: str) -> Term:
    """KRel term of a chain. Single-kind chains compose with ∘; chi/zeta
    chains compose their blocks with ⋆, closing with Δ after a trailing
    block of the opposite kind. The empty chain gives Δ."""
    c = tuple(c)
    if flavor == "diamond":
        return _single_kind(c, True, Circ, Delta())
    if flavor == "box":
        return _single_kind(c, False, Circ, Delta())
    if flavor == "chi":
        return _mixed(c, True, Star, Circ, Delta())
    if flavor == "zeta":
        return _mixed(c, False, Star, Circ, Delta())
    raise ValueError(f"unknown flavor {flavor!r}")


def prel_of_chain(c: Sequence[Modality], flavor: str) -> Term:
    """PRel term of a chain: ;I inside blocks, ; between blocks, with the
    units J (diamond, chi) and I (box, zeta)."""
    c = tuple(c)
    if flavor == "diamond":
        return _single_kind(c, True, IComp, JRel())
    if flavor == "box":
        return _single_kind(c, False, IComp, IRel())
    if flavor == "chi":
        return _mixed(c, True, Semi, IComp, JRel())
    if flavor == "zeta":
        return _mixed(c, False, Semi, IComp, IRel())
    raise ValueError(f"unknown flavor {flavor!r}")


def _join(left: Term, right: Term, op, unit: Term) -> Term:
    if left == unit:
        return right
    if right == unit:
        return left
    return op(left, right)


def correspondent(d: ShapeDecomposition, target: str, shape: str | None = None,
                  simplify: bool = False) -> TermInequality:
    """Term inequality encoding the first-order correspondent of ``d.mrp``.

    shape (a): krel  R_LA(psi)∘R_phi ⊆ R_chi[LA(alpha)/p]
               prel  R_chi[LA(alpha)/p] ⊆ R_LA(psi) ;I R_phi
    shape (b): krel  R_RA(phi)∘R_psi ⊆ R_zeta[RA(delta)/p]
               prel  R_zeta[RA(delta)/p] ⊆ R_RA(phi) ;I R_psi

    For analytic principles the default shape is the one needing fewer
    adjoint symbols, (a) on ties; ``simplify`` splits the substituted chain
    into its two single-kind halves.
    """
    if target not in ("krel", "prel"):
        raise ValueError(f"unknown target {target!r}")
    shape = pick_shape(d, shape)
    of_chain = krel_of_chain if target == "krel" else prel_of_chain
    simplify = simplify and d.tag == ANALYTIC
    if shape == "a":
        a = d.a
        small = of_chain(left_adjoint(a.psi) + a.phi, "diamond")
        added = left_adjoint(a.alpha)
        if simplify:
            op, unit = (Circ, Delta()) if target == "krel" else (IComp, JRel())
            big = _join(of_chain(a.chi, "diamond"), of_chain(added, "diamond"), op, unit)
        else:
            big = of_chain(a.chi + added, "chi")
    else:
        b = d.b
        small = of_chain(right_adjoint(b.phi) + b.psi, "box")
        added = right_adjoint(b.delta)
        if simplify:
            op, unit = (Circ, Delta()) if target == "krel" else (IComp, IRel())
            big = _join(of_chain(b.zeta, "box"), of_chain(added, "box"), op, unit)
        else:
            big = of_chain(b.zeta + added, "zeta")
    if target == "krel":
        return TermInequality("krel", small, big, shape, simplify)
    return TermInequality("prel", big, small, shape, simplify)


# ------------------------------------------------------------------ lifting

def lift_term(t: Term, sort: tuple) -> Term:
    """Retype a KRel term at the PRel sort ``sort`` (Δ ↦ J or I, ∘ ↦ ;I, ⋆ ↦ ;)."""
    if isinstance(t, Delta):
        if sort == XA:
            return JRel()
        if sort == AX:
            return IRel()
        raise NotLiftable(f"Δ cannot be lifted at sort {''.join(sort)}")
    if isinstance(t, Sym):
        if sym_sort(t.mod) != sort:
            raise NotLiftable(f"symbol {print_term(t)} does not have sort {''.join(sort)}")
        return t
    if isinstance(t, Circ):
        if sort not in (AX, XA):
            raise NotLiftable("∘ lifts only between relations of sort AX or XA")
        return IComp(lift_term(t.left, sort), lift_term(t.right, sort))
    if isinstance(t, Star):
        head = _head_sort(t.left)
        if head[0] != sort[0]:
            raise NotLiftable(f"{print_term(t)} cannot start at carrier {sort[0]}")
        return Semi(lift_term(t.left, head), lift_term(t.right, (head[1], sort[1])))
    raise NotLiftable(f"{type(t).__name__} is not a KRel term")


def _head_sort(t: Term) -> tuple:
    """Sort of the left operand of a ⋆; it must be a single-kind ∘-block."""
    if isinstance(t, Sym):
        return sym_sort(t.mod)
    if isinstance(t, Circ):
        ls, rs = _head_sort(t.left), _head_sort(t.right)
        if ls != rs:
            raise NotLiftable("mixed-kind ∘ block")
        return ls
    raise NotLiftable(f"cannot lift {print_term(t)} as the left operand of ⋆")


def _infer_shape(k: TermInequality) -> str:
    syms = [s for s in _leading_symbols(k.lhs)] or _leading_symbols(k.rhs)
    if not syms:
        raise NotLiftable("Δ ⊆ Δ carries no shape information; pass the shape explicitly")
    return "a" if syms[0].is_diamond else "b"


def _leading_symbols(t: Term) -> list:
    if isinstance(t, Sym):
        return [t.mod]
    if isinstance(t, (Circ, Star)):
        return _leading_symbols(t.left)
    return []


def lift(k: TermInequality, shape: str | None = None) -> TermInequality:
    """J-lifting (shape a) or I-lifting (shape b) of a KRel correspondent.

    The sides swap: the PRel left side is the lifted KRel right side.
    """
    if k.semantics != "krel":
        raise NotLiftable("lift expects a KRel inequality")
    shape = shape or k.shape or _infer_shape(k)
    sort = XA if shape == "a" else AX
    return TermInequality("prel", lift_term(k.rhs, sort), lift_term(k.lhs, sort), shape,
                          k.simplified)
