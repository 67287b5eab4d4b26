"""Finite polarity-based frames (formal contexts with modal relations).

Subsets are boolean vectors, or boolean matrices holding one subset per
column. Box relations live in A×X, diamond relations in X×A. Every
composition reduces to one kernel::

    impmeet(R, T)[i, j] = ∀m. T[m, j] → R[i, m]

which is R^(0) applied column-wise to the sections of T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .correspondence import TermInequality
from .errors import DimensionMismatch, NotICompatible, SortMismatch, TooLarge, UnknownSymbol
from .kripke import KripkeFrame, box_preimage, dia_preimage
from .syntax import Modality, Mrp
from .terms import (
    AX,
    SEMI_TABLE,
    SORT_NAMES,
    XA,
    IComp,
    IRel,
    JRel,
    Semi,
    Sym,
    Term,
    print_term,
    sym_sort,
)

MAX_CONCEPT_BITS = 16


def impmeet(r: np.ndarray, t: np.ndarray) -> np.ndarray:
    if r.shape[1] != t.shape[0]:
        raise DimensionMismatch(f"cannot combine shapes {r.shape} and {t.shape}")
    return ~(((~r).astype(np.int64) @ t.astype(np.int64)) > 0)


def r0(rel: np.ndarray, v: np.ndarray) -> np.ndarray:
    """R^(0)[V] = {u | ∀w∈V. uRw}; ``v`` may be a vector or a matrix of columns."""
    v = np.asarray(v, dtype=bool)
    out = impmeet(rel, v.reshape(v.shape[0], -1))
    return out.reshape((rel.shape[0],) + v.shape[1:])


def r1(rel: np.ndarray, u: np.ndarray) -> np.ndarray:
    """R^(1)[U] = {w | ∀u∈U. uRw}."""
    return r0(rel.T, u)


@dataclass(frozen=True, eq=False)
class Polarity:
    A: tuple[str, ...]
    X: tuple[str, ...]
    I: np.ndarray

    def __post_init__(self) -> None:
        i = np.asarray(self.I, dtype=bool).copy()
        if i.shape != (len(self.A), len(self.X)):
            raise DimensionMismatch(f"I has shape {i.shape}, expected {(len(self.A), len(self.X))}")
        i.setflags(write=False)
        object.__setattr__(self, "I", i)

    def up(self, b: np.ndarray) -> np.ndarray:
        return r1(self.I, b)

    def down(self, y: np.ndarray) -> np.ndarray:
        return r0(self.I, y)

    def is_extent(self, b: np.ndarray) -> np.ndarray:
        """Stability test, column-wise for matrices."""
        return np.all(self.down(self.up(b)) == b, axis=0)

    def is_intent(self, y: np.ndarray) -> np.ndarray:
        return np.all(self.up(self.down(y)) == y, axis=0)

    def shape_of(self, sort: tuple) -> tuple[int, int]:
        size = {"A": len(self.A), "X": len(self.X)}
        return size[sort[0]], size[sort[1]]


@dataclass(frozen=True)
class Concept:
    extent: tuple[bool, ...]
    intent: tuple[bool, ...]


def _subsets(n: int) -> np.ndarray:
    if n > MAX_CONCEPT_BITS:
        raise TooLarge(f"2^{n} candidate subsets exceed the enumeration bound")
    cols = np.arange(2 ** n, dtype=np.int64)
    return ((cols[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1).astype(bool)


def concept_extents(p: Polarity) -> np.ndarray:
    """All stable extents as columns, ordered by size then lexicographically."""
    if len(p.A) <= len(p.X):
        ext = p.down(p.up(_subsets(len(p.A))))
    else:
        ext = p.down(_subsets(len(p.X)))
    uniq = np.unique(ext.T, axis=0)
    order = sorted(range(len(uniq)), key=lambda k: (int(uniq[k].sum()), tuple(~uniq[k])))
    return uniq[order].T.reshape(len(p.A), -1)


def concept_lattice(p: Polarity) -> list[Concept]:
    """Every formal concept; c ≤ d iff extent(c) ⊆ extent(d)."""
    ext = concept_extents(p)
    ints = p.up(ext)
    return [Concept(tuple(bool(v) for v in ext[:, k]), tuple(bool(v) for v in ints[:, k]))
            for k in range(ext.shape[1])]


@dataclass(frozen=True, eq=False)
class TypedRel:
    sort: tuple
    mat: np.ndarray

    def __le__(self, other: TypedRel) -> bool:
        if self.sort != other.sort:
            raise SortMismatch("cannot compare relations of different sorts")
        return bool(np.all(~self.mat | other.mat))

    def __eq__(self, other) -> bool:
        return isinstance(other, TypedRel) and self.sort == other.sort and np.array_equal(self.mat, other.mat)

    __hash__ = None


def check_i_compatible(p: Polarity, rel: TypedRel) -> bool:
    """All singleton sections of ``rel`` are Galois-stable."""
    m = np.asarray(rel.mat, dtype=bool)
    if m.shape != p.shape_of(rel.sort):
        raise DimensionMismatch(f"relation shape {m.shape} does not fit sort {SORT_NAMES[rel.sort]}")
    if rel.sort == AX:
        return bool(np.all(p.is_extent(m)) and np.all(p.is_intent(m.T)))
    if rel.sort == XA:
        return bool(np.all(p.is_intent(m)) and np.all(p.is_extent(m.T)))
    raise SortMismatch("I-compatibility is defined for sorts AX and XA")


def i_comp(p: Polarity, r: TypedRel, t: TypedRel) -> TypedRel:
    """I-mediated composition of two AX or two XA relations."""
    if r.sort != t.sort or r.sort not in (AX, XA):
        raise SortMismatch("I-composition needs two AX or two XA relations")
    k = impmeet(p.I, t.mat) if r.sort == XA else impmeet(p.I.T, t.mat)
    return TypedRel(r.sort, impmeet(r.mat, k))


def het_comp(r: TypedRel, t: TypedRel) -> TypedRel:
    """Non-mediated composition: a(R;T)b iff ∀x. xTb → aRx."""
    out = SEMI_TABLE.get((r.sort, t.sort))
    if out is None:
        raise SortMismatch(f"no composition {SORT_NAMES[r.sort]} ; {SORT_NAMES[t.sort]}")
    return TypedRel(out, impmeet(r.mat, t.mat))


def _key(m: Modality) -> str:
    return f"{m.kind}.{m.index}"


@dataclass(frozen=True, eq=False)
class PolarityFrame:
    pol: Polarity
    relations: Mapping[Modality, np.ndarray] = field(default_factory=dict)
    check: bool = True

    def __post_init__(self) -> None:
        rels = {}
        for m, r in self.relations.items():
            if m.is_adjoint:
                raise UnknownSymbol(f"adjoint symbol {m} cannot be stored; it is a converse")
            r = np.asarray(r, dtype=bool).copy()
            sort = sym_sort(m)
            if r.shape != self.pol.shape_of(sort):
                raise DimensionMismatch(f"relation {_key(m)} has shape {r.shape}, expected "
                                        f"{self.pol.shape_of(sort)}")
            if self.check and not check_i_compatible(self.pol, TypedRel(sort, r)):
                raise NotICompatible(f"relation {_key(m)} is not I-compatible")
            r.setflags(write=False)
            rels[m] = r
        object.__setattr__(self, "relations", rels)

    def rel(self, m: Modality) -> np.ndarray:
        base = self.relations.get(m.primitive)
        if base is None:
            raise UnknownSymbol(f"frame has no relation for {_key(m.primitive)}")
        return base.T if m.is_adjoint else base

    def to_json(self) -> dict:
        p = self.pol

        def pairs(mat, rows, cols):
            return [[rows[i], cols[j]] for i, j in zip(*np.nonzero(mat))]

        rels = {}
        for m, r in sorted(self.relations.items()):
            rels[_key(m)] = pairs(r, p.X, p.A) if m.is_diamond else pairs(r, p.A, p.X)
        return {"kind": "polarity", "A": list(p.A), "X": list(p.X), "I": pairs(p.I, p.A, p.X),
                "relations": rels}


def eval_prel(f: PolarityFrame, t: Term) -> TypedRel:
    if isinstance(t, IRel):
        return TypedRel(AX, f.pol.I)
    if isinstance(t, JRel):
        return TypedRel(XA, f.pol.I.T)
    if isinstance(t, Sym):
        return TypedRel(sym_sort(t.mod), f.rel(t.mod))
    if isinstance(t, IComp):
        return i_comp(f.pol, eval_prel(f, t.left), eval_prel(f, t.right))
    if isinstance(t, Semi):
        return het_comp(eval_prel(f, t.left), eval_prel(f, t.right))
    raise UnknownSymbol(f"{print_term(t)} is not a PRel term")


def holds_prel(f: PolarityFrame, ineq: TermInequality) -> bool:
    if ineq.semantics != "prel":
        raise ValueError("expected a PRel inequality")
    return eval_prel(f, ineq.lhs) <= eval_prel(f, ineq.rhs)


def eval_chain(f: PolarityFrame, chain: Sequence[Modality], ext: np.ndarray) -> np.ndarray:
    """Extents of chain(p) when p ranges over the concepts with extents ``ext``."""
    p = f.pol
    for m in reversed(tuple(chain)):
        r = f.rel(m)
        if m.is_diamond:
            ext = p.down(r0(r, ext))
        else:
            ext = r0(r, p.up(ext))
    return ext


def mrp_valid_oracle(f: PolarityFrame, m: Mrp, ext: np.ndarray | None = None) -> bool:
    """Validity of ``m`` with p ranging over the whole concept lattice.
    ``ext`` may carry precomputed concept extents."""
    if ext is None:
        ext = concept_extents(f.pol)
    return bool(np.all(~eval_chain(f, m.lhs, ext) | eval_chain(f, m.rhs, ext)))


# ------------------------------------------------------------------ lifting

def lifted_polarity(worlds: Sequence[str]) -> Polarity:
    n = len(worlds)
    return Polarity(tuple(worlds), tuple(worlds), ~np.eye(n, dtype=bool))


def lift_frame(k: KripkeFrame) -> PolarityFrame:
    """F_X: A = X = W, I = Δ^c, each relation replaced by its complement."""
    return PolarityFrame(lifted_polarity(k.worlds), {m: ~r for m, r in k.relations.items()})


def lift_rel(r: np.ndarray, sort: tuple) -> TypedRel:
    """The lifting of R^c at any of the four sorts (I_, J_, H_, K_ of the complement)."""
    return TypedRel(sort, ~np.asarray(r, dtype=bool))


def check_complex_algebra_iso(k: KripkeFrame) -> bool:
    """The concept lattice of F_X is P(W) via extents, with matching operators."""
    f = lift_frame(k)
    n = k.size
    ext = concept_extents(f.pol)
    subsets = _subsets(n)
    if ext.shape[1] != subsets.shape[1]:
        return False
    if not np.array_equal(np.unique(ext.T, axis=0), np.unique(subsets.T, axis=0)):
        return False
    for m, r in k.relations.items():
        kripke_img = dia_preimage(r, subsets) if m.is_diamond else box_preimage(r, subsets)
        if not np.array_equal(eval_chain(f, (m,), subsets), kripke_img):
            return False
    return True


# ------------------------------------------------------------ enumeration

def all_relations(rows: int, cols: int) -> Iterator[np.ndarray]:
    if rows * cols > MAX_CONCEPT_BITS:
        raise TooLarge(f"2^{rows * cols} relations exceed the enumeration bound")
    for bits in product((False, True), repeat=rows * cols):
        yield np.array(bits, dtype=bool).reshape(rows, cols)


def compatible_relations(p: Polarity, sort: tuple) -> list[np.ndarray]:
    """Every I-compatible relation of the given sort, in a fixed order."""
    rows, cols = p.shape_of(sort)
    return [m for m in all_relations(rows, cols) if check_i_compatible(p, TypedRel(sort, m))]
