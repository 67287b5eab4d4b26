"""Many-valued polarity-based frames over a finite Heyting algebra.

MV-subsets and relations are integer arrays of element indices. The
kernel mirrors the crisp one::

    impmeet(R, T)[i, j] = ⋀_m (T[m, j] → R[i, m])
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .correspondence import TermInequality
from .errors import DimensionMismatch, NotICompatible, SortMismatch, TooLarge, UnknownSymbol
from .heyting import HeytingAlgebra
from .syntax import Modality, Mrp
from .terms import AX, SEMI_TABLE, SORT_NAMES, XA, IComp, IRel, JRel, Semi, Sym, Term, print_term, sym_sort

MAX_MV_CONCEPTS = 4096
MAX_MV_RELATIONS = 1 << 16


def meet_reduce(h: HeytingAlgebra, vals: np.ndarray, axis: int = -1) -> np.ndarray:
    vals = np.moveaxis(vals, axis, -1)
    out = np.full(vals.shape[:-1], h.top, dtype=np.int64)
    for k in range(vals.shape[-1]):
        out = h.meet[out, vals[..., k]]
    return out


def join_reduce(h: HeytingAlgebra, vals: np.ndarray, axis: int = -1) -> np.ndarray:
    vals = np.moveaxis(vals, axis, -1)
    out = np.full(vals.shape[:-1], h.bottom, dtype=np.int64)
    for k in range(vals.shape[-1]):
        out = h.join[out, vals[..., k]]
    return out


def impmeet(h: HeytingAlgebra, r: np.ndarray, t: np.ndarray) -> np.ndarray:
    if r.shape[1] != t.shape[0]:
        raise DimensionMismatch(f"cannot combine shapes {r.shape} and {t.shape}")
    return meet_reduce(h, h.imp[t.T[None, :, :], r[:, None, :]])


def r0(h: HeytingAlgebra, rel: np.ndarray, u: np.ndarray) -> np.ndarray:
    """R^(0)[u](a) = ⋀_x (u(x) → R(a, x)); ``u`` may hold one MV-subset per column."""
    u = np.asarray(u, dtype=np.int64)
    out = impmeet(h, rel, u.reshape(u.shape[0], -1))
    return out.reshape((rel.shape[0],) + u.shape[1:])


def r1(h: HeytingAlgebra, rel: np.ndarray, v: np.ndarray) -> np.ndarray:
    """R^(1)[h](x) = ⋀_a (h(a) → R(a, x))."""
    return r0(h, rel.T, v)


def leq_all(h: HeytingAlgebra, a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.all(h.leq[a, b]))


def singleton(h: HeytingAlgebra, size: int, alpha: int, at: int) -> np.ndarray:
    """The MV-subset {α/w}: α at ``at`` and 0 elsewhere."""
    out = np.full(size, h.bottom, dtype=np.int64)
    out[at] = alpha
    return out


@dataclass(frozen=True, eq=False)
class MvPolarity:
    algebra: HeytingAlgebra
    A: tuple[str, ...]
    X: tuple[str, ...]
    I: np.ndarray

    def __post_init__(self) -> None:
        i = np.asarray(self.I, dtype=np.int64).copy()
        if i.shape != (len(self.A), len(self.X)):
            raise DimensionMismatch(f"I has shape {i.shape}, expected {(len(self.A), len(self.X))}")
        if i.size and (i.min() < 0 or i.max() >= self.algebra.size):
            raise DimensionMismatch("I has entries outside the algebra")
        i.setflags(write=False)
        object.__setattr__(self, "I", i)

    def up(self, hh: np.ndarray) -> np.ndarray:
        return r1(self.algebra, self.I, hh)

    def down(self, u: np.ndarray) -> np.ndarray:
        return r0(self.algebra, self.I, u)

    def is_extent(self, hh: np.ndarray) -> np.ndarray:
        return np.all(self.down(self.up(hh)) == hh, axis=0)

    def is_intent(self, u: np.ndarray) -> np.ndarray:
        return np.all(self.up(self.down(u)) == u, axis=0)

    def shape_of(self, sort: tuple) -> tuple[int, int]:
        size = {"A": len(self.A), "X": len(self.X)}
        return size[sort[0]], size[sort[1]]


@dataclass(frozen=True, eq=False)
class MvRel:
    sort: tuple
    mat: np.ndarray


def all_mv_subsets(h: HeytingAlgebra, n: int) -> np.ndarray:
    """(n, |𝐀|^n) matrix whose columns are all maps n → 𝐀."""
    if h.size ** n > MAX_MV_CONCEPTS:
        raise TooLarge(f"{h.size}^{n} candidate MV-subsets exceed {MAX_MV_CONCEPTS}")
    cols = np.arange(h.size ** n, dtype=np.int64)
    return (cols[None, :] // (h.size ** np.arange(n, dtype=np.int64))[:, None]) % h.size


def mv_concept_extents(p: MvPolarity) -> np.ndarray:
    """Extents of all 𝐀-concepts, as deduplicated columns."""
    h = p.algebra
    if h.size ** max(len(p.A), len(p.X)) > MAX_MV_CONCEPTS:
        raise TooLarge(f"{h.size}^{max(len(p.A), len(p.X))} exceeds the concept guard {MAX_MV_CONCEPTS}")
    ext = p.down(all_mv_subsets(h, len(p.X)))
    return np.unique(ext.T, axis=0).T.reshape(len(p.A), -1)


def mv_concepts(p: MvPolarity) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    ext = mv_concept_extents(p)
    ints = p.up(ext)
    return [(tuple(int(v) for v in ext[:, k]), tuple(int(v) for v in ints[:, k]))
            for k in range(ext.shape[1])]


def mv_check_i_compatible(p: MvPolarity, rel: MvRel) -> bool:
    """Every section R^(0)[{α/w}] and R^(1)[{α/w}] is Galois-stable.

    Since R^(0)[{α/w}] = α → R^(0)[{1/w}] and stable sets are closed under
    α → (·), testing all α is equivalent to testing α = 1; we test all.
    """
    h = p.algebra
    m = np.asarray(rel.mat, dtype=np.int64)
    if m.shape != p.shape_of(rel.sort):
        raise DimensionMismatch(f"relation shape {m.shape} does not fit sort {SORT_NAMES[rel.sort]}")
    if rel.sort not in (AX, XA):
        raise SortMismatch("I-compatibility is defined for sorts AX and XA")
    for alpha in range(h.size):
        cols = h.imp[alpha, m]  # column w is R^(0)[{α/w}], row w is R^(1)[{α/w}]
        rows = cols.T
        if rel.sort == AX:
            ok = np.all(p.is_extent(cols)) and np.all(p.is_intent(rows))
        else:
            ok = np.all(p.is_intent(cols)) and np.all(p.is_extent(rows))
        if not ok:
            return False
    return True


def mv_i_comp(p: MvPolarity, r: MvRel, t: MvRel) -> MvRel:
    if r.sort != t.sort or r.sort not in (AX, XA):
        raise SortMismatch("I-composition needs two AX or two XA relations")
    h = p.algebra
    k = impmeet(h, p.I, t.mat) if r.sort == XA else impmeet(h, p.I.T, t.mat)
    return MvRel(r.sort, impmeet(h, r.mat, k))


def mv_het_comp(h: HeytingAlgebra, r: MvRel, t: MvRel) -> MvRel:
    out = SEMI_TABLE.get((r.sort, t.sort))
    if out is None:
        raise SortMismatch(f"no composition {SORT_NAMES[r.sort]} ; {SORT_NAMES[t.sort]}")
    return MvRel(out, impmeet(h, r.mat, t.mat))


def _key(m: Modality) -> str:
    return f"{m.kind}.{m.index}"


@dataclass(frozen=True, eq=False)
class MvPolarityFrame:
    pol: MvPolarity
    relations: Mapping[Modality, np.ndarray] = field(default_factory=dict)
    check: bool = True

    def __post_init__(self) -> None:
        rels = {}
        for m, r in self.relations.items():
            if m.is_adjoint:
                raise UnknownSymbol(f"adjoint symbol {m} cannot be stored; it is a converse")
            r = np.asarray(r, dtype=np.int64).copy()
            sort = sym_sort(m)
            if r.shape != self.pol.shape_of(sort):
                raise DimensionMismatch(f"relation {_key(m)} has shape {r.shape}")
            if self.check and not mv_check_i_compatible(self.pol, MvRel(sort, r)):
                raise NotICompatible(f"relation {_key(m)} is not I-compatible")
            r.setflags(write=False)
            rels[m] = r
        object.__setattr__(self, "relations", rels)

    @property
    def algebra(self) -> HeytingAlgebra:
        return self.pol.algebra

    def rel(self, m: Modality) -> np.ndarray:
        base = self.relations.get(m.primitive)
        if base is None:
            raise UnknownSymbol(f"frame has no relation for {_key(m.primitive)}")
        return base.T if m.is_adjoint else base

    def to_json(self) -> dict:
        names = self.algebra.names

        def named(mat):
            return [[names[v] for v in row] for row in mat]

        return {"kind": "mv-polarity", "algebra": self.algebra.to_json(),
                "A": list(self.pol.A), "X": list(self.pol.X), "I": named(self.pol.I),
                "relations": {_key(m): named(r) for m, r in sorted(self.relations.items())}}


def mv_eval_prel(f: MvPolarityFrame, t: Term) -> MvRel:
    if isinstance(t, IRel):
        return MvRel(AX, f.pol.I)
    if isinstance(t, JRel):
        return MvRel(XA, f.pol.I.T)
    if isinstance(t, Sym):
        return MvRel(sym_sort(t.mod), f.rel(t.mod))
    if isinstance(t, IComp):
        return mv_i_comp(f.pol, mv_eval_prel(f, t.left), mv_eval_prel(f, t.right))
    if isinstance(t, Semi):
        return mv_het_comp(f.algebra, mv_eval_prel(f, t.left), mv_eval_prel(f, t.right))
    raise UnknownSymbol(f"{print_term(t)} is not a PRel term")


def mv_holds_prel(f: MvPolarityFrame, ineq: TermInequality) -> bool:
    if ineq.semantics != "prel":
        raise ValueError("expected a PRel inequality")
    lhs, rhs = mv_eval_prel(f, ineq.lhs), mv_eval_prel(f, ineq.rhs)
    if lhs.sort != rhs.sort:
        raise SortMismatch("sides have different sorts")
    return leq_all(f.algebra, lhs.mat, rhs.mat)


def mv_eval_chain(f: MvPolarityFrame, chain: Sequence[Modality], ext: np.ndarray) -> np.ndarray:
    p, h = f.pol, f.algebra
    for m in reversed(tuple(chain)):
        r = f.rel(m)
        if m.is_diamond:
            ext = p.down(r0(h, r, ext))
        else:
            ext = r0(h, r, p.up(ext))
    return ext


def mv_mrp_valid_oracle(f: MvPolarityFrame, m: Mrp, ext: np.ndarray | None = None) -> bool:
    if ext is None:
        ext = mv_concept_extents(f.pol)
    return leq_all(f.algebra, mv_eval_chain(f, m.lhs, ext), mv_eval_chain(f, m.rhs, ext))


def all_mv_relations(h: HeytingAlgebra, rows: int, cols: int) -> Iterator[np.ndarray]:
    if h.size ** (rows * cols) > MAX_MV_RELATIONS:
        raise TooLarge(f"{h.size}^{rows * cols} relations exceed the enumeration bound")
    for vals in product(range(h.size), repeat=rows * cols):
        yield np.array(vals, dtype=np.int64).reshape(rows, cols)


def mv_compatible_relations(p: MvPolarity, sort: tuple) -> list[np.ndarray]:
    rows, cols = p.shape_of(sort)
    return [m for m in all_mv_relations(p.algebra, rows, cols)
            if mv_check_i_compatible(p, MvRel(sort, m))]
