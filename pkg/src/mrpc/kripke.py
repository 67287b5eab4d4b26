"""Finite Kripke frames: relation arithmetic, modal semantics, KRel term
evaluation and a brute-force validity oracle.

Relations are dense boolean matrices. Adjoint symbols are never stored:
R_⧫i is the converse of R_□i and R_■i the converse of R_◇i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .correspondence import TermInequality
from .errors import DimensionMismatch, TooLarge, UnknownSymbol
from .syntax import Modality, Mrp, PureInequality
from .terms import Circ, Delta, Star, Sym, Term, print_term

MAX_ORACLE_WORLDS = 20


def _bool(m) -> np.ndarray:
    return np.asarray(m, dtype=bool)


def _check_square(*rels: np.ndarray) -> None:
    n = rels[0].shape[0]
    for r in rels:
        if r.ndim != 2 or r.shape != (n, n):
            raise DimensionMismatch(f"expected {n}x{n} relations, got shape {r.shape}")


def compose(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Ordinary composition: y (R∘S) x iff ∃v. yRv and vSx."""
    _check_square(r, s)
    return (r.astype(np.int64) @ s.astype(np.int64)) > 0


def star(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Pseudo-composition: y (R⋆S) x iff ∃v. yRv and not vSx."""
    _check_square(r, s)
    return compose(r, ~s)


def bracket0(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """T^[0][V] = {u | ∀v∈V. not uTv}."""
    return ~((t.astype(np.int64) @ _bool(v).astype(np.int64)) > 0)


def bracket1(t: np.ndarray, u: np.ndarray) -> np.ndarray:
    """T^[1][U] = {v | ∀u∈U. not uTv}."""
    return bracket0(t.T, u)


def paren0(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """T^(0)[V] = {u | ∀v∈V. uTv}."""
    return bracket0(~t, v)


def box_preimage(r: np.ndarray, v: np.ndarray) -> np.ndarray:
    """[R]V = {u | ∀w. uRw ⇒ w∈V}. ``v`` may hold one valuation per column."""
    return bracket0(r, ~_bool(v))


def dia_preimage(r: np.ndarray, v: np.ndarray) -> np.ndarray:
    """⟨R⟩V = {u | ∃w. uRw and w∈V}."""
    return ~bracket0(r, v)


def _key(m: Modality) -> str:
    return f"{m.kind}.{m.index}"


@dataclass(frozen=True, eq=False)
class KripkeFrame:
    worlds: tuple[str, ...]
    relations: Mapping[Modality, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.worlds)
        rels = {}
        for m, r in self.relations.items():
            if m.is_adjoint:
                raise UnknownSymbol(f"adjoint symbol {m} cannot be stored; it is a converse")
            r = _bool(r).copy()
            if r.shape != (n, n):
                raise DimensionMismatch(f"relation {_key(m)} has shape {r.shape}, expected {(n, n)}")
            r.setflags(write=False)
            rels[m] = r
        object.__setattr__(self, "relations", rels)

    @property
    def size(self) -> int:
        return len(self.worlds)

    def rel(self, m: Modality) -> np.ndarray:
        base = self.relations.get(m.primitive)
        if base is None:
            raise UnknownSymbol(f"frame has no relation for {_key(m.primitive)}")
        return base.T if m.is_adjoint else base

    def delta(self) -> np.ndarray:
        return np.eye(self.size, dtype=bool)

    def to_json(self) -> dict:
        w = self.worlds
        return {"kind": "kripke", "worlds": list(w),
                "relations": {_key(m): [[w[i], w[j]] for i, j in zip(*np.nonzero(r))]
                              for m, r in sorted(self.relations.items())}}


def eval_krel(f: KripkeFrame, t: Term) -> np.ndarray:
    if isinstance(t, Delta):
        return f.delta()
    if isinstance(t, Sym):
        return f.rel(t.mod)
    if isinstance(t, Circ):
        return compose(eval_krel(f, t.left), eval_krel(f, t.right))
    if isinstance(t, Star):
        return star(eval_krel(f, t.left), eval_krel(f, t.right))
    raise UnknownSymbol(f"{print_term(t)} is not a KRel term")


def holds_krel(f: KripkeFrame, ineq: TermInequality) -> bool:
    if ineq.semantics != "krel":
        raise ValueError("expected a KRel inequality")
    return bool(np.all(~eval_krel(f, ineq.lhs) | eval_krel(f, ineq.rhs)))


def eval_chain(f: KripkeFrame, chain: Sequence[Modality], v: np.ndarray) -> np.ndarray:
    """Extension of chain(p) for the valuation(s) ``v`` (one per column)."""
    out = _bool(v)
    for m in reversed(tuple(chain)):
        r = f.rel(m)
        out = dia_preimage(r, out) if m.is_diamond else box_preimage(r, out)
    return out


def all_valuations(n: int) -> np.ndarray:
    """(n, 2^n) boolean matrix whose columns are all subsets of n worlds."""
    if n > MAX_ORACLE_WORLDS:
        raise TooLarge(f"{n} worlds exceed the oracle bound of {MAX_ORACLE_WORLDS}")
    cols = np.arange(2 ** n, dtype=np.int64)
    return ((cols[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1).astype(bool)


def mrp_valid_oracle(f: KripkeFrame, m: Mrp) -> bool:
    """Validity of ``m`` on ``f`` under every valuation of its variable."""
    v = all_valuations(f.size)
    return bool(np.all(~eval_chain(f, m.lhs, v) | eval_chain(f, m.rhs, v)))


def pure_valid(f: KripkeFrame, pi: PureInequality) -> bool:
    """Validity of an ALBA output: nominals range over singletons,
    conominals over complements of singletons."""
    v = f.delta() if pi.var == "j" else ~f.delta()
    return bool(np.all(~eval_chain(f, pi.lhs, v) | eval_chain(f, pi.rhs, v)))
