"""Shared strategies and small builders for the test suite."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from hypothesis import strategies as st

from mrpc import mv
from mrpc import polarity as pl
from mrpc.heyting import builtin
from mrpc.syntax import Modality, box, dia
from mrpc.terms import AX, XA

BOX, DIA = box(), dia()


def bool_matrix(rows: int, cols: int):
    return st.lists(st.booleans(), min_size=rows * cols, max_size=rows * cols).map(
        lambda bits: np.array(bits, dtype=bool).reshape(rows, cols))


def square(n: int):
    return bool_matrix(n, n)


@st.composite
def kripke_rels(draw, max_n: int = 3, count: int = 2):
    n = draw(st.integers(1, max_n))
    return n, [draw(square(n)) for _ in range(count)]


def polarity(a: int, x: int, i: np.ndarray) -> pl.Polarity:
    return pl.Polarity(tuple(f"a{k}" for k in range(a)), tuple(f"x{k}" for k in range(x)), i)


@lru_cache(maxsize=None)
def _compatible(a: int, x: int, ibytes: bytes, sort: tuple) -> tuple:
    i = np.frombuffer(ibytes, dtype=bool).reshape(a, x)
    return tuple(pl.compatible_relations(polarity(a, x, i), sort))


def compatible(p: pl.Polarity, sort: tuple) -> tuple:
    return _compatible(len(p.A), len(p.X), p.I.tobytes(), sort)


@st.composite
def polarities(draw, max_size: int = 3):
    a = draw(st.integers(1, max_size))
    x = draw(st.integers(1, max_size))
    return polarity(a, x, draw(bool_matrix(a, x)))


@st.composite
def compatible_rel(draw, p: pl.Polarity, sort: tuple) -> np.ndarray:
    cands = compatible(p, sort)
    return cands[draw(st.integers(0, len(cands) - 1))]


def rng_mv_polarity(rng: np.random.Generator, algebra: str = "chain3", a: int = 2, x: int = 2):
    h = builtin(algebra)
    return mv.MvPolarity(h, tuple(f"a{k}" for k in range(a)), tuple(f"x{k}" for k in range(x)),
                         rng.integers(h.size, size=(a, x)))


@lru_cache(maxsize=None)
def _mv_compatible(algebra: str, a: int, x: int, ibytes: bytes, sort: tuple) -> tuple:
    h = builtin(algebra)
    i = np.frombuffer(ibytes, dtype=np.int64).reshape(a, x)
    p = mv.MvPolarity(h, tuple(f"a{k}" for k in range(a)), tuple(f"x{k}" for k in range(x)), i)
    return tuple(mv.mv_compatible_relations(p, sort))


def mv_compatible(p: mv.MvPolarity, sort: tuple) -> tuple:
    return _mv_compatible(p.algebra.label, len(p.A), len(p.X), p.I.tobytes(), sort)


def pick(rng: np.random.Generator, cands):
    return cands[int(rng.integers(len(cands)))]


__all__ = ["AX", "BOX", "DIA", "Modality", "XA"]
