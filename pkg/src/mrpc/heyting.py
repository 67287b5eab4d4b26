"""Finite Heyting algebras used as truth-value parameters.

Elements are addressed by index; ``meet``, ``join`` and ``imp`` are full
numpy lookup tables so that many-valued relation arithmetic can be done by
fancy indexing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import NotALattice, NotDistributive, UnknownName


@dataclass(frozen=True, eq=False)
class HeytingAlgebra:
    names: tuple[str, ...]
    leq: np.ndarray  # leq[a, b] iff a <= b
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    imp: np.ndarray = field(repr=False)
    bottom: int
    top: int
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownName(f"{name!r} is not an element of {self.label or 'the algebra'}") from None

    def residual(self, a: int, b: int) -> int:
        return int(self.imp[a, b])

    def meet_all(self, xs: Iterable[int]) -> int:
        out = self.top
        for x in xs:
            out = int(self.meet[out, x])
        return out

    def join_all(self, xs: Iterable[int]) -> int:
        out = self.bottom
        for x in xs:
            out = int(self.join[out, x])
        return out

    def to_json(self):
        if self.label in BUILTINS:
            return self.label
        covers = [[self.names[a], self.names[b]] for a, b in _covers(self.leq)]
        return {"elements": list(self.names), "covers": covers}


def _covers(leq: np.ndarray) -> list[tuple[int, int]]:
    n = len(leq)
    lt = leq & ~np.eye(n, dtype=bool)
    return [(a, b) for a in range(n) for b in range(n)
            if lt[a, b] and not any(lt[a, c] and lt[c, b] for c in range(n))]


def _bound(leq: np.ndarray, a: int, b: int, upper: bool) -> int:
    n = len(leq)
    if upper:
        cands = [c for c in range(n) if leq[a, c] and leq[b, c]]
        best = [c for c in cands if all(leq[c, d] for d in cands)]
    else:
        cands = [c for c in range(n) if leq[c, a] and leq[c, b]]
        best = [c for c in cands if all(leq[d, c] for d in cands)]
    if len(best) != 1:
        raise NotALattice(f"elements {a} and {b} have no {'join' if upper else 'meet'}")
    return best[0]


def from_poset(elements: Sequence[str], covers: Iterable[Sequence[str]], label: str = "") -> HeytingAlgebra:
    """Build a Heyting algebra from a cover (Hasse) relation."""
    names = tuple(elements)
    if len(set(names)) != len(names) or not names:
        raise NotALattice("element names must be nonempty and distinct")
    n = len(names)
    pos = {x: i for i, x in enumerate(names)}
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        if lo not in pos or hi not in pos:
            raise UnknownName(f"cover ({lo}, {hi}) mentions an unknown element")
        leq[pos[lo], pos[hi]] = True
    for k in range(n):  # Warshall closure
        leq |= leq[:, [k]] & leq[[k], :]
    if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
        raise NotALattice("cover relation has a cycle")
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for a, b in product(range(n), repeat=2):
        meet[a, b] = _bound(leq, a, b, upper=False)
        join[a, b] = _bound(leq, a, b, upper=True)
    for a, b, c in product(range(n), repeat=3):
        if meet[a, join[b, c]] != join[meet[a, b], meet[a, c]]:
            raise NotDistributive(f"{names[a]} ∧ ({names[b]} ∨ {names[c]}) fails distributivity")
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    imp = np.empty((n, n), dtype=np.int64)
    for a, b in product(range(n), repeat=2):
        ok = [c for c in range(n) if leq[meet[a, c], b]]
        imp[a, b] = next(c for c in ok if all(leq[d, c] for d in ok))
    for t in (leq, meet, join, imp):
        t.setflags(write=False)
    return HeytingAlgebra(names, leq, meet, join, imp, bottom, top, label)


def _chain(k: int, label: str) -> HeytingAlgebra:
    names = ["0"] + [f"a{i}" for i in range(1, k - 1)] + ["1"]
    if k == 3:
        names[1] = "a"
    return from_poset(names, zip(names, names[1:]), label)


BUILTINS = ("bool2", "chain3", "chain4", "square4")


def builtin(name: str) -> HeytingAlgebra:
    if name == "bool2":
        return _chain(2, name)
    if name == "chain3":
        return _chain(3, name)
    if name == "chain4":
        return _chain(4, name)
    if name == "square4":
        return from_poset(["0", "l", "r", "1"], [("0", "l"), ("0", "r"), ("l", "1"), ("r", "1")], name)
    raise UnknownName(f"no builtin algebra named {name!r}; choose from {', '.join(BUILTINS)}")


def algebra_from_json(obj) -> HeytingAlgebra:
    if isinstance(obj, str):
        return builtin(obj)
    return from_poset(obj["elements"], obj["covers"])
