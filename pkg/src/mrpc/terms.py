"""Relation-algebra terms.

KRel terms are untyped and built from ``Delta``, relation symbols, ``Circ``
(ordinary composition ∘) and ``Star`` (pseudo-composition ⋆).
PRel terms are sorted and built from ``IRel``, ``JRel``, relation symbols,
``IComp`` (I-mediated composition ;I) and ``Semi`` (non-mediated ;).
A sort is a pair of carriers, e.g. ``("A", "X")`` for A×X.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import SortMismatch
from .syntax import Modality, chain_from_json

AX = ("A", "X")
XA = ("X", "A")
AA = ("A", "A")
XX = ("X", "X")

SORT_NAMES = {AX: "AX", XA: "XA", AA: "AA", XX: "XX"}

# the six non-I-mediated composition typings
SEMI_TABLE = {
    (AX, XA): AA,
    (XA, AX): XX,
    (AA, AX): AX,
    (XA, AA): XA,
    (XX, XA): XA,
    (AX, XX): AX,
}


@dataclass(frozen=True)
class Delta:
    pass


@dataclass(frozen=True)
class IRel:
    pass


@dataclass(frozen=True)
class JRel:
    pass


@dataclass(frozen=True)
class Sym:
    mod: Modality


@dataclass(frozen=True)
class Circ:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Star:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class IComp:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Semi:
    left: "Term"
    right: "Term"


Term = Union[Delta, IRel, JRel, Sym, Circ, Star, IComp, Semi]

_BINARY = (Circ, Star, IComp, Semi)
_OP_TEXT = {Circ: "o", Star: "*", IComp: ";I", Semi: ";"}
_OP_UNICODE = {Circ: "∘", Star: "⋆", IComp: ";_I", Semi: ";"}
_ASSOCIATIVE = (Circ, IComp)

_SYM_TEXT = {"dia": "R<{}>", "box": "R[{}]", "bdia": "R>{}", "bbox": "R#{}"}
_SYM_UNICODE = {"dia": "R◇", "box": "R□", "bdia": "R⧫", "bbox": "R■"}


def is_krel(t: Term) -> bool:
    if isinstance(t, (Delta, Sym)):
        return True
    if isinstance(t, (Circ, Star)):
        return is_krel(t.left) and is_krel(t.right)
    return False


def is_prel(t: Term) -> bool:
    if isinstance(t, (IRel, JRel, Sym)):
        return True
    if isinstance(t, (IComp, Semi)):
        return is_prel(t.left) and is_prel(t.right)
    return False


def sym_sort(m: Modality) -> tuple:
    return XA if m.is_diamond else AX


def sort_of(t: Term) -> tuple:
    """Sort of a PRel term; raises SortMismatch on ill-typed terms."""
    if isinstance(t, IRel):
        return AX
    if isinstance(t, JRel):
        return XA
    if isinstance(t, Sym):
        return sym_sort(t.mod)
    if isinstance(t, IComp):
        ls, rs = sort_of(t.left), sort_of(t.right)
        if ls != rs or ls not in (AX, XA):
            raise SortMismatch(f"I-composition needs two AX or two XA arguments, got "
                               f"{SORT_NAMES[ls]} and {SORT_NAMES[rs]}")
        return ls
    if isinstance(t, Semi):
        ls, rs = sort_of(t.left), sort_of(t.right)
        out = SEMI_TABLE.get((ls, rs))
        if out is None:
            raise SortMismatch(f"no composition {SORT_NAMES[ls]} ; {SORT_NAMES[rs]}")
        return out
    raise SortMismatch(f"{type(t).__name__} is not a PRel term")


def symbols(t: Term) -> list[Modality]:
    if isinstance(t, Sym):
        return [t.mod]
    if isinstance(t, _BINARY):
        return symbols(t.left) + symbols(t.right)
    return []


def _atom_text(t: Term, uni: bool) -> str:
    if isinstance(t, Delta):
        return "Δ" if uni else "D"
    if isinstance(t, IRel):
        return "I"
    if isinstance(t, JRel):
        return "J"
    if isinstance(t, Sym):
        m = t.mod
        if uni:
            return _SYM_UNICODE[m.kind] + ("" if m.index == 1 else str(m.index))
        return _SYM_TEXT[m.kind].format(m.index)
    raise TypeError(t)


def _render(t: Term, uni: bool) -> str:
    if not isinstance(t, _BINARY):
        return _atom_text(t, uni)
    op = (_OP_UNICODE if uni else _OP_TEXT)[type(t)]
    parts = []
    for child in (t.left, t.right):
        s = _render(child, uni)
        flat = type(child) is type(t) and isinstance(t, _ASSOCIATIVE)
        if isinstance(child, _BINARY) and not flat:
            s = f"({s})"
        parts.append(s)
    return f"{parts[0]} {op} {parts[1]}"


def print_term(t: Term) -> str:
    """ASCII rendering. Every nested composition is parenthesized except
    chains of the associative operations ∘ and ;I."""
    return _render(t, False)


def print_term_unicode(t: Term) -> str:
    return _render(t, True)


_JSON_OP = {Delta: "Delta", IRel: "I", JRel: "J", Sym: "Sym", Circ: "Comp", Star: "Star",
            IComp: "IComp", Semi: "Comp"}


def term_json(t: Term) -> dict:
    op = _JSON_OP[type(t)]
    if isinstance(t, Sym):
        return {"op": op, "kind": t.mod.kind, "index": t.mod.index}
    if isinstance(t, _BINARY):
        return {"op": op, "left": term_json(t.left), "right": term_json(t.right)}
    return {"op": op}


def term_from_json(obj: dict, semantics: str) -> Term:
    """Inverse of :func:`term_json`; ``semantics`` resolves the shared "Comp" op."""
    op = obj["op"]
    if op == "Delta":
        return Delta()
    if op == "I":
        return IRel()
    if op == "J":
        return JRel()
    if op == "Sym":
        return Sym(chain_from_json([obj["kind"] + ("" if obj["index"] == 1 else str(obj["index"]))])[0])
    left = term_from_json(obj["left"], semantics)
    right = term_from_json(obj["right"], semantics)
    if op == "Star":
        return Star(left, right)
    if op == "IComp":
        return IComp(left, right)
    if op == "Comp":
        return Circ(left, right) if semantics == "krel" else Semi(left, right)
    raise ValueError(f"unknown term op {op!r}")
