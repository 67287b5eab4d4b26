"""Surface syntax, shape classification and adjoint computation for modal
reduction principles (MRPs).

An MRP is an inequality ``s(p) <= t(p)`` where both sides are chains of
unary boxes and diamonds applied to the single variable ``p``::

    ineq  ::= chain "<=" chain
    chain ::= { modal } var | modal "(" chain ")"
    modal ::= ("box" | "dia") [digits]
    var   ::= "p"

Generated formulas (adjoint chains, pure inequalities) may also contain
``bbox`` (black box, the right adjoint of a diamond) and ``bdia`` (black
diamond, the left adjoint of a box).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    InvalidChain,
    MrpSyntaxError,
    NotAnMrp,
    NotInductiveInput,
    SignatureError,
)

BOX = "box"
DIA = "dia"
BBOX = "bbox"
BDIA = "bdia"

KINDS = (BOX, DIA, BBOX, BDIA)
DIAMOND_KINDS = frozenset({DIA, BDIA})
BOX_KINDS = frozenset({BOX, BBOX})

_UNICODE = {BOX: "□", DIA: "◇", BBOX: "■", BDIA: "⧫"}


@dataclass(frozen=True, order=True)
class Modality:
    """One modal token. ``kind`` is one of box, dia, bbox, bdia."""

    kind: str
    index: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown modality kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("modality indices are positive integers")

    @property
    def is_diamond(self) -> bool:
        return self.kind in DIAMOND_KINDS

    @property
    def is_box(self) -> bool:
        return self.kind in BOX_KINDS

    @property
    def is_adjoint(self) -> bool:
        return self.kind in (BBOX, BDIA)

    @property
    def primitive(self) -> Modality:
        """The primitive symbol whose relation interprets this token."""
        if self.kind == BDIA:
            return Modality(BOX, self.index)
        if self.kind == BBOX:
            return Modality(DIA, self.index)
        return self

    def __str__(self) -> str:
        return self.kind if self.index == 1 else f"{self.kind}{self.index}"

    def unicode(self) -> str:
        return _UNICODE[self.kind] + ("" if self.index == 1 else str(self.index))


Chain = tuple  # tuple[Modality, ...], root first


def box(i: int = 1) -> Modality:
    return Modality(BOX, i)


def dia(i: int = 1) -> Modality:
    return Modality(DIA, i)


def bbox(i: int = 1) -> Modality:
    return Modality(BBOX, i)


def bdia(i: int = 1) -> Modality:
    return Modality(BDIA, i)


def chain_text(chain: Sequence[Modality], var: str = "p") -> str:
    return " ".join([str(m) for m in chain] + [var])


def chain_unicode(chain: Sequence[Modality], var: str = "p") -> str:
    return "".join(m.unicode() for m in chain) + var


def chain_json(chain: Sequence[Modality]) -> list[str]:
    return [str(m) for m in chain]


def chain_from_json(tokens: Iterable[str]) -> tuple[Modality, ...]:
    out = []
    for tok in tokens:
        m = _MODAL_RE.fullmatch(tok)
        if m is None:
            raise InvalidChain(f"bad modality token {tok!r}")
        out.append(Modality(m.group(1), int(m.group(2) or 1)))
    return tuple(out)


@dataclass(frozen=True)
class Signature:
    """Indices of the primitive diamonds and boxes available to formulas."""

    diamonds: frozenset = frozenset()
    boxes: frozenset = frozenset()

    @classmethod
    def of(cls, *chains: Sequence[Modality]) -> Signature:
        d, b = set(), set()
        for c in chains:
            for m in c:
                p = m.primitive
                (d if p.kind == DIA else b).add(p.index)
        return cls(frozenset(d), frozenset(b))

    def admits(self, m: Modality) -> bool:
        p = m.primitive
        return p.index in (self.diamonds if p.kind == DIA else self.boxes)

    def primitives(self) -> list[Modality]:
        return [dia(i) for i in sorted(self.diamonds)] + [box(i) for i in sorted(self.boxes)]

    def union(self, other: Signature) -> Signature:
        return Signature(self.diamonds | other.diamonds, self.boxes | other.boxes)


@dataclass(frozen=True)
class Mrp:
    lhs: tuple
    rhs: tuple
    var: str = "p"

    def __str__(self) -> str:
        return f"{chain_text(self.lhs, self.var)} <= {chain_text(self.rhs, self.var)}"

    def unicode(self) -> str:
        return f"{chain_unicode(self.lhs, self.var)} ≤ {chain_unicode(self.rhs, self.var)}"

    def signature(self) -> Signature:
        return Signature.of(self.lhs, self.rhs)

    def to_json(self) -> dict:
        return {"lhs": chain_json(self.lhs), "rhs": chain_json(self.rhs), "text": str(self)}


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<le><=|≤)|(?P<lp>\()|(?P<rp>\))|(?P<word>[A-Za-z_][A-Za-z_0-9]*)|(?P<glyph>[□◇■⧫]\d*)"
    r"|(?P<op>->|[&|∧∨⊤⊥~¬→]))"
)
_MODAL_RE = re.compile(r"(box|dia|bbox|bdia)(\d*)")
_VAR_RE = re.compile(r"[a-z]\d*")
_GLYPH_NAME = {"□": "box", "◇": "dia", "■": "bbox", "⧫": "bdia"}
_CONNECTIVE_WORDS = {"or", "and", "not", "implies", "top", "bot", "true", "false"}
_CONNECTIVE_GLYPH = {"or": "∨", "and": "∧", "|": "∨", "&": "∧", "top": "⊤", "bot": "⊥", "true": "⊤", "false": "⊥"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise MrpSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        word = m.group(kind)
        if kind == "glyph":  # □2 reads as box2
            kind, word = "word", _GLYPH_NAME[word[0]] + word[1:]
        toks.append(_Tok(kind, word, m.start(m.lastgroup)))
        pos = m.end()
    return toks


def _gate_fragment(toks: list[_Tok], allow_adjoints: bool) -> None:
    """Reject well-formed formulas that are not MRPs before grammar parsing."""
    variables = set()
    for t in toks:
        low = t.text.lower()
        if t.kind == "op" or (t.kind == "word" and low in _CONNECTIVE_WORDS):
            glyph = _CONNECTIVE_GLYPH.get(low, t.text)
            raise NotAnMrp(f"connective {glyph} at position {t.pos} is outside the MRP fragment "
                           "(only unary boxes and diamonds over one variable)")
        if t.kind == "word":
            if _MODAL_RE.fullmatch(low):
                if not allow_adjoints and low.startswith(("bbox", "bdia")):
                    raise NotAnMrp(f"adjoint modality {t.text} at position {t.pos} only occurs "
                                   "in generated formulas")
            elif _VAR_RE.fullmatch(t.text):
                variables.add(t.text)
    if len(variables) > 1:
        raise NotAnMrp(f"formula uses variables {sorted(variables)}; an MRP has exactly one")


class _ChainParser:
    def __init__(self, toks: list[_Tok], end: int) -> None:
        self.toks = toks
        self.i = 0
        self.end = end

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def chain(self) -> tuple[list[Modality], str]:
        t = self.peek()
        if t is None:
            raise MrpSyntaxError("expected a modality or a variable", self.end)
        if t.kind == "lp":
            self.i += 1
            mods, var = self.chain()
            close = self.peek()
            if close is None or close.kind != "rp":
                raise MrpSyntaxError("expected ')'", close.pos if close else self.end)
            self.i += 1
            return mods, var
        if t.kind != "word":
            raise MrpSyntaxError(f"unexpected {t.text!r}", t.pos)
        m = _MODAL_RE.fullmatch(t.text.lower())
        if m is not None:
            self.i += 1
            index = int(m.group(2)) if m.group(2) else 1
            if index < 1:
                raise MrpSyntaxError("modality index must be positive", t.pos)
            mods, var = self.chain()
            return [Modality(m.group(1), index)] + mods, var
        if _VAR_RE.fullmatch(t.text):
            self.i += 1
            return [], t.text
        raise MrpSyntaxError(f"unknown token {t.text!r}", t.pos)


def parse_chain(text: str, allow_adjoints: bool = True) -> tuple[tuple, str]:
    """Parse a single chain such as ``"dia box p"``; returns (chain, variable)."""
    toks = _tokenize(text)
    _gate_fragment(toks, allow_adjoints)
    p = _ChainParser(toks, len(text))
    mods, var = p.chain()
    if p.peek() is not None:
        raise MrpSyntaxError(f"trailing input {p.peek().text!r}", p.peek().pos)
    return tuple(mods), var


def parse_inequality(text: str, sig: Signature | None = None) -> Mrp:
    """Parse ``"s(p) <= t(p)"`` into an :class:`Mrp`.

    Raises :class:`NotAnMrp` for formulas with binary connectives, constants,
    a second variable or adjoint modalities, and :class:`MrpSyntaxError` for
    anything the grammar does not accept. When ``sig`` is given every
    modality must belong to it.
    """
    toks = _tokenize(text)
    _gate_fragment(toks, allow_adjoints=False)
    les = [k for k, t in enumerate(toks) if t.kind == "le"]
    if len(les) != 1:
        pos = toks[les[1]].pos if len(les) > 1 else len(text)
        raise MrpSyntaxError("expected exactly one '<='", pos)
    k = les[0]
    left = _ChainParser(toks[:k], toks[k].pos)
    lmods, lvar = left.chain()
    if left.peek() is not None:
        raise MrpSyntaxError(f"unexpected {left.peek().text!r}", left.peek().pos)
    right = _ChainParser(toks[k + 1:], len(text))
    rmods, rvar = right.chain()
    if right.peek() is not None:
        raise MrpSyntaxError(f"unexpected {right.peek().text!r}", right.peek().pos)
    if lvar != rvar:
        raise NotAnMrp(f"formula uses variables {sorted({lvar, rvar})}; an MRP has exactly one")
    mrp = Mrp(tuple(lmods), tuple(rmods), lvar)
    if sig is not None:
        for m in mrp.lhs + mrp.rhs:
            if not sig.admits(m):
                raise SignatureError(f"modality {m} is not in the signature")
    return mrp


def normalize_text(text: str) -> str:
    """Canonical spelling of an inequality or chain: single spaces, lowercase
    keywords, index 1 left implicit, redundant parentheses dropped."""
    if "<=" in text or "≤" in text:
        return str(parse_inequality(text))
    chain, var = parse_chain(text)
    return chain_text(chain, var)


# ----------------------------------------------------------- classification

SHAPE_A = "ShapeA"
SHAPE_B = "ShapeB"
ANALYTIC = "Analytic"
NOT_INDUCTIVE = "NotInductive"


@dataclass(frozen=True)
class ShapeA:
    """``phi[alpha(p)] <= psi[chi(p)]`` with phi diamonds, alpha and psi boxes."""

    phi: tuple
    alpha: tuple
    psi: tuple
    chi: tuple

    def to_json(self) -> dict:
        return {k: chain_json(getattr(self, k)) for k in ("phi", "alpha", "psi", "chi")}


@dataclass(frozen=True)
class ShapeB:
    """``phi[zeta(p)] <= psi[delta(p)]`` with phi and delta diamonds, psi boxes."""

    phi: tuple
    zeta: tuple
    psi: tuple
    delta: tuple

    def to_json(self) -> dict:
        return {k: chain_json(getattr(self, k)) for k in ("phi", "zeta", "psi", "delta")}


@dataclass(frozen=True)
class ShapeDecomposition:
    tag: str
    mrp: Mrp
    a: ShapeA | None = None
    b: ShapeB | None = None

    @property
    def shapes(self) -> list[str]:
        return [s for s, d in (("a", self.a), ("b", self.b)) if d is not None]

    def to_json(self) -> dict:
        out = {"lhs": chain_json(self.mrp.lhs), "rhs": chain_json(self.mrp.rhs), "shape": self.tag}
        if self.a is not None:
            out["a"] = self.a.to_json()
        if self.b is not None:
            out["b"] = self.b.to_json()
        return out


def _split_prefix(chain: tuple, pred) -> tuple[tuple, tuple]:
    k = 0
    while k < len(chain) and pred(chain[k]):
        k += 1
    return chain[:k], chain[k:]


def classify(m: Mrp) -> ShapeDecomposition:
    """Decompose ``m`` by maximal skeleton prefixes.

    Shape (a) needs the left side in ◇*□*p; shape (b) needs the right side
    in □*◇*p. Both together make the MRP analytic.
    """
    lphi, lrest = _split_prefix(m.lhs, lambda t: t.is_diamond)
    rpsi, rrest = _split_prefix(m.rhs, lambda t: t.is_box)
    a = b = None
    if all(t.is_box for t in lrest):
        a = ShapeA(lphi, lrest, rpsi, rrest)
    if all(t.is_diamond for t in rrest):
        b = ShapeB(lphi, lrest, rpsi, rrest)
    if a and b:
        tag = ANALYTIC
    elif a:
        tag = SHAPE_A
    elif b:
        tag = SHAPE_B
    else:
        tag = NOT_INDUCTIVE
    return ShapeDecomposition(tag, m, a, b)


def left_adjoint(psi: Sequence[Modality]) -> tuple:
    """LA of a box chain: reverse it and turn each □i into ⧫i (■i into ◇i)."""
    out = []
    for t in reversed(tuple(psi)):
        if not t.is_box:
            raise InvalidChain(f"left adjoint is defined on box chains; found {t}")
        out.append(Modality(BDIA if t.kind == BOX else DIA, t.index))
    return tuple(out)


def right_adjoint(phi: Sequence[Modality]) -> tuple:
    """RA of a diamond chain: reverse it and turn each ◇i into ■i (⧫i into □i)."""
    out = []
    for t in reversed(tuple(phi)):
        if not t.is_diamond:
            raise InvalidChain(f"right adjoint is defined on diamond chains; found {t}")
        out.append(Modality(BBOX if t.kind == DIA else BOX, t.index))
    return tuple(out)


@dataclass(frozen=True)
class PureInequality:
    """A pure inequality over a nominal ``j`` (shape a) or a conominal ``m`` (shape b)."""

    lhs: tuple
    rhs: tuple
    var: str

    def __str__(self) -> str:
        return f"{chain_text(self.lhs, self.var)} <= {chain_text(self.rhs, self.var)}"

    def unicode(self) -> str:
        return f"∀{self.var}({chain_unicode(self.lhs, self.var)} ≤ {chain_unicode(self.rhs, self.var)})"


def _adjoint_count(d: ShapeDecomposition, shape: str) -> int:
    if shape == "a":
        return len(d.a.psi) + len(d.a.alpha)
    return len(d.b.phi) + len(d.b.delta)


def preferred_shape(d: ShapeDecomposition) -> str:
    """Default shape: the one whose outputs need fewer adjoint symbols,
    shape (a) on ties."""
    if d.tag == NOT_INDUCTIVE:
        raise NotInductiveInput(f"{d.mrp} is not inductive")
    return min(d.shapes, key=lambda s: (_adjoint_count(d, s), s))


def pick_shape(d: ShapeDecomposition, shape: str | None) -> str:
    if d.tag == NOT_INDUCTIVE:
        raise NotInductiveInput(f"{d.mrp} is not inductive")
    if shape is None:
        return preferred_shape(d)
    if shape not in d.shapes:
        raise NotInductiveInput(f"{d.mrp} has no shape ({shape}) decomposition")
    return shape


def alba_output(d: ShapeDecomposition, shape: str | None = None) -> PureInequality:
    """The pure inequality left by a successful ALBA run.

    (a): LA(psi)[phi[j]] <= chi[LA(alpha)[j]/p]
    (b): zeta[RA(delta)[m]/p] <= RA(phi)[psi[m]]
    """
    s = pick_shape(d, shape)
    if s == "a":
        a = d.a
        return PureInequality(left_adjoint(a.psi) + a.phi, a.chi + left_adjoint(a.alpha), "j")
    b = d.b
    return PureInequality(b.zeta + right_adjoint(b.delta), right_adjoint(b.phi) + b.psi, "m")


def blocks(chain: Sequence[Modality]) -> list[tuple]:
    """Split a chain into maximal runs of same-polarity tokens."""
    out: list[list[Modality]] = []
    for t in chain:
        if out and out[-1][-1].is_diamond == t.is_diamond:
            out[-1].append(t)
        else:
            out.append([t])
    return [tuple(b) for b in out]
