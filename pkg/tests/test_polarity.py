from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import bool_matrix, compatible_rel, polarities, polarity, square
from mrpc import kripke as kr
from mrpc import polarity as pl
from mrpc.correspondence import TermInequality, correspondent
from mrpc.errors import NotICompatible, SortMismatch
from mrpc.syntax import bbox, box, classify, dia, parse_inequality
from mrpc.terms import AA, AX, SEMI_TABLE, XA, XX, IComp, IRel, JRel, Semi, Sym
from mrpc.verifier import enumerate_polarity


def vec(*bits):
    return np.array(bits, dtype=bool)


def test_up_down_examples():
    p = polarity(2, 3, bool_rows([[1, 1, 0], [1, 0, 0]]))
    assert p.up(vec(0, 0)).all()
    assert list(p.up(vec(1, 1))) == [True, False, False]
    q = pl.lifted_polarity(("0", "1"))
    assert list(q.up(vec(1, 0))) == [False, True]
    assert list(q.down(q.up(vec(1, 0)))) == [True, False]


def bool_rows(rows):
    return np.array(rows, dtype=bool)


def test_concept_counts():
    assert len(pl.concept_lattice(polarity(2, 2, np.ones((2, 2), bool)))) == 1
    assert len(pl.concept_lattice(pl.lifted_polarity(("0", "1")))) == 4
    cs = pl.concept_lattice(polarity(1, 1, np.zeros((1, 1), bool)))
    assert {(c.extent, c.intent) for c in cs} == {((False,), (True,)), ((True,), (False,))}


@given(polarities(3))
def test_concepts_are_stable(p):
    for c in pl.concept_lattice(p):
        ext, intent = np.array(c.extent), np.array(c.intent)
        assert np.array_equal(p.up(ext), intent) and np.array_equal(p.down(intent), ext)


@given(polarities(3), st.data())
def test_galois_laws(p, data):
    b = data.draw(bool_matrix(len(p.A), 1))[:, 0]
    c = data.draw(bool_matrix(len(p.A), 1))[:, 0]
    y = data.draw(bool_matrix(len(p.X), 1))[:, 0]
    assert np.all(~b | p.down(p.up(b)))
    assert np.all(~y | p.up(p.down(y)))
    assert np.array_equal(p.up(p.down(p.up(b))), p.up(b))
    if np.all(~b | c):
        assert np.all(~p.up(c) | p.up(b))


def test_i_compatible_examples():
    p = polarity(2, 3, bool_rows([[1, 0, 1], [0, 1, 1]]))
    assert pl.check_i_compatible(p, pl.TypedRel(AX, p.I))
    assert pl.check_i_compatible(p, pl.TypedRel(AX, np.ones((2, 3), bool)))
    assert pl.check_i_compatible(p, pl.TypedRel(XA, np.ones((3, 2), bool)))
    with pytest.raises(SortMismatch):
        pl.check_i_compatible(p, pl.TypedRel(AA, np.ones((2, 2), bool)))


def test_het_comp_breaks_compatibility():
    p = polarity(3, 3, np.eye(3, dtype=bool))
    r = pl.TypedRel(AX, bool_rows([[0, 0, 0], [0, 1, 0], [0, 0, 0]]))
    t = pl.TypedRel(XA, bool_rows([[0, 0, 0], [0, 0, 0], [0, 0, 1]]))
    assert pl.check_i_compatible(p, r) and pl.check_i_compatible(p, t)
    rt = pl.het_comp(r, t)
    assert rt.sort == AA
    section = rt.mat[0]  # (R;T)^(1)[a]
    assert list(section) == [True, True, False]
    assert not p.is_extent(section)


def test_het_comp_vacuous():
    r = pl.TypedRel(AX, np.zeros((2, 3), bool))
    t = pl.TypedRel(XA, np.zeros((3, 2), bool))
    assert pl.het_comp(r, t).mat.all()
    with pytest.raises(SortMismatch):
        pl.het_comp(r, r)


def test_het_comp_non_associative():
    r = pl.TypedRel(AX, np.zeros((2, 2), bool))
    u = pl.TypedRel(AX, np.ones((2, 2), bool))
    t = pl.TypedRel(XA, bool_rows([[0, 1], [1, 0]]))
    assert pl.het_comp(r, pl.het_comp(t, u)).mat.all()
    assert not pl.het_comp(pl.het_comp(r, t), u).mat.any()


def test_rejects_incompatible():
    p = polarity(2, 2, bool_rows([[1, 0], [0, 0]]))
    bad = bool_rows([[0, 1], [0, 0]])
    assert not pl.check_i_compatible(p, pl.TypedRel(AX, bad))
    with pytest.raises(NotICompatible):
        pl.PolarityFrame(p, {box(): bad})
    assert pl.PolarityFrame(p, {box(): bad}, check=False).rel(box()) is not None


@st.composite
def triples(draw, sort):
    p = draw(polarities(3))
    return p, [pl.TypedRel(sort, draw(compatible_rel(p, sort))) for _ in range(3)]


@settings(max_examples=60)
@given(st.sampled_from([AX, XA]).flatmap(triples))
def test_i_comp_laws(data):
    p, (r, t, u) = data
    unit = pl.TypedRel(AX, p.I) if r.sort == AX else pl.TypedRel(XA, p.I.T)
    assert pl.i_comp(p, r, unit) == r and pl.i_comp(p, unit, r) == r
    assert pl.i_comp(p, pl.i_comp(p, r, t), u) == pl.i_comp(p, r, pl.i_comp(p, t, u))
    assert pl.check_i_compatible(p, pl.i_comp(p, r, t))


@settings(max_examples=60)
@given(triples(AX))
def test_converse_distribution(data):
    p, (r1, r2, _) = data
    left = pl.i_comp(p, r1, r2).mat
    right = pl.i_comp(p, pl.TypedRel(XA, r2.mat.T), pl.TypedRel(XA, r1.mat.T)).mat
    assert np.array_equal(left, right.T)


@settings(max_examples=60)
@given(st.sampled_from([AX, XA]).flatmap(triples))
def test_alternative_formula(data):
    p, (r, t, _) = data
    comp = pl.i_comp(p, r, t).mat
    n = comp.shape[0]
    for i in range(n):
        single = np.eye(n, dtype=bool)[i]
        inner = p.down(pl.r1(r.mat, single)) if r.sort == AX else p.up(pl.r1(r.mat, single))
        assert np.array_equal(comp[i], pl.r1(t.mat, inner))


def test_i_comp_of_i():
    p = polarity(2, 2, bool_rows([[1, 0], [1, 1]]))
    i = pl.TypedRel(AX, p.I)
    assert pl.i_comp(p, i, i) == i
    with pytest.raises(SortMismatch):
        pl.i_comp(p, i, pl.TypedRel(XA, p.I.T))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_lifted_compositions(rels):
    r, s = rels
    n = len(r)
    q = pl.lifted_polarity(tuple(map(str, range(n))))
    for sort in (AX, XA):
        lifted = pl.i_comp(q, pl.lift_rel(r, sort), pl.lift_rel(s, sort))
        assert lifted == pl.lift_rel(kr.compose(r, s), sort)
    for (ls, rs), out in SEMI_TABLE.items():
        assert pl.het_comp(pl.lift_rel(r, ls), pl.lift_rel(s, rs)) == pl.lift_rel(kr.star(r, s), out)
    b = np.eye(n, dtype=bool)[0]
    assert np.array_equal(pl.r0(q.I.T, b), ~b)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_complex_algebra_iso(rels):
    rb, rd = rels
    k = kr.KripkeFrame(tuple(map(str, range(len(rb)))), {box(): rb, dia(): rd})
    assert pl.check_complex_algebra_iso(k)


def test_eval_examples():
    k = kr.KripkeFrame(("0",), {box(): np.ones((1, 1), bool), dia(): np.ones((1, 1), bool)})
    f = pl.lift_frame(k)
    t = Semi(Sym(dia()), Semi(Sym(box()), JRel()))
    assert not pl.eval_prel(f, t).mat.any()
    assert pl.holds_prel(f, TermInequality("prel", t, JRel()))
    p = polarity(2, 2, bool_rows([[1, 0], [1, 1]]))
    g = pl.PolarityFrame(p, {box(): p.I})
    assert pl.eval_prel(g, IRel()) == pl.TypedRel(AX, p.I)
    assert pl.holds_prel(g, TermInequality("prel", Sym(box()), IRel()))


def test_reflexivity_exhaustive():
    m = parse_inequality("box p <= p")
    for f in enumerate_polarity(2, [box()]):
        assert pl.mrp_valid_oracle(f, m) == bool(np.all(~f.rel(box()) | f.pol.I))


def test_one_concept_frame_validates_everything():
    p = polarity(2, 2, np.ones((2, 2), bool))
    f = pl.PolarityFrame(p, {box(): np.ones((2, 2), bool), dia(): np.ones((2, 2), bool)})
    for text in ("box p <= dia p", "dia p <= box p", "p <= box dia p", "dia box p <= p"):
        assert pl.mrp_valid_oracle(f, parse_inequality(text))


def test_seriality_shape_b_reading():
    m = parse_inequality("box p <= dia p")
    derived = correspondent(classify(m), "prel", "b")
    reversed_form = TermInequality("prel", IRel(), IComp(Sym(bbox()), Sym(box())))
    assert str(derived) == "R[1] ;I R#1 <= I"
    assert str(reversed_form) == "I <= R#1 ;I R[1]"
    refuted = False
    for f in enumerate_polarity(2, [box(), dia()]):
        valid = pl.mrp_valid_oracle(f, m)
        assert pl.holds_prel(f, derived) == valid
        refuted |= pl.holds_prel(f, reversed_form) != valid
    assert refuted


def test_extents_order_and_count():
    p = polarity(3, 3, np.eye(3, dtype=bool))
    ext = pl.concept_extents(p)
    sizes = ext.sum(axis=0)
    assert list(sizes) == sorted(sizes)
    assert ext.shape[1] == 5  # ∅, three singletons, A
    assert all(p.is_extent(ext))


def test_all_compatible_relations_enumerated():
    for a, x in product(range(1, 3), repeat=2):
        for i in pl.all_relations(a, x):
            p = polarity(a, x, i)
            full = pl.compatible_relations(p, AX)
            assert any(np.array_equal(m, p.I) for m in full)
            assert any(m.all() for m in full)
    assert XX in {v for v in SEMI_TABLE.values()}
