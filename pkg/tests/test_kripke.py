from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import kripke_rels, square
from mrpc import kripke as kr
from mrpc.correspondence import TermInequality, correspondent
from mrpc.errors import DimensionMismatch, TooLarge, UnknownSymbol
from mrpc.syntax import alba_output, bbox, bdia, box, classify, dia, parse_inequality
from mrpc.terms import Circ, Delta, Star, Sym


def rel(n, pairs):
    m = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        m[i, j] = True
    return m


def frame(n, **rels):
    mods = {"box": box(), "dia": dia()}
    return kr.KripkeFrame(tuple(str(i) for i in range(n)), {mods[k]: v for k, v in rels.items()})


def test_compose_examples():
    r = rel(2, [(0, 1)])
    assert np.array_equal(kr.compose(np.eye(2, dtype=bool), r), r)
    assert np.array_equal(kr.compose(r, rel(2, [(1, 0)])), rel(2, [(0, 0)]))
    assert not kr.compose(rel(2, []), r).any()
    with pytest.raises(DimensionMismatch):
        kr.compose(r, np.eye(3, dtype=bool))


def test_star_non_associative():
    full, delta, empty = np.ones((2, 2), bool), np.eye(2, dtype=bool), np.zeros((2, 2), bool)
    left = kr.star(kr.star(full, delta), empty)
    right = kr.star(full, kr.star(delta, empty))
    assert not np.array_equal(left, right)


def test_star_with_empty():
    r = rel(2, [(0, 1)])
    assert np.array_equal(kr.star(r, np.zeros((2, 2), bool)), rel(2, [(0, 0), (0, 1)]))


def test_box_preimage_examples():
    r = rel(2, [(0, 0), (0, 1), (1, 1)])
    assert kr.box_preimage(r, np.ones(2, bool)).all()
    assert kr.box_preimage(np.zeros((2, 2), bool), np.array([True, False])).all()
    assert list(kr.box_preimage(r, np.array([False, True]))) == [False, True]


def test_dia_preimage_examples():
    r = rel(2, [(0, 1)])
    assert not kr.dia_preimage(r, np.zeros(2, bool)).any()
    v = np.array([True, False])
    assert np.array_equal(kr.dia_preimage(np.eye(2, dtype=bool), v), v)
    assert list(kr.dia_preimage(r, np.array([False, True]))) == [True, False]


def test_eval_examples():
    f = frame(2, box=rel(2, [(0, 1)]), dia=rel(2, [(0, 1)]))
    assert np.array_equal(kr.eval_krel(f, Delta()), np.eye(2, dtype=bool))
    got = kr.eval_krel(f, Circ(Sym(bdia()), Sym(dia())))
    assert np.array_equal(got, rel(2, [(1, 1)]))
    g = frame(1, box=np.ones((1, 1), bool), dia=np.ones((1, 1), bool))
    assert kr.eval_krel(g, Star(Sym(dia()), Star(Sym(box()), Delta()))).all()


def test_adjoints_are_converses():
    r = rel(3, [(0, 1), (1, 2)])
    f = frame(3, box=r, dia=r)
    assert np.array_equal(f.rel(bdia()), r.T) and np.array_equal(f.rel(bbox()), r.T)
    with pytest.raises(UnknownSymbol):
        kr.KripkeFrame(("0",), {bbox(): np.ones((1, 1), bool)})
    with pytest.raises(UnknownSymbol):
        f.rel(box(2))


def test_holds_examples():
    refl = TermInequality("krel", Delta(), Sym(box()))
    assert kr.holds_krel(frame(2, box=np.eye(2, dtype=bool)), refl)
    assert not kr.holds_krel(frame(2, box=rel(2, [])), refl)
    conf = correspondent(classify(parse_inequality("dia box p <= box dia p")), "krel", "a")
    r = rel(3, [(0, 1), (0, 2)])
    assert not kr.holds_krel(frame(3, box=r, dia=r), conf)


def test_oracle_examples():
    m = parse_inequality("box p <= p")
    assert kr.mrp_valid_oracle(frame(1, box=np.ones((1, 1), bool)), m)
    assert not kr.mrp_valid_oracle(frame(1, box=np.zeros((1, 1), bool)), m)
    with pytest.raises(TooLarge):
        kr.all_valuations(21)


@given(kripke_rels(3, 2))
def test_confluence_implies_validity(data):
    n, (rb, rd) = data
    f = frame(n, box=rb, dia=rd)
    conf = correspondent(classify(parse_inequality("dia box p <= box dia p")), "krel", "a")
    if kr.holds_krel(f, conf):
        assert kr.mrp_valid_oracle(f, parse_inequality("dia box p <= box dia p"))


@given(kripke_rels(3, 2))
def test_bracket_laws(data):
    n, (r, s) = data
    subsets = kr.all_valuations(n)
    for k in range(subsets.shape[1]):
        v = subsets[:, k]
        x = np.eye(n, dtype=bool)
        for j in range(n):
            assert np.array_equal(kr.bracket0(kr.star(r, s), x[j]), kr.bracket0(r, kr.bracket0(s, x[j])))
        assert np.array_equal(kr.bracket0(r, v), ~kr.dia_preimage(r, v))
        assert np.array_equal(kr.box_preimage(r, v), kr.bracket0(r, ~v))
        assert np.array_equal(kr.bracket1(r, v), kr.bracket0(r.T, v))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(square(n), square(n))))
def test_alba_output_equivalent(rels):
    rb, rd = rels
    f = frame(len(rb), box=rb, dia=rd)
    for text in ("dia box p <= box dia p", "p <= dia box p", "dia p <= box p",
                 "box dia p <= box dia dia p"):
        m = parse_inequality(text)
        d = classify(m)
        valid = kr.mrp_valid_oracle(f, m)
        for s in d.shapes:
            assert kr.pure_valid(f, alba_output(d, s)) == valid
