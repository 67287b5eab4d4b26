from __future__ import annotations

import json

import numpy as np
import pytest

from mrpc import cli
from mrpc import verifier as vf
from mrpc.correspondence import TermInequality
from mrpc.errors import FrameFormatError, MrpcError, NotICompatible, RegressionDrift, TooLarge
from mrpc.frames import dump_frame, frame_from_json, load_frame
from mrpc.heyting import builtin
from mrpc.syntax import bbox, box, dia
from mrpc.terms import IComp, IRel, Sym


def test_kripke_enumeration_counts():
    assert len(list(vf.enumerate_kripke(1, [box()]))) == 2
    two = [f for f in vf.enumerate_kripke(2, [box()]) if f.size == 2]
    assert len(two) == 16
    assert len([f for f in vf.enumerate_kripke(2, [box(), dia()]) if f.size == 2]) == 256
    with pytest.raises(TooLarge):
        list(vf.enumerate_kripke(4, [box()]))


def test_enumeration_is_deterministic():
    a = [f.to_json() for f in vf.enumerate_polarity(2, [box()])]
    b = [f.to_json() for f in vf.enumerate_polarity(2, [box()])]
    assert a == b and len(a) > 16
    with pytest.raises(TooLarge):
        next(vf.enumerate_polarity(3, [box()]))


def test_suites():
    assert len(vf.suite("table1")) == 26
    assert len(vf.suite("examples41")) == 5
    assert len(vf.suite("mv12")) == 12
    pairs = vf.suite("analytic-pairs")
    assert pairs and all(e.pair for e in pairs)
    with pytest.raises(MrpcError):
        vf.suite("nope")


def test_samplers_respect_compatibility():
    for f in vf.sample_polarity(30, 3, [box(), dia()], seed=3):
        frame_from_json(f.to_json(), check=True)
    h = builtin("chain3")
    frames = vf.sample_mv(20, 2, [box(), dia()], h, seed=3)
    assert any((f.rel(box()) == 1).any() or (f.pol.I == 1).any() for f in frames)
    for f in frames:
        frame_from_json(f.to_json(), check=True)


@pytest.mark.parametrize("semantics", vf.SEMANTICS)
def test_small_sweeps_agree(semantics):
    s = vf.Sweep("table1", semantics, max_size=1 if semantics != "mv" else 2, samples=10, seed=1,
                 exhaustive=semantics != "mv")
    report = vf.run_sweep(s)
    assert report.ok and report.total > 0 and not report.counterexamples


def test_determinism():
    s = vf.Sweep("examples41", "polarity", max_size=1, samples=25, seed=9)
    first = json.dumps(vf.run_sweep(s).to_json())
    second = json.dumps(vf.run_sweep(s).to_json())
    assert first == second


def test_mv_exhaustive_requires_bool2():
    with pytest.raises(TooLarge):
        vf.run_sweep(vf.Sweep("mv12", "mv", max_size=1, algebra="chain3"))
    assert vf.run_sweep(vf.Sweep("mv12", "mv", max_size=1, algebra="bool2")).ok


def test_threads_give_same_report(monkeypatch):
    s = vf.Sweep("table1", "kripke", max_size=2, samples=20, seed=2)
    serial = vf.run_sweep(s).to_json()
    monkeypatch.setenv("MRPC_THREADS", "2")
    assert vf.run_sweep(s).to_json() == serial


def _wrong_seriality(*_args, **_kwargs):
    return TermInequality("prel", IRel(), IComp(Sym(bbox()), Sym(box())), "b")


def test_disagreement_dump_and_replay(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(vf, "_correspondents", lambda e, target: [_wrong_seriality()])
    entries = [vf.Entry("box p <= dia p", "b")]
    frames = list(vf.enumerate_polarity(2, [box(), dia()]))
    report = vf.check_frames("seriality", "polarity", entries, frames, tmp_path)
    assert not report.ok
    ce = report.counterexamples[0]
    assert ce["oracle"] != ce["checks"][0]
    path = ce["file"]
    monkeypatch.setattr(cli, "correspondent", _wrong_seriality)
    code = cli.main(["check", "--frame", path, "--formula", "box p <= dia p"])
    assert code == 1 and "DISAGREEMENT" in capsys.readouterr().out


def test_frame_json_round_trip(tmp_path):
    for f in list(vf.enumerate_kripke(2, [box(), dia()]))[::37]:
        dump_frame(f, tmp_path / "k.json")
        assert load_frame(tmp_path / "k.json").to_json() == f.to_json()
    for f in list(vf.enumerate_polarity(2, [box(), dia()]))[::53]:
        dump_frame(f, tmp_path / "p.json")
        assert load_frame(tmp_path / "p.json").to_json() == f.to_json()
    for f in vf.sample_mv(5, 2, [box(), dia()], builtin("square4"), seed=4):
        dump_frame(f, tmp_path / "m.json")
        assert load_frame(tmp_path / "m.json").to_json() == f.to_json()


def test_frame_format_errors():
    with pytest.raises(FrameFormatError):
        frame_from_json({"kind": "graph"})
    with pytest.raises(FrameFormatError):
        frame_from_json({"kind": "kripke", "worlds": ["w"], "relations": {"box.1": [["w", "v"]]}})
    with pytest.raises(FrameFormatError):
        frame_from_json({"kind": "kripke", "worlds": ["w"], "relations": {"bbox.1": []}})
    bad = {"kind": "polarity", "A": ["a"], "X": ["x"], "I": [["a", "x"]],
           "relations": {"box.1": []}}
    with pytest.raises(NotICompatible):
        frame_from_json(bad)
    assert frame_from_json(bad, check=False).rel(box()).shape == (1, 1)


def test_regressions_reproduce():
    report = vf.run_regressions(strict=True)
    assert report.ok and len(report.results) == 4


def test_regression_drift(monkeypatch):
    monkeypatch.setattr(vf, "POLARITY_WITNESS", {})
    monkeypatch.setattr(vf, "polarity_assoc", lambda: (np.zeros((1, 1), bool), np.zeros((1, 1), bool)))
    with pytest.raises(RegressionDrift):
        vf.run_regressions(strict=True)
    assert not vf.run_regressions().ok


def test_every_witness_has_a_breaking_mutation():
    sens = vf.mutation_sensitivity()
    assert set(sens) == {"polarity", "kripke", "mv", "join-meet"}
    for broken, total in sens.values():
        assert 1 <= broken <= total


def test_witness_data():
    left, right = vf.polarity_assoc()
    assert left.all() and not right.any()
    left, right = vf.kripke_assoc()
    assert not left.any() and right.all()
    h = builtin("chain3")
    assert vf.mv_assoc() == (h.top, h.bottom)
    assert vf.mv_assoc(algebra="bool2") == (1, 0)
    f = vf.join_meet_frame()
    assert vf.counter_condition(f) and not f.rel(dia()).all()
