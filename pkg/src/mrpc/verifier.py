"""Oracle-versus-correspondent campaigns over enumerated and sampled frames,
plus the fixed counterexample regressions."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import kripke as kr
from . import mv
from . import polarity as pl
from .correspondence import TermInequality, correspondent, lift
from .errors import MrpcError, NotAnMrp, RegressionDrift, TooLarge
from .heyting import HeytingAlgebra, builtin
from .syntax import Modality, Mrp, Signature, alba_output, classify, parse_inequality
from .terms import AX, XA

# ------------------------------------------------------------------ suites

TABLE1_MRPS = (
    "p <= dia p",
    "box p <= p",
    "dia dia p <= dia p",
    "box p <= box box p",
    "p <= box dia p",
    "dia box p <= p",
    "box p <= dia p",
    "dia p <= box p",
    "dia p <= box dia p",
    "dia box p <= box p",
    "dia box p <= box dia p",
    "dia p <= dia dia p",
    "box box p <= box p",
)

EXAMPLES41 = (
    "p <= dia box p",
    "dia p <= box p",
    "p <= dia box dia p",
    "dia p <= box dia box p",
    "box dia p <= box dia dia p",
)

MV12 = (
    ("box p <= dia p", "b"),
    ("box p <= p", "b"),
    ("p <= dia p", "b"),
    ("box p <= box box p", "b"),
    ("dia dia p <= dia p", "a"),
    ("p <= box dia p", "a"),
    ("dia box p <= p", "a"),
    ("p <= box p", "b"),
    ("dia p <= p", "b"),
    ("box box p <= box p", "b"),
    ("dia p <= dia dia p", "a"),
    ("dia p <= box p", "b"),
)


@dataclass(frozen=True)
class Entry:
    """One MRP with the shape whose correspondent is checked; ``pair`` entries
    check that the shape (a) and shape (b) outputs agree with each other."""

    text: str
    shape: str | None = None
    pair: bool = False

    @property
    def mrp(self) -> Mrp:
        return parse_inequality(self.text)

    @property
    def label(self) -> str:
        tag = "a=b" if self.pair else (self.shape or "-")
        return f"{self.text} ({tag})"


def suite(name: str) -> list[Entry]:
    if name == "table1":
        return [Entry(t, s) for t in TABLE1_MRPS for s in ("a", "b")]
    if name == "examples41":
        return [Entry(t) for t in EXAMPLES41]
    if name == "mv12":
        return [Entry(t, s) for t, s in MV12]
    if name == "analytic-pairs":
        return [Entry(t, pair=True) for t in TABLE1_MRPS + EXAMPLES41
                if len(classify(parse_inequality(t)).shapes) == 2]
    raise MrpcError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


SUITES = ("table1", "examples41", "mv12", "analytic-pairs")
SEMANTICS = ("kripke", "polarity", "mv", "lifting")


def suite_signature(entries: Sequence[Entry]) -> list[Modality]:
    sig = Signature()
    for e in entries:
        sig = sig.union(e.mrp.signature())
    return sig.primitives()


# -------------------------------------------------------- frame generation

KRIPKE_EXHAUSTIVE_CAP = 3
POLARITY_EXHAUSTIVE_CAP = 2


def _world_names(n: int, prefix: str = "w") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def enumerate_kripke(max_worlds: int, mods: Sequence[Modality]) -> Iterator[kr.KripkeFrame]:
    """All frames with 1..max_worlds worlds and every relation assignment."""
    if max_worlds > KRIPKE_EXHAUSTIVE_CAP:
        raise TooLarge(f"exhaustive Kripke enumeration is capped at {KRIPKE_EXHAUSTIVE_CAP} worlds")
    for n in range(1, max_worlds + 1):
        rels = list(pl.all_relations(n, n)) if n * n <= pl.MAX_CONCEPT_BITS else None
        if rels is None:
            raise TooLarge(f"{n} worlds is too many for exhaustive enumeration")
        for combo in product(rels, repeat=len(mods)):
            yield kr.KripkeFrame(_world_names(n), dict(zip(mods, combo)))


def random_kripke(n: int, mods: Sequence[Modality], rng: np.random.Generator) -> kr.KripkeFrame:
    return kr.KripkeFrame(_world_names(n), {m: rng.random((n, n)) < 0.5 for m in mods})


def _polarity(a: int, x: int, i: np.ndarray) -> pl.Polarity:
    return pl.Polarity(_world_names(a, "a"), _world_names(x, "x"), i)


def enumerate_polarity(max_size: int, mods: Sequence[Modality]) -> Iterator[pl.PolarityFrame]:
    """All polarities with |A|, |X| <= max_size and every I-compatible assignment."""
    if max_size > POLARITY_EXHAUSTIVE_CAP:
        raise TooLarge(f"exhaustive polarity enumeration is capped at {POLARITY_EXHAUSTIVE_CAP}")
    for a, x in product(range(1, max_size + 1), repeat=2):
        for i in pl.all_relations(a, x):
            p = _polarity(a, x, i)
            choices = [pl.compatible_relations(p, XA if m.is_diamond else AX) for m in mods]
            for combo in product(*choices):
                yield pl.PolarityFrame(p, dict(zip(mods, combo)), check=False)


class _CompatCache:
    """Compatible relations per incidence, so sampling is exact and uniform."""

    def __init__(self) -> None:
        self._store: dict = {}

    def get(self, p, sort, fn):
        key = (p.I.shape, p.I.tobytes(), sort)
        if key not in self._store:
            self._store[key] = fn(p, sort)
        return self._store[key]


def sample_polarity(n: int, max_size: int, mods: Sequence[Modality], seed: int) -> list[pl.PolarityFrame]:
    rng = np.random.default_rng(seed)
    cache = _CompatCache()
    out = []
    for _ in range(n):
        a, x = (int(v) for v in rng.integers(1, max_size + 1, size=2))
        p = _polarity(a, x, rng.random((a, x)) < 0.5)
        rels = {}
        for m in mods:
            cands = cache.get(p, XA if m.is_diamond else AX, pl.compatible_relations)
            rels[m] = cands[int(rng.integers(len(cands)))]
        out.append(pl.PolarityFrame(p, rels, check=False))
    return out


def crisp_to_mv(f: pl.PolarityFrame, h: HeytingAlgebra) -> mv.MvPolarityFrame:
    """Read a crisp frame over a Heyting algebra (False ↦ 0, True ↦ 1)."""
    def conv(m):
        return np.where(m, h.top, h.bottom).astype(np.int64)

    p = mv.MvPolarity(h, f.pol.A, f.pol.X, conv(f.pol.I))
    return mv.MvPolarityFrame(p, {m: conv(r) for m, r in f.relations.items()}, check=False)


def sample_mv(n: int, size: int, mods: Sequence[Modality], h: HeytingAlgebra,
              seed: int) -> list[mv.MvPolarityFrame]:
    """Frames of size size×size with uniform I and uniformly chosen I-compatible relations."""
    rng = np.random.default_rng(seed)
    cache = _CompatCache()
    out = []
    for _ in range(n):
        p = mv.MvPolarity(h, _world_names(size, "a"), _world_names(size, "x"),
                          rng.integers(h.size, size=(size, size)))
        rels = {}
        for m in mods:
            cands = cache.get(p, XA if m.is_diamond else AX, mv.mv_compatible_relations)
            rels[m] = cands[int(rng.integers(len(cands)))]
        out.append(mv.MvPolarityFrame(p, rels, check=False))
    return out


# ------------------------------------------------------------------ checks

@dataclass
class EntryResult:
    label: str
    frames: int = 0
    valid: int = 0
    agree: int = 0
    counterexample: dict | None = None

    @property
    def disagree(self) -> int:
        return self.frames - self.agree


@dataclass
class VerdictReport:
    suite: str
    semantics: str
    entries: list[EntryResult] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(e.frames for e in self.entries)

    @property
    def agree(self) -> int:
        return sum(e.agree for e in self.entries)

    @property
    def disagree(self) -> int:
        return self.total - self.agree

    @property
    def ok(self) -> bool:
        return self.disagree == 0

    @property
    def counterexamples(self) -> list[dict]:
        return [e.counterexample for e in self.entries if e.counterexample is not None]

    def to_json(self) -> dict:
        return {"suite": self.suite, "semantics": self.semantics, "total": self.total,
                "agree": self.agree, "disagree": self.disagree,
                "counterexamples": self.counterexamples,
                "entries": [{"entry": e.label, "frames": e.frames, "valid": e.valid,
                             "agree": e.agree, "disagree": e.disagree} for e in self.entries]}

    def render(self) -> str:
        width = max([len(e.label) for e in self.entries] + [5])
        lines = [f"suite {self.suite}, semantics {self.semantics}"]
        for e in self.entries:
            mark = "ok" if e.disagree == 0 else "DISAGREE"
            lines.append(f"  {e.label:<{width}}  frames {e.frames:6d}  valid {e.valid:6d}  "
                         f"agree {e.agree:6d}  {mark}")
        lines.append(f"total {self.total}, agree {self.agree}, disagree {self.disagree}")
        return "\n".join(lines)


def _correspondents(e: Entry, target: str) -> list[TermInequality]:
    d = classify(e.mrp)
    if e.pair:
        return [correspondent(d, target, "a"), correspondent(d, target, "b")]
    return [correspondent(d, target, e.shape)]


def _verdicts_kripke(f: kr.KripkeFrame, entries, prepared) -> list[tuple[bool, list[bool]]]:
    out = []
    for e, (m, terms, pures) in zip(entries, prepared):
        oracle = kr.mrp_valid_oracle(f, m)
        checks = [kr.holds_krel(f, t) for t in terms] + [kr.pure_valid(f, p) for p in pures]
        out.append((oracle, checks))
    return out


def _verdicts_polarity(f: pl.PolarityFrame, entries, prepared):
    ext = pl.concept_extents(f.pol)
    return [(pl.mrp_valid_oracle(f, m, ext), [pl.holds_prel(f, t) for t in terms])
            for m, terms, _ in prepared]


def _verdicts_mv(f: mv.MvPolarityFrame, entries, prepared):
    ext = mv.mv_concept_extents(f.pol)
    return [(mv.mv_mrp_valid_oracle(f, m, ext), [mv.mv_holds_prel(f, t) for t in terms])
            for m, terms, _ in prepared]


def _verdicts_lifting(k: kr.KripkeFrame, entries, prepared):
    """Per entry: Kripke validity must match validity on F_X, and the KRel
    inequality on X must match its lifting on F_X. A final pseudo-entry
    checks the complex-algebra isomorphism."""
    f = pl.lift_frame(k)
    ext = pl.concept_extents(f.pol)
    out = []
    for m, terms, _ in prepared:
        oracle = kr.mrp_valid_oracle(k, m)
        checks = [pl.mrp_valid_oracle(f, m, ext)]
        for t in terms:
            checks += [kr.holds_krel(k, t), pl.holds_prel(f, lift(t))]
        out.append((oracle, checks))
    out.append((True, [pl.check_complex_algebra_iso(k)]))
    return out


_VERDICTS = {"kripke": _verdicts_kripke, "polarity": _verdicts_polarity, "mv": _verdicts_mv,
             "lifting": _verdicts_lifting}


def _prepare(entries: Sequence[Entry], semantics: str):
    target = "krel" if semantics in ("kripke", "lifting") else "prel"
    prepared = []
    for e in entries:
        d = classify(e.mrp)
        terms = _correspondents(e, target)
        pures = [alba_output(d, "a"), alba_output(d, "b")] if e.pair and semantics == "kripke" else []
        prepared.append((e.mrp, terms, pures))
    return prepared


def _run_chunk(args) -> list:
    semantics, frames, entries = args
    prepared = _prepare(entries, semantics)
    return [_VERDICTS[semantics](f, entries, prepared) for f in frames]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MRPC_THREADS", "1")))
    except ValueError:
        return 1


def check_frames(suite_name: str, semantics: str, entries: Sequence[Entry], frames: Sequence,
                 dump_dir: str | Path | None = None) -> VerdictReport:
    """Evaluate every entry on every frame and aggregate agreement counts."""
    frames = list(frames)
    workers = _workers()
    if workers > 1 and len(frames) > 1:
        step = -(-len(frames) // workers)
        chunks = [(semantics, frames[i:i + step], list(entries)) for i in range(0, len(frames), step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = [v for part in pool.map(_run_chunk, chunks) for v in part]
    else:
        verdicts = _run_chunk((semantics, frames, list(entries)))
    labels = [e.label for e in entries]
    if semantics == "lifting":
        labels.append("complex algebra F_X+ = X+")
    results = [EntryResult(lb) for lb in labels]
    for idx, (f, per_frame) in enumerate(zip(frames, verdicts)):
        for res, (oracle, checks) in zip(results, per_frame):
            res.frames += 1
            res.valid += oracle
            if all(c == oracle for c in checks):
                res.agree += 1
            elif res.counterexample is None:
                res.counterexample = {"entry": res.label, "frame_index": idx, "oracle": oracle,
                                      "checks": checks, "frame": f.to_json()}
                if dump_dir is not None:
                    name = f"{suite_name.replace('/', '-')}-{semantics}-{labels.index(res.label):02d}.json"
                    path = Path(dump_dir) / name
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(json.dumps(f.to_json(), indent=2) + "\n", encoding="utf-8")
                    res.counterexample["file"] = str(path)
    return VerdictReport(suite_name, semantics, results)


@dataclass(frozen=True)
class Sweep:
    suite: str
    semantics: str
    max_size: int = 2
    samples: int = 0
    seed: int = 0
    sample_size: int | None = None
    algebra: str = "chain3"
    exhaustive: bool = True


def sweep_frames(s: Sweep, entries: Sequence[Entry]) -> list:
    mods = suite_signature(entries)
    if s.semantics in ("kripke", "lifting"):
        frames = list(enumerate_kripke(s.max_size, mods)) if s.exhaustive else []
        rng = np.random.default_rng(s.seed)
        size = s.sample_size or s.max_size + 1
        frames += [random_kripke(size, mods, rng) for _ in range(s.samples)]
        return frames
    if s.semantics == "polarity":
        frames = list(enumerate_polarity(s.max_size, mods)) if s.exhaustive else []
        frames += sample_polarity(s.samples, s.sample_size or s.max_size + 1, mods, s.seed)
        return frames
    if s.semantics == "mv":
        h = builtin(s.algebra)
        frames = []
        if s.exhaustive:
            if h.size != 2:
                raise TooLarge("exhaustive MV sweeps are supported over bool2 only; use --samples")
            frames = [crisp_to_mv(f, h) for f in enumerate_polarity(s.max_size, mods)]
        frames += sample_mv(s.samples, s.sample_size or s.max_size, mods, h, s.seed)
        return frames
    raise MrpcError(f"unknown semantics {s.semantics!r}; choose from {', '.join(SEMANTICS)}")


def run_sweep(s: Sweep, dump_dir: str | Path | None = None) -> VerdictReport:
    entries = suite(s.suite)
    label = s.suite if s.semantics != "mv" else f"{s.suite}/{s.algebra}"
    return check_frames(label, s.semantics, entries, sweep_frames(s, entries), dump_dir)


# ------------------------------------------------------------- regressions

@dataclass
class RegressionResult:
    name: str
    expected: str
    observed: str
    passed: bool


@dataclass
class RegressionReport:
    results: list[RegressionResult]

    @property
    def ok(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def render(self) -> str:
        lines = [f"[{'pass' if r.passed else 'FAIL'}] {r.name}: expected {r.expected}; observed {r.observed}"
                 for r in self.results]
        lines.append(f"{sum(r.passed for r in self.results)}/{len(self.results)} regressions reproduce")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"total": len(self.results), "passed": sum(r.passed for r in self.results),
                "results": [vars(r) for r in self.results]}


POLARITY_WITNESS = {
    "I": [[0, 1], [1, 0]],
    "R": [[0, 0], [0, 0]],
    "T": [[0, 1], [1, 0]],
    "U": [[1, 1], [1, 1]],
}

KRIPKE_WITNESS = {
    "R": [[1, 1], [1, 1]],
    "T": [[1, 0], [0, 1]],
    "U": [[0, 0], [0, 0]],
}

# rows a, b; columns x, y (T rows x, y; columns a, b)
MV_WITNESS = {
    "I": [[0, 1], [1, 0]],
    "R": [[0, 0], [1, 1]],
    "T": [[0, 1], [1, 0]],
    "U": [[0, 1], [0, 1]],
}

JOIN_MEET_WITNESS = {"I": [[0]], "R": [[0]]}


def polarity_assoc(data: dict = POLARITY_WITNESS) -> tuple[np.ndarray, np.ndarray]:
    """R;(T;U) and (R;T);U for R, U in A×X and T in X×A."""
    p = pl.Polarity(("a1", "a2"), ("x1", "x2"), np.array(data["I"], dtype=bool))
    r, t, u = (pl.TypedRel(s, np.array(data[k], dtype=bool)) for k, s in (("R", AX), ("T", XA), ("U", AX)))
    del p  # non-mediated compositions do not consult I
    return pl.het_comp(r, pl.het_comp(t, u)).mat, pl.het_comp(pl.het_comp(r, t), u).mat


def kripke_assoc(data: dict = KRIPKE_WITNESS) -> tuple[np.ndarray, np.ndarray]:
    """R⋆(T⋆U) and (R⋆T)⋆U."""
    r, t, u = (np.array(data[k], dtype=bool) for k in ("R", "T", "U"))
    return kr.star(r, kr.star(t, u)), kr.star(kr.star(r, t), u)


def mv_assoc(data: dict = MV_WITNESS, algebra: str = "chain3") -> tuple[int, int]:
    """((R;T);U)(a, x) and (R;(T;U))(a, x), with 0/1 entries read in ``algebra``."""
    h = builtin(algebra)

    def val(k):
        return np.where(np.array(data[k], dtype=bool), h.top, h.bottom).astype(np.int64)

    r, t, u = mv.MvRel(AX, val("R")), mv.MvRel(XA, val("T")), mv.MvRel(AX, val("U"))
    left = mv.mv_het_comp(h, mv.mv_het_comp(h, r, t), u).mat[0, 0]
    right = mv.mv_het_comp(h, r, mv.mv_het_comp(h, t, u)).mat[0, 0]
    return int(left), int(right)


def join_meet_frame(data: dict = JOIN_MEET_WITNESS) -> pl.PolarityFrame:
    p = pl.Polarity(("a",), ("x",), np.array(data["I"], dtype=bool))
    return pl.PolarityFrame(p, {Modality("dia", 1): np.array(data["R"], dtype=bool)}, check=False)


def counter_condition(f: pl.PolarityFrame) -> bool:
    """∀a∀b R◇^(0)[(a↑ ∩ b↑)↓] ⊇ R◇^(0)[a↑↓ ∩ b↑↓]."""
    p, r = f.pol, f.rel(Modality("dia", 1))
    n = len(p.A)
    for a, b in product(range(n), repeat=2):
        ea, eb = np.eye(n, dtype=bool)[a], np.eye(n, dtype=bool)[b]
        ua, ub = p.up(ea), p.up(eb)
        big = pl.r0(r, p.down(ua & ub))
        small = pl.r0(r, p.down(ua) & p.down(ub))
        if np.any(small & ~big):
            return False
    return True


def join_meet_valid(f: pl.PolarityFrame) -> bool:
    """Direct lattice semantics of ◇(p∨q) ≤ ◇(p∧q) over all pairs of concepts."""
    p = f.pol
    ext = pl.concept_extents(p)
    d = (Modality("dia", 1),)
    for i, j in product(range(ext.shape[1]), repeat=2):
        join = p.down(p.up(ext[:, i] | ext[:, j]))
        meet = ext[:, i] & ext[:, j]
        lhs = pl.eval_chain(f, d, join[:, None])[:, 0]
        rhs = pl.eval_chain(f, d, meet[:, None])[:, 0]
        if np.any(lhs & ~rhs):
            return False
    return True


def _join_meet_outcome(data: dict = JOIN_MEET_WITNESS) -> tuple[bool, bool]:
    f = join_meet_frame(data)
    return counter_condition(f), bool(np.all(f.rel(Modality("dia", 1))))


def run_regressions(strict: bool = False) -> RegressionReport:
    """Reproduce the four documented counterexamples."""
    results = []

    left, right = polarity_assoc()
    ok = bool(left.all()) and not right.any()
    results.append(RegressionResult(
        "polarity non-associativity", "R;(T;U) = A×X and (R;T);U = ∅",
        f"R;(T;U) full={bool(left.all())}, (R;T);U empty={not right.any()}", ok))

    left, right = kripke_assoc()
    ok = not left.any() and bool(right.all())
    results.append(RegressionResult(
        "pseudo-composition non-associativity", "R⋆(T⋆U) = ∅ and (R⋆T)⋆U = W×W",
        f"R⋆(T⋆U) empty={not left.any()}, (R⋆T)⋆U full={bool(right.all())}", ok))

    h = builtin("chain3")
    lv, rv = mv_assoc()
    ok = lv == h.top and rv == h.bottom
    results.append(RegressionResult(
        "many-valued non-associativity", "((R;T);U)(a,x) = 1, (R;(T;U))(a,x) = 0 so ≤ fails",
        f"((R;T);U)(a,x) = {h.names[lv]}, (R;(T;U))(a,x) = {h.names[rv]}", ok))

    counter, lifted = _join_meet_outcome()
    try:
        parse_inequality("dia (p or q) <= dia (p and q)")
        rejected = False
    except NotAnMrp:
        rejected = True
    ok = counter and not lifted and rejected
    results.append(RegressionResult(
        "join/meet Sahlqvist inequality", "ALBA condition holds, A×X ⊆ R◇ fails, parser says NotAnMrp",
        f"condition={counter}, A×X⊆R◇={lifted}, NotAnMrp={rejected}", ok))

    report = RegressionReport(results)
    if strict and not report.ok:
        raise RegressionDrift("; ".join(r.name for r in results if not r.passed))
    return report


def _flips(data: dict) -> Iterator[dict]:
    for key, mat in data.items():
        for i, row in enumerate(mat):
            for j in range(len(row)):
                new = {k: [list(r) for r in v] for k, v in data.items()}
                new[key][i][j] = 1 - new[key][i][j]
                yield new


def mutation_sensitivity() -> dict[str, tuple[int, int]]:
    """For each witness: (single-entry mutations that break the documented
    failure, total single-entry mutations)."""
    def pol(d):
        left, right = polarity_assoc(d)
        return bool(left.all()) and not right.any()

    def kri(d):
        left, right = kripke_assoc(d)
        return not left.any() and bool(right.all())

    def mvw(d):
        lv, rv = mv_assoc(d)
        return not builtin("chain3").leq[lv, rv]

    def con(d):
        counter, lifted = _join_meet_outcome(d)
        return counter and not lifted

    out = {}
    for name, data, fn in (("polarity", POLARITY_WITNESS, pol), ("kripke", KRIPKE_WITNESS, kri),
                           ("mv", MV_WITNESS, mvw), ("join-meet", JOIN_MEET_WITNESS, con)):
        muts = list(_flips(data))
        out[name] = (sum(not fn(d) for d in muts), len(muts))
    return out
