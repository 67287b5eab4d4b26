"""JSON reading and writing for the three frame kinds."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .errors import FrameFormatError
from .heyting import algebra_from_json
from .kripke import KripkeFrame
from .mv import MvPolarity, MvPolarityFrame
from .polarity import Polarity, PolarityFrame
from .syntax import Modality

Frame = Union[KripkeFrame, PolarityFrame, MvPolarityFrame]


def _modality(key: str) -> Modality:
    kind, _, idx = key.partition(".")
    if kind not in ("box", "dia") or not idx.isdigit():
        raise FrameFormatError(f"relation key {key!r} must look like 'box.1' or 'dia.2'")
    return Modality(kind, int(idx))


def _names(obj: dict, key: str) -> tuple[str, ...]:
    vals = obj.get(key)
    if not isinstance(vals, list) or len(set(map(str, vals))) != len(vals):
        raise FrameFormatError(f"{key!r} must be a list of distinct names")
    return tuple(str(v) for v in vals)


def _pairs(pairs, rows: tuple, cols: tuple, what: str) -> np.ndarray:
    out = np.zeros((len(rows), len(cols)), dtype=bool)
    ri = {n: i for i, n in enumerate(rows)}
    ci = {n: i for i, n in enumerate(cols)}
    for pair in pairs:
        if len(pair) != 2 or pair[0] not in ri or pair[1] not in ci:
            raise FrameFormatError(f"bad pair {pair!r} in {what}")
        out[ri[pair[0]], ci[pair[1]]] = True
    return out


def frame_from_json(obj: dict, check: bool = True) -> Frame:
    kind = obj.get("kind")
    try:
        if kind == "kripke":
            w = _names(obj, "worlds")
            rels = {_modality(k): _pairs(v, w, w, k) for k, v in obj.get("relations", {}).items()}
            return KripkeFrame(w, rels)
        if kind == "polarity":
            a, x = _names(obj, "A"), _names(obj, "X")
            pol = Polarity(a, x, _pairs(obj.get("I", []), a, x, "I"))
            rels = {}
            for k, v in obj.get("relations", {}).items():
                m = _modality(k)
                rels[m] = _pairs(v, x, a, k) if m.is_diamond else _pairs(v, a, x, k)
            return PolarityFrame(pol, rels, check)
        if kind == "mv-polarity":
            h = algebra_from_json(obj["algebra"])
            a, x = _names(obj, "A"), _names(obj, "X")

            def matrix(rows, shape, what):
                arr = np.array([[h.index(str(v)) for v in row] for row in rows], dtype=np.int64)
                if arr.shape != shape:
                    raise FrameFormatError(f"{what} has shape {arr.shape}, expected {shape}")
                return arr

            pol = MvPolarity(h, a, x, matrix(obj["I"], (len(a), len(x)), "I"))
            rels = {}
            for k, v in obj.get("relations", {}).items():
                m = _modality(k)
                shape = (len(x), len(a)) if m.is_diamond else (len(a), len(x))
                rels[m] = matrix(v, shape, k)
            return MvPolarityFrame(pol, rels, check)
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameFormatError(f"malformed {kind} frame: {exc}") from exc
    raise FrameFormatError(f"unknown frame kind {kind!r}")


def load_frame(path: str | Path, check: bool = True) -> Frame:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"{path}: {exc}") from exc
    return frame_from_json(obj, check)


def dump_frame(f: Frame, path: str | Path) -> None:
    Path(path).write_text(json.dumps(f.to_json(), indent=2) + "\n", encoding="utf-8")

