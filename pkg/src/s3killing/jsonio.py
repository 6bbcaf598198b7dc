"""JSON wire formats.

* curvature tensor: {"format": "act-v1", "basis": "01,02,03,23,31,12", "matrix": 6x6}
* diagonal tensor:  {"w": [...], "t": [...], "s": ...}
* symmetric 4x4:    {"sym4": 4x4}
* KS-matrix:        {"Delta": [...], "t": [...]} or {"ks": 3x3}
"""
from __future__ import annotations

import json
import math
import sys

import numpy as np

from .decomposition import DiagonalACT
from .ksvariety import KSMatrix
from .lambda2 import BASIS_LABEL, AlgCurvTensor, as_sym4


def read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)) or x is None:
        return json.dumps(None if x is None else bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return json.dumps(str(x))
        return format(x + 0.0, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, np.ndarray):
        return _fmt(x.tolist())
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in x.items()) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(obj) -> str:
    """JSON text with every float printed to 17 significant digits."""
    return _fmt(obj)


def act_to_json(r: AlgCurvTensor) -> dict:
    return {"format": "act-v1", "basis": BASIS_LABEL, "matrix": r.matrix.tolist()}


def diagonal_to_json(d: DiagonalACT) -> dict:
    return {"w": d.w.tolist(), "t": d.t.tolist(), "s": d.s}


def ks_to_json(m: KSMatrix) -> dict:
    return {"Delta": m.Delta.tolist(), "t": m.t.tolist()}


def act_from_json(obj) -> AlgCurvTensor:
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if "matrix" in obj:
        fmt = obj.get("format", "act-v1")
        if fmt != "act-v1":
            raise ValueError(f"unsupported format {fmt!r}")
        basis = obj.get("basis", BASIS_LABEL)
        if basis != BASIS_LABEL:
            raise ValueError(f"unsupported basis {basis!r}")
        return AlgCurvTensor(obj["matrix"])
    if {"w", "t"} <= obj.keys():
        return DiagonalACT(obj["w"], obj["t"], obj.get("s", 0.0)).act()
    raise ValueError("not a curvature tensor document")


def sym4_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict) and "sym4" in obj:
        h = np.asarray(obj["sym4"], dtype=float)
    elif isinstance(obj, list):
        h = np.asarray(obj, dtype=float)
    else:
        raise ValueError("expected {\"sym4\": [[...]]}")
    if h.shape != (4, 4) or not np.allclose(h, h.T, atol=1e-12):
        raise ValueError("sym4 must be a symmetric 4x4 matrix")
    return as_sym4(h)


def ks_from_json(obj) -> KSMatrix:
    if isinstance(obj, dict) and "ks" in obj:
        return KSMatrix.from_matrix(obj["ks"])
    if isinstance(obj, dict) and {"Delta", "t"} <= obj.keys():
        delta = np.asarray(obj["Delta"], dtype=float)
        if delta.shape != (3,) or abs(delta.sum()) > 1e-12 * max(1.0, np.max(np.abs(delta))):
            raise ValueError("Delta must have three entries summing to zero")
        return KSMatrix(delta, obj["t"])
    raise ValueError("not a KS-matrix document")
