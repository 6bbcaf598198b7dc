"""Three independent integrability tests for curvature tensors.

* brute force: the two algebraic integrability conditions evaluated as
  explicit index contractions with unnormalized (anti)symmetrizers;
* invariants: four isometry invariants built from the Weyl and Ricci parts;
* diagonal determinant: diagonalise, then test det of the 3x3 KS-matrix.

All residuals are evaluated on the trace-free part of the tensor (the
scalar part never changes the verdict) and divided by the matching power
of its operator norm.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .decomposition import (DiagonalACT, diagonalise, hodge_blocks, is_diagonalisable,
                            ricci_decompose)
from .errors import NotDiagonalisable
from .lambda2 import STAR, AlgCurvTensor, ricci_contraction
from .tolerances import DEFAULT


class Method(enum.Enum):
    BRUTE_FORCE = "brute"
    INVARIANTS = "invariants"
    DIAGONAL_DET = "diagonal"


@dataclass
class IntegrabilityReport:
    verdict: bool
    method: Method
    aic1_residual: float
    aic2_residual: float
    invariant_values: dict = field(default_factory=dict)
    ks_determinant: float | None = None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method.value,
            "aic1_residual": self.aic1_residual,
            "aic2_residual": self.aic2_residual,
            "invariants": dict(self.invariant_values),
            "ks_determinant": self.ks_determinant,
        }


def _normalized(r: AlgCurvTensor):
    r0 = r.trace_free()
    return r0, r0.norm()


# --- first condition ---------------------------------------------------------

def aic1_raw(r: AlgCurvTensor) -> float:
    m = r.matrix
    b = hodge_blocks(r)
    square_gap = abs(np.trace(b.Wplus @ b.Wplus) - np.trace(b.Wminus @ b.Wminus))
    return float(np.max(np.abs(ricci_contraction(m @ STAR @ m))) + square_gap)


def aic1_residual(r: AlgCurvTensor) -> float:
    r0, scale = _normalized(r)
    if scale == 0.0:
        return 0.0
    return aic1_raw(r0) / scale ** 2


# --- second condition --------------------------------------------------------

_PERMS4 = list(itertools.permutations(range(4)))


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


_SIGNS4 = [_perm_sign(p) for p in _PERMS4]


def aic2_tensor(r: AlgCurvTensor) -> np.ndarray:
    """Rank-8 tensor of the second condition, free indices (a1 b1 c1 d1 a2 b2 c2 d2).

    Base term: R_{i b1 a2 b2} R_{i a1 k c1} R_{k d1 c2 d2}; antisymmetrized
    over (a2, b2, c2, d2) and symmetrized over (a1, b1, c1, d1), both
    without the 1/4! normalization.
    """
    c = r.components()
    base = np.einsum("ibpq,iakc,kdrs->abcdpqrs", c, c, c, optimize=True)
    anti = np.zeros_like(base)
    for p, sgn in zip(_PERMS4, _SIGNS4):
        anti += sgn * base.transpose(0, 1, 2, 3, *(4 + k for k in p))
    out = np.zeros_like(base)
    for p in _PERMS4:
        out += anti.transpose(*p, 4, 5, 6, 7)
    return out


def aic2_reduced(r: AlgCurvTensor) -> np.ndarray:
    """The (a1 b1 c1 d1) array multiplying eps_{a2 b2 c2 d2} in :func:`aic2_tensor`.

    A tensor antisymmetric in four indices over R^4 is fixed by its
    (0, 1, 2, 3) component, so the antisymmetrizer is only evaluated there.
    """
    c = r.components()
    base = np.einsum("ibpq,iakc,kdrs->abcdpqrs", c, c, c, optimize=True)
    anti = np.zeros((4, 4, 4, 4))
    for p, sgn in zip(_PERMS4, _SIGNS4):
        anti += sgn * base[:, :, :, :, p[0], p[1], p[2], p[3]]
    out = np.zeros_like(anti)
    for p in _PERMS4:
        out += anti.transpose(p)
    return out


def aic2_raw(r: AlgCurvTensor) -> float:
    return float(np.max(np.abs(aic2_reduced(r))))


def aic2_residual(r: AlgCurvTensor) -> float:
    r0, scale = _normalized(r)
    if scale == 0.0:
        return 0.0
    return aic2_raw(r0) / scale ** 3


# --- invariants ----------------------------------------------------------------

def invariants(r: AlgCurvTensor) -> dict:
    """Raw invariant values c1..c4 of the trace-free part (c4 is scale free)."""
    parts = ricci_decompose(r)
    W = parts.W.matrix
    T = parts.ricci_part().matrix
    comm = W @ T - T @ W
    c1 = float(np.trace(comm @ comm))
    c2 = float(np.trace(STAR @ W @ W))
    c3 = float(np.trace(STAR @ W @ W @ W))
    # one common scale keeps c4 continuous when a column shrinks to zero
    ref = max(np.linalg.norm(W), np.linalg.norm(T))
    if ref == 0.0:
        return {"c1": c1, "c2": c2, "c3": c3, "c4": 0.0}
    cols = [np.eye(6).ravel() / np.sqrt(6.0), W.ravel() / ref,
            (W @ W - T @ T).ravel() / ref ** 2]
    c4 = float(np.linalg.svd(np.column_stack(cols), compute_uv=False)[-1])
    return {"c1": c1, "c2": c2, "c3": c3, "c4": c4}


def normalized_invariants(r: AlgCurvTensor) -> dict:
    vals = invariants(r)
    scale = r.trace_free().norm()
    if scale == 0.0:
        return {k: 0.0 for k in vals}
    return {"c1": abs(vals["c1"]) / scale ** 4, "c2": abs(vals["c2"]) / scale ** 2,
            "c3": abs(vals["c3"]) / scale ** 3, "c4": vals["c4"]}


# --- diagonal determinant ------------------------------------------------------

def ks_determinant(d: DiagonalACT) -> float:
    w, t = d.w, d.t
    delta = np.array([w[1] - w[2], w[2] - w[0], w[0] - w[1]])
    return float(np.prod(delta) + np.dot(delta, t * t))


def _ks_scale(d: DiagonalACT) -> float:
    w, t = d.w, d.t
    delta = np.array([w[1] - w[2], w[2] - w[0], w[0] - w[1]])
    return float(max(np.max(np.abs(delta)), np.max(np.abs(t))))


def diagonal_residual(d: DiagonalACT) -> float:
    scale = _ks_scale(d)
    if scale == 0.0:
        return 0.0
    return abs(ks_determinant(d)) / scale ** 3


def diagonal_is_integrable(d: DiagonalACT, tol: float = DEFAULT.eq) -> bool:
    return diagonal_residual(d) < tol


# --- dispatch --------------------------------------------------------------------

def is_integrable(r: AlgCurvTensor, tol=DEFAULT, method: Method = Method.INVARIANTS
                  ) -> IntegrabilityReport:
    eq = tol.eq
    a1 = aic1_residual(r)
    a2 = aic2_residual(r)
    inv = normalized_invariants(r)
    det = None
    diag_verdict = False
    if is_diagonalisable(r, eq):
        try:
            d, _ = diagonalise(r, tol)
        except NotDiagonalisable:
            pass
        else:
            det = ks_determinant(d)
            diag_verdict = diagonal_is_integrable(d, eq)
    if method is Method.BRUTE_FORCE:
        verdict = a1 < eq and a2 < eq
    elif method is Method.INVARIANTS:
        verdict = all(v < eq for v in inv.values())
    else:
        verdict = diag_verdict
    return IntegrabilityReport(verdict=bool(verdict), method=method, aic1_residual=a1,
                               aic2_residual=a2, invariant_values=inv, ks_determinant=det)
