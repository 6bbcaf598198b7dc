"""Finite-difference geometry on the unit sphere in R^4.

The Killing tensor of a curvature tensor R is the quadratic form
K_x(v, w) = R(x, v, x, w) on tangent vectors.  This module evaluates it
pointwise and checks its differential properties numerically, without
using any of the algebraic integrability machinery; it is the reference
the algebraic verdicts are compared against.

Covariant derivatives: the ambient field y -> R(y, ., y, .) is quadratic
and annihilates y, so its flat directional derivative restricted to
tangent vectors equals the Levi-Civita derivative on the sphere.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lambda2 import AlgCurvTensor


def _components(r) -> np.ndarray:
    if isinstance(r, AlgCurvTensor):
        return r.components()
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4, 4, 4):
        raise ValueError("expected a curvature tensor or a 4x4x4x4 array")
    return r


def _tangent(x, v):
    return v - np.dot(x, v) * x


@dataclass(frozen=True)
class TangentFrame:
    x: np.ndarray
    e: np.ndarray  # rows e1, e2, e3

    @classmethod
    def at(cls, x, rng=None) -> "TangentFrame":
        x = np.asarray(x, dtype=float)
        x = x / np.linalg.norm(x)
        seed = rng.standard_normal((4, 3)) if rng is not None else np.eye(4)[:, 1:] + 0.1
        q, _ = np.linalg.qr(np.column_stack([x, seed]))
        if np.dot(q[:, 0], x) < 0:
            q = -q
        return cls(x, q[:, 1:].T.copy())

    @classmethod
    def random(cls, rng, min_coord: float = 0.05) -> "TangentFrame":
        while True:
            x = rng.standard_normal(4)
            x /= np.linalg.norm(x)
            if np.all(np.abs(x) > min_coord):
                return cls.at(x, rng)

    def gram(self) -> np.ndarray:
        basis = np.vstack([self.x, self.e])
        return basis @ basis.T


def killing_eval(r, x, v, w) -> float:
    c = _components(r)
    x = np.asarray(x, dtype=float)
    v = _tangent(x, np.asarray(v, dtype=float))
    w = _tangent(x, np.asarray(w, dtype=float))
    return float(np.einsum("abcd,a,b,c,d->", c, x, v, x, w))


def _ambient_field(c, y) -> np.ndarray:
    return np.einsum("abcd,a,c->bd", c, y, y)


def killing_endomorphism(r, frame: TangentFrame) -> np.ndarray:
    k = _ambient_field(_components(r), frame.x)
    m = frame.e @ k @ frame.e.T
    return 0.5 * (m + m.T)


def geodesic_conservation(r, x, v, n_samples: int = 100) -> float:
    c = _components(r)
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    v = _tangent(x, np.asarray(v, dtype=float))
    v = v / np.linalg.norm(v)
    ref = np.einsum("abcd,a,b,c,d->", c, x, v, x, v)
    dev = 0.0
    for t in np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False):
        g = x * np.cos(t) + v * np.sin(t)
        gd = -x * np.sin(t) + v * np.cos(t)
        dev = max(dev, abs(np.einsum("abcd,a,b,c,d->", c, g, gd, g, gd) - ref))
    return float(dev)


def numeric_commutator(r1, r2, frame: TangentFrame) -> float:
    a = killing_endomorphism(r1, frame)
    b = killing_endomorphism(r2, frame)
    return float(np.linalg.norm(a @ b - b @ a))


@dataclass(frozen=True)
class TorsionResidual:
    killing_eq: float
    tns: tuple

    def as_dict(self):
        return {"killing_eq": self.killing_eq, "tns": list(self.tns)}


def covariant_derivative(r, frame: TangentFrame, step: float = 1e-5) -> np.ndarray:
    """D[c, a, b] = (nabla_{e_c} K)(e_a, e_b), central differences + Richardson."""
    if not 1e-6 <= step <= 1e-4:
        raise ValueError("step must lie in [1e-6, 1e-4]")
    c = _components(r)
    out = np.empty((3, 3, 3))
    for i, u in enumerate(frame.e):
        def central(h):
            return (_ambient_field(c, frame.x + h * u) - _ambient_field(c, frame.x - h * u)) / (2 * h)
        d = (4.0 * central(step / 2) - central(step)) / 3.0
        out[i] = frame.e @ d @ frame.e.T
    return out


def _antisym3(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for p in itertools.permutations(range(3)):
        sign = np.linalg.det(np.eye(3)[list(p)])
        out += sign * t.transpose(p)
    return out / 6.0


def _sym3(t: np.ndarray) -> np.ndarray:
    return sum(t.transpose(p) for p in itertools.permutations(range(3))) / 6.0


def nijenhuis_torsion(k: np.ndarray, dk: np.ndarray) -> np.ndarray:
    """N[a, b, c] in an orthonormal frame, with dk[c, a, b] = nabla_c K_ab."""
    grad_k = dk.transpose(1, 2, 0)  # grad_k[a, b, c] = nabla_c K_ab
    first = np.einsum("ad,dbc->abc", k, grad_k) - np.einsum("ad,dcb->abc", k, grad_k)
    # nabla_d K^a_c K^d_b - nabla_d K^a_b K^d_c
    second = np.einsum("dac,db->abc", dk, k) - np.einsum("dab,dc->abc", dk, k)
    return first + second


def nijenhuis_residual(r, frame: TangentFrame, step: float = 1e-5) -> TorsionResidual:
    """Killing-equation and torsion residuals at one frame, scale free.

    Residuals are max-abs values of the totally symmetrized covariant
    derivative and of the three antisymmetrized torsion conditions (in
    dimension 3 the latter have a single independent component, so they
    do not depend on the frame).  The torsion uses the trace-free part of
    R divided by its operator norm.
    """
    full = r if isinstance(r, AlgCurvTensor) else None
    if full is not None:
        r0 = full.trace_free()
        scale = r0.norm()
        ref = max(full.norm(), 1e-300)
    else:
        r0 = r
        scale = float(np.max(np.abs(_components(r))))
        ref = max(scale, 1e-300)
    dk_full = covariant_derivative(r, frame, step)
    killing_eq = float(np.max(np.abs(_sym3(dk_full)))) / ref
    if scale == 0.0:
        return TorsionResidual(killing_eq, (0.0, 0.0, 0.0))
    k = killing_endomorphism(r0, frame) / scale
    dk = covariant_derivative(r0, frame, step) / scale
    n = nijenhuis_torsion(k, dk)
    c1 = _antisym3(n)
    c2 = _antisym3(np.einsum("dbc,ad->abc", n, k))
    c3 = _antisym3(np.einsum("dbc,ad->abc", n, k @ k))
    tns = tuple(float(np.max(np.abs(c))) for c in (c1, c2, c3))
    return TorsionResidual(killing_eq, tns)
