"""Bivectors of R^4 and algebraic curvature tensors stored as 6x6 matrices.

The basis of the bivector space is fixed to

    (e0^e1, e0^e2, e0^e3, e2^e3, e3^e1, e1^e2)

so that the Hodge star is the block swap [[0, I], [I, 0]] and each 6x6
entry M[(ij), (kl)] is literally the component R_ijkl.
"""
from __future__ import annotations

import numpy as np

from .errors import BianchiViolation, SymmetryViolation
from .tolerances import DEFAULT

PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))
BASIS_LABEL = "01,02,03,23,31,12"

_I3 = np.eye(3)
STAR = np.block([[np.zeros((3, 3)), _I3], [_I3, np.zeros((3, 3))]])
METRIC = np.eye(4)

# index/sign lookup: e_i^e_j = sign[i, j] * B[index[i, j]]
_PAIR_INDEX = np.zeros((4, 4), dtype=int)
_PAIR_SIGN = np.zeros((4, 4))
for _p, (_i, _j) in enumerate(PAIRS):
    _PAIR_INDEX[_i, _j] = _PAIR_INDEX[_j, _i] = _p
    _PAIR_SIGN[_i, _j] = 1.0
    _PAIR_SIGN[_j, _i] = -1.0


def bivector_to_components(m) -> np.ndarray:
    """Expand any 6x6 matrix on bivectors to a 4x4x4x4 array."""
    m = np.asarray(m, dtype=float)
    idx = _PAIR_INDEX
    sign = _PAIR_SIGN[:, :, None, None] * _PAIR_SIGN[None, None, :, :]
    return sign * m[idx[:, :, None, None], idx[None, None, :, :]]


def components_to_bivector(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    out = np.empty((6, 6))
    for p, (i, j) in enumerate(PAIRS):
        for q, (k, l) in enumerate(PAIRS):
            out[p, q] = r[i, j, k, l]
    return out


def _scale(a) -> float:
    return max(1.0, float(np.max(np.abs(a))))


class AlgCurvTensor:
    """Algebraic curvature tensor on R^4 as a symmetric 6x6 matrix.

    The constructor validates pair symmetry and the Bianchi identity
    (trace of STAR @ M vanishes).  Use :meth:`from_raw` for matrices
    produced by internal arithmetic, which are cleaned of round-off instead.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix, tol: float = DEFAULT.symmetry):
        m = np.array(matrix, dtype=float)
        if m.shape != (6, 6):
            raise ValueError(f"expected a 6x6 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix has non-finite entries")
        scale = _scale(m)
        pair = float(np.max(np.abs(m - m.T)))
        if pair > tol * scale:
            raise SymmetryViolation("pair", pair)
        bianchi = abs(float(np.trace(STAR @ m)))
        if bianchi > tol * scale:
            raise BianchiViolation(bianchi)
        self._m = _clean(m)
        self._m.flags.writeable = False

    @classmethod
    def from_raw(cls, matrix) -> "AlgCurvTensor":
        obj = cls.__new__(cls)
        obj._m = _clean(np.array(matrix, dtype=float))
        obj._m.flags.writeable = False
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def components(self) -> np.ndarray:
        return bivector_to_components(self._m)

    @property
    def scalar_curvature(self) -> float:
        return 2.0 * float(np.trace(self._m))

    def trace_free(self) -> "AlgCurvTensor":
        """The tensor with its scalar part removed."""
        return AlgCurvTensor.from_raw(self._m - np.trace(self._m) / 6.0 * np.eye(6))

    def norm(self) -> float:
        return float(np.linalg.norm(self._m, 2))

    def __add__(self, other):
        return AlgCurvTensor.from_raw(self._m + other.matrix)

    def __sub__(self, other):
        return AlgCurvTensor.from_raw(self._m - other.matrix)

    def __mul__(self, c):
        return AlgCurvTensor.from_raw(float(c) * self._m)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgCurvTensor.from_raw(-self._m)

    def allclose(self, other, atol=1e-12) -> bool:
        return bool(np.allclose(self._m, other.matrix, rtol=0, atol=atol))

    def __repr__(self):
        return f"AlgCurvTensor({np.array2string(self._m, precision=6)})"


def _clean(m: np.ndarray) -> np.ndarray:
    m = 0.5 * (m + m.T)
    # remove the totally antisymmetric part (a multiple of STAR)
    return m - np.trace(STAR @ m) / 6.0 * STAR


def metric_act() -> AlgCurvTensor:
    """Curvature tensor of the round metric, i.e. half of g wedge-product g."""
    return AlgCurvTensor.from_raw(np.eye(6))


def act_from_components(r, tol: float = DEFAULT.symmetry) -> AlgCurvTensor:
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4, 4, 4):
        raise ValueError(f"expected a 4x4x4x4 array, got shape {r.shape}")
    scale = _scale(r)
    anti = max(np.max(np.abs(r + r.transpose(1, 0, 2, 3))),
               np.max(np.abs(r + r.transpose(0, 1, 3, 2))))
    if anti > tol * scale:
        raise SymmetryViolation("antisymmetry", anti)
    pair = np.max(np.abs(r - r.transpose(2, 3, 0, 1)))
    if pair > tol * scale:
        raise SymmetryViolation("pair", pair)
    cyc = r + np.einsum("acdb->abcd", r) + np.einsum("adbc->abcd", r)
    bianchi = np.max(np.abs(cyc))
    if bianchi > tol * scale:
        raise BianchiViolation(bianchi)
    return AlgCurvTensor.from_raw(components_to_bivector(r))


def hodge_conjugate(r: AlgCurvTensor) -> AlgCurvTensor:
    return AlgCurvTensor.from_raw(STAR @ r.matrix @ STAR)


def as_sym4(h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {h.shape}")
    return 0.5 * (h + h.T)


def kulkarni_nomizu(h, k) -> AlgCurvTensor:
    h = as_sym4(h)
    k = as_sym4(k)
    r = (np.einsum("ac,bd->abcd", h, k) - np.einsum("ad,bc->abcd", h, k)
         - np.einsum("bc,ad->abcd", h, k) + np.einsum("bd,ac->abcd", h, k))
    return AlgCurvTensor.from_raw(components_to_bivector(r))


def _det3(m) -> float:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def adjugate3(m) -> np.ndarray:
    """Transpose of the cofactor matrix; polynomial, so exact on integers."""
    a = np.asarray(m, dtype=float)
    if a.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    adj = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = a[r[0], c[0]] * a[r[1], c[1]] - a[r[0], c[1]] * a[r[1], c[0]]
            adj[i, j] = (-1) ** (i + j) * minor
    return adj


def adjugate4(h) -> np.ndarray:
    a = np.asarray(h, dtype=float)
    if a.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    adj = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            minor = np.delete(np.delete(a, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * _det3(minor)
    return adj


def ricci_contraction(e) -> np.ndarray:
    """Contract E^{ij}_{kj} for an arbitrary endomorphism E of bivectors."""
    return np.einsum("ijkj->ik", bivector_to_components(e))


def ricci_tensor(r: AlgCurvTensor) -> np.ndarray:
    return np.einsum("abcb->ac", r.components())
