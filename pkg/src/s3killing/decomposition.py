"""Ricci and self-dual/anti-self-dual splitting of curvature tensors.

In the basis eta_{+a} = (B_a + B_{3+a})/sqrt2, eta_{-a} = (B_a - B_{3+a})/sqrt2
a curvature operator reads [[W+, T^T], [T, W-]] + (s/12) I with traceless
symmetric W+, W- and a general 3x3 block T (the lower-left block).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BianchiViolation, NotDiagonalisable
from .lambda2 import METRIC, AlgCurvTensor, kulkarni_nomizu, ricci_tensor
from .tolerances import DEFAULT

_S2 = 1.0 / np.sqrt(2.0)
# columns: eta_{+1..+3}, eta_{-1..-3} expressed in the bivector basis
ETA = _S2 * np.block([[np.eye(3), np.eye(3)], [np.eye(3), -np.eye(3)]])


@dataclass(frozen=True)
class HodgeBlocks:
    Wplus: np.ndarray
    Wminus: np.ndarray
    Tpm: np.ndarray
    s: float


@dataclass(frozen=True)
class RicciParts:
    W: AlgCurvTensor
    T: np.ndarray
    s: float

    def ricci_part(self) -> AlgCurvTensor:
        return 0.5 * kulkarni_nomizu(self.T, METRIC)

    def scalar_part(self) -> AlgCurvTensor:
        return AlgCurvTensor.from_raw(self.s / 12.0 * np.eye(6))


class DiagonalACT:
    """Diagonal curvature tensor with parameters (w, t, s).

    The diagonal entries are R_0a0a = w_a + t_a + s/12 and
    R_bcbc = w_a - t_a + s/12 for cyclic (a, b, c).  The w-vector is
    projected to zero sum on construction.
    """

    __slots__ = ("w", "t", "s")

    def __init__(self, w, t, s=0.0):
        w = np.array(w, dtype=float).reshape(3)
        self.w = w - w.mean()
        self.t = np.array(t, dtype=float).reshape(3)
        self.s = float(s)
        self.w.flags.writeable = False
        self.t.flags.writeable = False

    def diagonal(self) -> np.ndarray:
        c = self.s / 12.0
        return np.concatenate([self.w + self.t + c, self.w - self.t + c])

    def act(self) -> AlgCurvTensor:
        return AlgCurvTensor.from_raw(np.diag(self.diagonal()))

    @classmethod
    def from_act(cls, r: AlgCurvTensor) -> "DiagonalACT":
        d = np.diag(r.matrix)
        s = 2.0 * d.sum()
        return cls(0.5 * (d[:3] + d[3:]) - s / 12.0, 0.5 * (d[:3] - d[3:]), s)

    def __eq__(self, other):
        if not isinstance(other, DiagonalACT):
            return NotImplemented
        return (np.array_equal(self.w, other.w) and np.array_equal(self.t, other.t)
                and self.s == other.s)

    def allclose(self, other, atol=1e-10) -> bool:
        return (np.allclose(self.w, other.w, atol=atol, rtol=0)
                and np.allclose(self.t, other.t, atol=atol, rtol=0)
                and abs(self.s - other.s) <= atol * max(1.0, abs(self.s)))

    def __repr__(self):
        return f"DiagonalACT(w={self.w.tolist()}, t={self.t.tolist()}, s={self.s})"


@dataclass(frozen=True)
class RotationPair:
    Uplus: np.ndarray
    Uminus: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.eye(3))

    @classmethod
    def random(cls, rng) -> "RotationPair":
        return cls(random_rotation(rng), random_rotation(rng))

    def check(self, tol=1e-12) -> bool:
        return all(np.allclose(u.T @ u, np.eye(3), atol=tol) and abs(np.linalg.det(u) - 1) < tol
                   for u in (self.Uplus, self.Uminus))


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def ricci_decompose(r: AlgCurvTensor) -> RicciParts:
    s = r.scalar_curvature
    ric = ricci_tensor(r)
    T = ric - s / 4.0 * METRIC
    T = 0.5 * (T + T.T)
    parts = RicciParts(W=r, T=T, s=s)
    W = r - parts.ricci_part() - parts.scalar_part()
    return RicciParts(W=W, T=T, s=s)


def hodge_blocks(r: AlgCurvTensor, tol: float = DEFAULT.symmetry) -> HodgeBlocks:
    e = ETA.T @ r.matrix @ ETA
    s = r.scalar_curvature
    wp = e[:3, :3] - s / 12.0 * np.eye(3)
    wm = e[3:, 3:] - s / 12.0 * np.eye(3)
    gap = abs(np.trace(wp) - np.trace(wm))
    if gap > tol * max(1.0, np.max(np.abs(e))):
        raise BianchiViolation(gap)
    return HodgeBlocks(0.5 * (wp + wp.T), 0.5 * (wm + wm.T), e[3:, :3].copy(), s)


def blocks_to_act(b: HodgeBlocks) -> AlgCurvTensor:
    c = b.s / 12.0
    e = np.block([[b.Wplus + c * np.eye(3), b.Tpm.T], [b.Tpm, b.Wminus + c * np.eye(3)]])
    return AlgCurvTensor.from_raw(ETA @ e @ ETA.T)


def so_action(r: AlgCurvTensor, u: RotationPair) -> AlgCurvTensor:
    z = np.zeros((3, 3))
    big = np.block([[u.Uplus, z], [z, u.Uminus]])
    e = ETA.T @ r.matrix @ ETA
    return AlgCurvTensor.from_raw(ETA @ (big.T @ e @ big) @ ETA.T)


def orientation_reverse(r: AlgCurvTensor) -> AlgCurvTensor:
    b = hodge_blocks(r)
    return blocks_to_act(HodgeBlocks(b.Wminus, b.Wplus, b.Tpm.T, b.s))


def _tracefree_scale(r: AlgCurvTensor) -> float:
    return r.trace_free().norm()


def alignment_residual(r: AlgCurvTensor) -> float:
    b = hodge_blocks(r)
    return float(np.max(np.abs(b.Tpm @ b.Wplus - b.Wminus @ b.Tpm)))


def is_aligned(r: AlgCurvTensor, tol: float = DEFAULT.eq) -> bool:
    scale = _tracefree_scale(r)
    if scale == 0.0:
        return True
    return alignment_residual(r) < tol * scale ** 2


def spectra_gap(r: AlgCurvTensor) -> float:
    """Largest |tr W+^k - tr W-^k| over k = 2, 3."""
    b = hodge_blocks(r)
    gaps = [abs(np.trace(np.linalg.matrix_power(b.Wplus, k))
                - np.trace(np.linalg.matrix_power(b.Wminus, k))) for k in (2, 3)]
    return float(max(gaps))


def is_diagonalisable(r: AlgCurvTensor, tol: float = DEFAULT.eq) -> bool:
    scale = _tracefree_scale(r)
    if scale == 0.0:
        return True
    b = hodge_blocks(r)
    k2 = abs(np.trace(b.Wplus @ b.Wplus) - np.trace(b.Wminus @ b.Wminus)) / scale ** 2
    k3 = abs(np.trace(b.Wplus @ b.Wplus @ b.Wplus)
             - np.trace(b.Wminus @ b.Wminus @ b.Wminus)) / scale ** 3
    return is_aligned(r, tol) and k2 < tol and k3 < tol


def _groups(values: np.ndarray, tol: float) -> list[list[int]]:
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def diagonalise(r: AlgCurvTensor, tol=DEFAULT) -> tuple[DiagonalACT, RotationPair]:
    if not is_diagonalisable(r, tol.eq):
        raise NotDiagonalisable(max(alignment_residual(r), spectra_gap(r)))
    b = hodge_blocks(r)
    wp, vp = np.linalg.eigh(b.Wplus)
    wm, vm = np.linalg.eigh(b.Wminus)
    radius = max(np.max(np.abs(wp)), np.max(np.abs(wm)), np.max(np.abs(b.Tpm)))
    w = 0.5 * (wp + wm)
    for g in _groups(w, tol.grouping * radius):
        block = vm[:, g].T @ b.Tpm @ vp[:, g]
        a, _, bt = np.linalg.svd(block)
        vp[:, g] = vp[:, g] @ bt.T
        vm[:, g] = vm[:, g] @ a
    # a column flip in one factor only changes the sign of one t
    if np.linalg.det(vp) < 0:
        vp[:, 0] = -vp[:, 0]
    if np.linalg.det(vm) < 0:
        vm[:, 0] = -vm[:, 0]
    pair = RotationPair(vp, vm)
    rotated = so_action(r, pair)
    m = rotated.matrix
    off = np.max(np.abs(m - np.diag(np.diag(m))))
    if off > max(tol.eq, 1e-10) * max(1.0, radius) * 10:
        raise NotDiagonalisable(off)
    return DiagonalACT.from_act(rotated), pair


# --- residual S4 action on diagonal parameters -----------------------------

FLIP_PATTERNS = ((1, 1, 1), (-1, -1, 1), (-1, 1, -1), (1, -1, -1))
S4_ELEMENTS = tuple((p, f) for p in itertools.permutations(range(3)) for f in FLIP_PATTERNS)


def s4_residual_action(d: DiagonalACT, sigma) -> DiagonalACT:
    """Apply sigma = (permutation of (0, 1, 2), sign pattern with even flips)."""
    perm, flips = sigma
    perm = list(perm)
    flips = np.asarray(flips, dtype=float)
    if sorted(perm) != [0, 1, 2] or np.prod(flips) != 1 or not np.all(np.abs(flips) == 1):
        raise ValueError(f"not an element of the residual group: {sigma!r}")
    return DiagonalACT(d.w[perm], flips * d.t[perm], d.s)
