"""KS-matrices: 3x3 matrices whose symmetric part is diagonal and trace free.

A KS-matrix [[D1, -t3, t2], [t3, D2, -t1], [-t2, t1, D3]] encodes the
Weyl/Ricci data of a diagonal curvature tensor up to its scalar part; the
tensor is integrable exactly when the matrix is singular.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .decomposition import DiagonalACT
from .errors import NotOnVariety, RankOne, SingularPoint
from .lambda2 import adjugate3
from .tolerances import DEFAULT


class KSMatrix:
    __slots__ = ("Delta", "t")

    def __init__(self, Delta, t):
        Delta = np.array(Delta, dtype=float).reshape(3)
        self.Delta = Delta - Delta.mean()
        self.t = np.array(t, dtype=float).reshape(3)
        self.Delta.flags.writeable = False
        self.t.flags.writeable = False

    @classmethod
    def from_matrix(cls, m, tol: float = 1e-12) -> "KSMatrix":
        m = np.asarray(m, dtype=float)
        sym = 0.5 * (m + m.T)
        off = np.max(np.abs(sym - np.diag(np.diag(sym))))
        scale = max(1.0, np.max(np.abs(m)))
        if off > tol * scale or abs(np.trace(m)) > tol * scale:
            raise ValueError("symmetric part must be diagonal and trace free")
        t = 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
        return cls(np.diag(m), t)

    @property
    def matrix(self) -> np.ndarray:
        d, t = self.Delta, self.t
        return np.array([[d[0], -t[2], t[1]],
                         [t[2], d[1], -t[0]],
                         [-t[1], t[0], d[2]]])

    def vector(self) -> np.ndarray:
        """Coordinates (D1, D2, D3, t1, t2, t3)."""
        return np.concatenate([self.Delta, self.t])

    def det(self) -> float:
        d, t = self.Delta, self.t
        return float(np.prod(d) + np.dot(d, t * t))

    def __add__(self, other):
        return KSMatrix(self.Delta + other.Delta, self.t + other.t)

    def __sub__(self, other):
        return KSMatrix(self.Delta - other.Delta, self.t - other.t)

    def __mul__(self, c):
        return KSMatrix(float(c) * self.Delta, float(c) * self.t)

    __rmul__ = __mul__

    def __neg__(self):
        return KSMatrix(-self.Delta, -self.t)

    def __repr__(self):
        return f"KSMatrix(Delta={self.Delta.tolist()}, t={self.t.tolist()})"


def ks_matrix(d: DiagonalACT) -> KSMatrix:
    w = d.w
    return KSMatrix([w[1] - w[2], w[2] - w[0], w[0] - w[1]], d.t)


def diagonal_from_ks(m: KSMatrix, s: float = 0.0) -> DiagonalACT:
    D = m.Delta
    return DiagonalACT([(D[2] - D[1]) / 3.0, (D[0] - D[2]) / 3.0, (D[1] - D[0]) / 3.0], m.t, s)


# --- projective helpers --------------------------------------------------------

def projective_normalize(v, tol: float = 1e-12) -> np.ndarray:
    """Scale so the max-abs entry is 1 and the first nonzero entry is positive."""
    v = np.array(v, dtype=float)
    peak = np.max(np.abs(v))
    if peak == 0.0:
        raise ValueError("zero vector has no projective class")
    v = v / peak
    for x in v:
        if abs(x) > tol:
            if x < 0:
                v = -v
            break
    v[np.abs(v) < tol] = 0.0
    return v


def projectively_equal(a, b, tol: float = 1e-9) -> bool:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    sv = np.linalg.svd(np.vstack([a, b]), compute_uv=False)
    return sv[1] <= tol * sv[0]


def _as_ks(m) -> KSMatrix:
    return m if isinstance(m, KSMatrix) else KSMatrix.from_matrix(m)


# --- embeddings of the kernel plane ------------------------------------------

def iota(n) -> KSMatrix:
    n = np.asarray(n, dtype=float)
    return KSMatrix([0.0, 0.0, 0.0], n)


def nu(n) -> KSMatrix:
    n1, n2, n3 = np.asarray(n, dtype=float)
    return KSMatrix([n2 * n2 - n3 * n3, n3 * n3 - n1 * n1, n1 * n1 - n2 * n2],
                    [n2 * n3, n3 * n1, n1 * n2])


def is_exceptional_direction(n, tol: float = DEFAULT.rank) -> bool:
    """True when |n1| = |n2| = |n3|, where iota(n) and nu(n) coincide."""
    a = np.abs(np.asarray(n, dtype=float))
    return float(np.ptp(a)) <= tol * float(np.max(a))


# --- singular locus -------------------------------------------------------------

def _V(alpha: int, sign: int) -> KSMatrix:
    Delta = np.zeros(3)
    beta, gamma = (alpha + 1) % 3, (alpha + 2) % 3
    Delta[beta], Delta[gamma] = 1.0, -1.0
    t = np.zeros(3)
    t[alpha] = float(sign)
    return KSMatrix(Delta, t)


VERTICES = {(a + 1, sgn): _V(a, sgn) for a in range(3) for sgn in (1, -1)}


def center(index: int) -> KSMatrix:
    """C0 = V+1 + V+2 + V+3 and Ca = V-a + V+b + V+c."""
    if index == 0:
        return VERTICES[1, 1] + VERTICES[2, 1] + VERTICES[3, 1]
    b, c = index % 3 + 1, (index + 1) % 3 + 1
    return VERTICES[index, -1] + VERTICES[b, 1] + VERTICES[c, 1]


def singular_points() -> list[KSMatrix]:
    pts = [VERTICES[a, sgn] for a in (1, 2, 3) for sgn in (1, -1)]
    return pts + [center(i) for i in range(4)]


_SLICE_BASIS = [KSMatrix([1, -1, 0], [0, 0, 0]) * (1 / np.sqrt(2)),
                KSMatrix([1, 1, -2], [0, 0, 0]) * (1 / np.sqrt(6)),
                KSMatrix([0, 0, 0], [1, 0, 0]) * (1 / np.sqrt(2)),
                KSMatrix([0, 0, 0], [0, 1, 0]) * (1 / np.sqrt(2)),
                KSMatrix([0, 0, 0], [0, 0, 1]) * (1 / np.sqrt(2))]


def det_gradient(m) -> np.ndarray:
    """Gradient of det restricted to the 5-dim slice, for unit-norm M."""
    m = _as_ks(m)
    a = m.matrix
    a = a / np.linalg.norm(a)
    adj = adjugate3(a)
    return np.array([np.trace(b.matrix @ adj) for b in _SLICE_BASIS])


def is_singular(m, tol: float = 1e-9) -> bool:
    m = _as_ks(m)
    if not on_variety(m):
        return False
    return float(np.linalg.norm(det_gradient(m))) < tol


def on_variety(m, tol: float = DEFAULT.rank) -> bool:
    sv = np.linalg.svd(_as_ks(m).matrix, compute_uv=False)
    return sv[0] == 0.0 or sv[2] <= tol * sv[0]


def rank(m, tol: float = DEFAULT.rank) -> int:
    sv = np.linalg.svd(_as_ks(m).matrix, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def kernel_map(m, tol: float = DEFAULT.rank) -> np.ndarray:
    m = _as_ks(m)
    r = rank(m, tol)
    if r == 3:
        raise NotOnVariety(f"matrix is invertible: {m!r}")
    if r <= 1:
        raise RankOne(f"kernel map undefined at rank {r}: {m!r}")
    adj = adjugate3(m.matrix)
    col = adj[:, int(np.argmax(np.linalg.norm(adj, axis=0)))]
    return projective_normalize(col)


def isokernel_space(n, tol: float = DEFAULT.rank) -> list[KSMatrix]:
    """Basis of all KS-matrices annihilating n."""
    n = np.asarray(n, dtype=float)
    if not np.any(n):
        raise ValueError("n must be nonzero")
    if is_exceptional_direction(n, tol):
        n1, n2, n3 = n
        basis = []
        for e in np.eye(3):
            t1, t2, t3 = e
            basis.append(KSMatrix([n2 / n1 * t3 - n3 / n1 * t2,
                                   n3 / n2 * t1 - n1 / n2 * t3,
                                   n1 / n3 * t2 - n2 / n3 * t1], e))
        return basis
    return [iota(n), nu(n)]


# --- Staeckel lines -----------------------------------------------------------------

@dataclass(frozen=True)
class StaeckelLine:
    base: KSMatrix
    second: KSMatrix
    kernel: np.ndarray
    degenerate: bool

    def contains(self, m, tol: float = 1e-9) -> bool:
        stack = np.vstack([self.base.vector(), self.second.vector(), _as_ks(m).vector()])
        sv = np.linalg.svd(stack, compute_uv=False)
        return sv[2] <= tol * sv[0]


def staeckel_line(m, tol: float = DEFAULT.rank) -> StaeckelLine:
    m = _as_ks(m)
    if is_singular(m):
        raise SingularPoint(f"{m!r} is one of the ten singular points")
    n = kernel_map(m, tol)
    a, b = iota(n), nu(n)
    if not projectively_equal(a.vector(), b.vector(), tol):
        return StaeckelLine(a, b, n, False)
    # kernel in a face of the octahedron: the line is the pencil through the
    # face centre iota(n) and M itself, completed orthogonally
    av = a.vector()
    mv = m.vector()
    second = mv - np.dot(mv, av) / np.dot(av, av) * av
    if np.linalg.norm(second) <= tol * np.linalg.norm(mv):
        raise SingularPoint("matrix coincides with a face centre")
    second = second / np.max(np.abs(second))
    return StaeckelLine(a, KSMatrix(second[:3], second[3:]), n, True)


def blowup_limit(n0, direction) -> StaeckelLine:
    """Limit of the lines through iota(n) and nu(n) as n -> n0 along direction.

    Only meaningful at the four exceptional directions; elsewhere the limit
    is just the ordinary line of n0.
    """
    n0 = np.asarray(n0, dtype=float)
    ndot = np.asarray(direction, dtype=float)
    n1, n2, n3 = n0
    d1, d2, d3 = ndot
    dnu = KSMatrix([2 * (n2 * d2 - n3 * d3), 2 * (n3 * d3 - n1 * d1), 2 * (n1 * d1 - n2 * d2)],
                   [n2 * d3 + d2 * n3, n3 * d1 + d3 * n1, n1 * d2 + d1 * n2])
    # at an exceptional direction nu(n0) = ratio * iota(n0)
    ratio = n1 * n2 * n3 / float(np.max(np.abs(n0))) ** 2
    second = dnu - iota(ndot) * ratio
    return StaeckelLine(iota(n0), second, projective_normalize(n0), True)


# --- octahedral action ----------------------------------------------------------------

def _octahedral_group():
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            p = np.zeros((3, 3))
            for i, j in enumerate(perm):
                p[i, j] = signs[i]
            if np.linalg.det(p) > 0:
                out.append(((perm, signs), p))
    return tuple(out)


OCTAHEDRAL = _octahedral_group()
S4_LABELS = tuple(label for label, _ in OCTAHEDRAL)
S4_MATRICES = tuple(p for _, p in OCTAHEDRAL)


def s4_act(m, sigma) -> KSMatrix:
    """sigma may be a 3x3 signed permutation matrix or an index into S4_MATRICES."""
    p = S4_MATRICES[sigma] if isinstance(sigma, (int, np.integer)) else np.asarray(sigma, float)
    return KSMatrix.from_matrix(p.T @ _as_ks(m).matrix @ p)


def _key(v: np.ndarray):
    return tuple(np.round(v, 9) + 0.0)


def orbit(m) -> list[np.ndarray]:
    """Distinct projective classes in the S4-orbit, as normalized 6-vectors."""
    seen = {}
    for p in S4_MATRICES:
        v = projective_normalize(s4_act(m, p).vector())
        seen.setdefault(_key(v), v)
    return [seen[k] for k in sorted(seen)]


def canonical_form(m) -> KSMatrix:
    v = orbit(m)[0]
    return KSMatrix(v[:3], v[3:])


def stabilizer_size(m) -> int:
    ref = projective_normalize(_as_ks(m).vector())
    return sum(1 for p in S4_MATRICES
               if np.allclose(projective_normalize(s4_act(m, p).vector()), ref, atol=1e-9))
