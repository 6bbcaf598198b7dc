"""Commuting Killing tensors: commutation tests, Staeckel systems, Benenti families."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .decomposition import DiagonalACT, ricci_decompose
from .errors import NotSpecial
from .ksvariety import (StaeckelLine, VERTICES, diagonal_from_ks, iota, nu,
                        projectively_equal, staeckel_line)
from .lambda2 import METRIC, PAIRS, AlgCurvTensor, adjugate4, as_sym4, hodge_conjugate, kulkarni_nomizu
from .tolerances import DEFAULT

# bivector-basis positions of the three edges {ij}, {jk}, {ki} of each triangle
_PAIR_POS = {frozenset(p): k for k, p in enumerate(PAIRS)}
TRIANGLES = tuple(
    tuple(_PAIR_POS[frozenset(e)] for e in ((i, j), (j, k), (k, i)))
    for i, j, k in itertools.combinations(range(4), 3)
)


def diagonal_commutator_dets(d1: DiagonalACT, d2: DiagonalACT) -> np.ndarray:
    a, b = d1.diagonal(), d2.diagonal()
    return np.array([np.linalg.det(np.column_stack([np.ones(3), a[list(tri)], b[list(tri)]]))
                     for tri in TRIANGLES])


def commute_diagonal(d1: DiagonalACT, d2: DiagonalACT, tol: float = DEFAULT.eq) -> bool:
    scale = float(np.ptp(d1.diagonal()) * np.ptp(d2.diagonal()))
    if scale == 0.0:
        return True
    return bool(np.max(np.abs(diagonal_commutator_dets(d1, d2))) < tol * scale)


_PERMS4 = list(itertools.permutations(range(4)))


def commutator_tensor(r1: AlgCurvTensor, r2: AlgCurvTensor) -> np.ndarray:
    """R1_{i b1 a2 b2} R2_{i d1 c2 d2}, antisymmetrized in (a2, c2) and
    symmetrized in (b1, b2, d1, d2); axes ordered (a2, c2, b1, b2, d1, d2)."""
    base = np.einsum("ibpq,idrs->prbqds", r1.components(), r2.components())
    anti = base - base.transpose(1, 0, 2, 3, 4, 5)
    out = np.zeros_like(anti)
    for p in _PERMS4:
        out += anti.transpose(0, 1, *(2 + k for k in p))
    return out


def commute_general(r1: AlgCurvTensor, r2: AlgCurvTensor) -> float:
    """Scale-free residual of the algebraic commutator condition."""
    a, b = r1.trace_free(), r2.trace_free()
    na, nb = a.norm(), b.norm()
    if na <= 1e-14 * max(1.0, r1.norm()) or nb <= 1e-14 * max(1.0, r2.norm()):
        return 0.0
    return float(np.max(np.abs(commutator_tensor(a, b)))) / (na * nb)


# --- Staeckel systems ---------------------------------------------------------------

@dataclass(frozen=True)
class StaeckelSystem:
    generators: tuple
    line: StaeckelLine

    def acts(self) -> list[AlgCurvTensor]:
        return [g.act() for g in self.generators]

    def smallest_singular_value(self) -> float:
        mats = np.array([a.matrix.ravel() / np.linalg.norm(a.matrix) for a in self.acts()])
        return float(np.linalg.svd(mats, compute_uv=False)[-1])


def staeckel_system(m, s_default: float = 0.0) -> StaeckelSystem:
    line = staeckel_line(m)
    gens = (DiagonalACT([0, 0, 0], [0, 0, 0], 12.0),
            diagonal_from_ks(line.base, s_default),
            diagonal_from_ks(line.second, s_default))
    return StaeckelSystem(gens, line)


# --- special Killing tensors ----------------------------------------------------------

def special_killing(h) -> AlgCurvTensor:
    return kulkarni_nomizu(as_sym4(h), METRIC)


def l_hat_of(r: AlgCurvTensor, tol: float = 1e-10) -> np.ndarray:
    """Recover the trace-adjusted symmetric tensor h - (tr h / 2) g from h wedge g."""
    parts = ricci_decompose(r)
    weyl = parts.W.norm()
    if weyl > tol * max(1.0, r.norm()):
        raise NotSpecial(weyl)
    # Ric(h wedge g) = 2h + (tr h) g and s = 6 tr h
    tr_h = parts.s / 6.0
    h = 0.5 * (parts.T + parts.s / 4.0 * METRIC - tr_h * METRIC)
    return h - tr_h / 2.0 * METRIC


# --- Benenti families -----------------------------------------------------------------

@dataclass(frozen=True)
class BenentiFamily:
    """R(lambda) = R2 lambda^2 + R1 lambda + R0 = *((h - lambda g) wedge (h - lambda g))*."""

    h: np.ndarray
    R0: AlgCurvTensor
    R1: AlgCurvTensor
    R2: AlgCurvTensor

    @property
    def trace_shift(self) -> float:
        return float(np.trace(self.h)) / 4.0

    def l_hat(self) -> np.ndarray:
        return self.h - self.trace_shift * METRIC


def benenti_family(h) -> BenentiFamily:
    h = as_sym4(h)
    return BenentiFamily(h=h,
                         R0=hodge_conjugate(kulkarni_nomizu(h, h)),
                         R1=-2.0 * hodge_conjugate(kulkarni_nomizu(h, METRIC)),
                         R2=kulkarni_nomizu(METRIC, METRIC))


def benenti_eval(f: BenentiFamily, lam: float) -> AlgCurvTensor:
    return f.R2 * (lam * lam) + f.R1 * lam + f.R0


def benenti_adjugate(h, lam: float) -> AlgCurvTensor:
    """Quotient form Adj(h - lam g) wedge Adj(h - lam g) / det(h - lam g)."""
    a = as_sym4(h) - lam * METRIC
    adj = adjugate4(a)
    return kulkarni_nomizu(adj, adj) * (1.0 / np.linalg.det(a))


def kernel_vector(f: BenentiFamily) -> np.ndarray:
    """n_a = L0 + La from the eigenvalues of the trace-free shift, in its eigenbasis."""
    lam = np.linalg.eigvalsh(f.l_hat())
    return lam[0] + lam[1:]


def spans_staeckel(f: BenentiFamily, tol: float = DEFAULT.grouping) -> bool:
    lam = np.linalg.eigvalsh(f.h)
    spread = max(float(np.ptp(lam)), 1e-300)
    gaps = np.diff(lam) <= tol * spread
    triple = bool((gaps[0] and gaps[1]) or (gaps[1] and gaps[2])) or np.ptp(lam) == 0.0
    return not triple


def iota_nu_independent(f: BenentiFamily, tol: float = DEFAULT.rank) -> bool:
    n = kernel_vector(f)
    if not np.any(np.abs(n) > 0):
        return False
    return not projectively_equal(iota(n).vector(), nu(n).vector(), tol)


# --- extensions from lower-dimensional spheres --------------------------------------

def extend_from_s2(t_s2) -> DiagonalACT:
    """Diagonal tensor vanishing on every index 0 whose KS-matrix is sum t_a V+a."""
    t = np.asarray(t_s2, dtype=float).reshape(3)
    return DiagonalACT(-(t - t.mean()), t, -4.0 * t.sum())


def extend_from_s1s1(a: float, b: float) -> DiagonalACT:
    """Direct sum on span(e0, e1) + span(e2, e3) with KS-matrix a V-1 + b V+1."""
    ks = VERTICES[1, -1] * a + VERTICES[1, 1] * b
    d = diagonal_from_ks(ks, 0.0)
    # pick s so that every mixed component R_0a0a, R_bcbc with a != 1 vanishes
    return DiagonalACT(d.w, d.t, -12.0 * d.w[1])
