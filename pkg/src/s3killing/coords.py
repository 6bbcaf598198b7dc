"""Eigenvalue charts on S^3 and the classification of separable coordinates.

At a point x of the sphere the eigenvalues of the restricted tensor L are
the roots of

    q(lam) = sum_k x_k^2 / (L_k - lam),

plus the constant eigenvalues coming from repeated L_k or vanishing x_k.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AllEqual, DegenerateChartPoint, InvalidLine
from .ksvariety import StaeckelLine, is_exceptional_direction
from .tolerances import DEFAULT

WEIGHT_FLOOR = 1e-14


class SeparationType(enum.Enum):
    ELLIPTIC = "(0123)"
    OBLATE_LAME = "(01(23))"
    PROLATE_LAME = "(0(12)3)"
    CYLINDRICAL = "((01)(23))"
    LAME_SUBGROUP = "(0(123))"
    SPHERICAL = "(0(1(23)))"

    @property
    def bracket(self) -> str:
        return self.value

    @property
    def title(self) -> str:
        return _TITLES[self]


_TITLES = {
    SeparationType.ELLIPTIC: "elliptic",
    SeparationType.OBLATE_LAME: "oblate Lame rotational",
    SeparationType.PROLATE_LAME: "prolate Lame rotational",
    SeparationType.CYLINDRICAL: "cylindrical",
    SeparationType.LAME_SUBGROUP: "Lame subgroup reduction",
    SeparationType.SPHERICAL: "spherical",
}

NEEDS_LINE_DATA = "needs-line-data"


@dataclass(frozen=True)
class Spectrum:
    Lambda: tuple
    groups: tuple
    order: tuple = (0, 1, 2, 3)  # Lambda[k] is the caller's values[order[k]]

    @classmethod
    def of(cls, values, tol: float = DEFAULT.grouping) -> "Spectrum":
        raw = np.asarray(values, dtype=float).reshape(4)
        order = np.argsort(raw, kind="stable")
        lam = raw[order]
        spread = float(lam[-1] - lam[0])
        groups = [[0]]
        for k in range(1, 4):
            if lam[k] - lam[groups[-1][-1]] <= tol * spread:
                groups[-1].append(k)
            else:
                groups.append([k])
        return cls(tuple(float(v) for v in lam), tuple(tuple(g) for g in groups),
                   tuple(int(k) for k in order))

    @property
    def multiplicities(self) -> tuple:
        return tuple(len(g) for g in self.groups)

    @property
    def simple(self) -> bool:
        return len(self.groups) == 4


@dataclass(frozen=True)
class ChartEigenvalues:
    values: tuple
    constant: tuple
    boundary: bool

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def secular(lam: float, Lambda, weights) -> float:
    return float(sum(w / (L - lam) for L, w in zip(Lambda, weights)))


def _root_between(a: float, b: float, poles, weights) -> float:
    """The unique zero of the increasing function q on (a, b).

    Safeguarded Newton inside a shrinking bracket, finished by picking the
    float with the smallest |q| among the neighbours of the last iterate.
    """
    terms = list(zip(poles, weights))

    def q(lam):
        return sum(w / (p - lam) for p, w in terms)

    lo, hi = a, b
    x = 0.5 * (a + b)
    for _ in range(200):
        fx = q(x)
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        dq = sum(w / (p - x) ** 2 for p, w in terms)
        step = x - fx / dq
        nxt = step if lo < step < hi else 0.5 * (lo + hi)
        if nxt == x or not (lo < nxt < hi):
            break
        x = nxt
    best, fbest = x, abs(q(x))
    for cand in (math.nextafter(x, a), math.nextafter(x, b)):
        if a < cand < b:
            fc = abs(q(cand))
            if fc < fbest:
                best, fbest = cand, fc
    return best


def eigenvalues_at(spec: Spectrum, x) -> ChartEigenvalues:
    """x is given in the coordinates of the values passed to Spectrum.of."""
    x = np.asarray(x, dtype=float).reshape(4)[list(spec.order)]
    Lam = np.asarray(spec.Lambda)
    values, constant = [], []
    poles, weights = [], []
    boundary = False
    for g in spec.groups:
        weight = float(np.sum(x[list(g)] ** 2))
        lam_g = float(np.mean(Lam[list(g)]))
        extra = len(g) - 1
        if weight < WEIGHT_FLOOR:
            extra += 1
            boundary = True
        else:
            poles.append(lam_g)
            weights.append(weight)
        values += [lam_g] * extra
        constant += [True] * extra
    for a, b in zip(poles[:-1], poles[1:]):
        values.append(_root_between(a, b, poles, weights))
        constant.append(False)
    if spec.simple and np.any(x ** 2 < WEIGHT_FLOOR):
        boundary = True
    order = np.argsort(values, kind="stable")
    return ChartEigenvalues(tuple(float(values[i]) for i in order),
                            tuple(bool(constant[i]) for i in order), boundary)


def elliptic_coords(spec: Spectrum, x) -> tuple:
    if not spec.simple:
        raise DegenerateChartPoint("elliptic coordinates need four distinct parameters")
    x = np.asarray(x, dtype=float)
    if np.any(x ** 2 < WEIGHT_FLOOR):
        raise DegenerateChartPoint(f"point {x.tolist()} lies on a coordinate hyperplane")
    return eigenvalues_at(spec, x).values


def classify_spectrum(spec: Spectrum):
    pattern = spec.multiplicities
    if pattern == (4,):
        raise AllEqual("all parameters coincide: only the metric, no coordinates")
    table = {
        (1, 1, 1, 1): SeparationType.ELLIPTIC,
        (1, 1, 2): SeparationType.OBLATE_LAME,
        (2, 1, 1): SeparationType.OBLATE_LAME,
        (1, 2, 1): SeparationType.PROLATE_LAME,
        (2, 2): SeparationType.CYLINDRICAL,
    }
    return table.get(pattern, NEEDS_LINE_DATA)


def spectrum_from_kernel(n) -> Spectrum:
    """Trace-free parameters L0 = (n1+n2+n3)/2, La = (na - nb - nc)/2."""
    n1, n2, n3 = np.asarray(n, dtype=float)
    return Spectrum.of([(n1 + n2 + n3) / 2, (n1 - n2 - n3) / 2,
                        (n2 - n3 - n1) / 2, (n3 - n1 - n2) / 2])


def classify_s2_ricci(t) -> SeparationType:
    t = np.sort(np.asarray(t, dtype=float).reshape(3))
    spread = t[-1] - t[0]
    if spread == 0.0:
        raise InvalidLine("S^2 Ricci eigenvalues all equal: the line degenerates to a point")
    coincide = np.diff(t) <= DEFAULT.grouping * spread
    return SeparationType.SPHERICAL if coincide.any() else SeparationType.LAME_SUBGROUP


def classify_line(line: StaeckelLine, s2_ricci=None) -> SeparationType:
    n = np.asarray(line.kernel, dtype=float)
    if not line.degenerate and not is_exceptional_direction(n):
        result = classify_spectrum(spectrum_from_kernel(n))
        if result == NEEDS_LINE_DATA:
            raise InvalidLine("non-degenerate line with a triple spectrum")
        return result
    if s2_ricci is not None:
        return classify_s2_ricci(s2_ricci)
    # bring the face to the (1,1,1) face with a diagonal sign change of det +1
    signs = np.sign(n)
    if np.prod(signs) < 0:
        signs = -signs
    t = line.second.t.copy()
    t = np.array([signs[1] * signs[2] * t[0], signs[2] * signs[0] * t[1], signs[0] * signs[1] * t[2]])
    return classify_s2_ricci(t)


def s2_eigenvalues(t, y) -> ChartEigenvalues:
    """Eigenvalues of diag(t) restricted to the tangent plane of S^2 at y."""
    t = np.asarray(t, dtype=float).reshape(3)
    y = np.asarray(y, dtype=float).reshape(3)
    shift = float(t.mean())
    tt = t - shift
    T = np.diag(tt)
    adj = np.diag([tt[1] * tt[2], tt[2] * tt[0], tt[0] * tt[1]])
    b = float(y @ T @ y)
    c = float(y @ adj @ y)
    disc = max(b * b - 4.0 * c, 0.0)
    root = math.sqrt(disc)
    # numerically stable pair of roots of lam^2 + b lam + c
    if b >= 0:
        big = (-b - root) / 2.0
    else:
        big = (-b + root) / 2.0
    small = c / big if big != 0.0 else 0.0
    lam = sorted((big + shift, small + shift))
    spread = float(np.ptp(t))
    boundary = bool(np.any(y ** 2 < WEIGHT_FLOOR))
    close = np.abs(t[:, None] - t[None, :]) <= DEFAULT.grouping * spread
    repeated = t[close.sum(axis=1) > 1]
    const = tuple(bool(spread == 0.0 or np.any(np.abs(repeated - v) <= DEFAULT.grouping * spread))
                  for v in lam)
    return ChartEigenvalues(tuple(lam), const, boundary)


_STRATA = {
    SeparationType.ELLIPTIC: "interior",
    SeparationType.OBLATE_LAME: "edge",
    SeparationType.PROLATE_LAME: "edge",
    SeparationType.LAME_SUBGROUP: "edge",
    SeparationType.CYLINDRICAL: "vertex",
    SeparationType.SPHERICAL: "vertex",
}


def associahedron_label(kind: SeparationType) -> tuple[str, str]:
    """Bracket string and the stratum (interior, edge, vertex) of the pentagon."""
    return kind.bracket, _STRATA[kind]
