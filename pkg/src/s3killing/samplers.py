"""Seeded random generators for test corpora and the ``gen`` command."""
from __future__ import annotations

import numpy as np

from .decomposition import DiagonalACT, HodgeBlocks, RotationPair, blocks_to_act, so_action
from .ksvariety import KSMatrix


def solve_quadric_t3(w, t1, t2):
    """t3 >= 0 putting (w, t) on the determinant quadric, or None."""
    w = np.asarray(w, dtype=float)
    d1, d2, d3 = w[1] - w[2], w[2] - w[0], w[0] - w[1]
    if d3 == 0.0:
        return None
    sq = -(d1 * t1 * t1 + d2 * t2 * t2 + d1 * d2 * d3) / d3
    if sq < 0.0:
        return None
    return float(np.sqrt(sq))


def random_diagonal(rng, on_quadric: bool = False, scalar: float = 12.0) -> DiagonalACT:
    while True:
        w = rng.uniform(-1.0, 1.0, 3)
        w -= w.mean()
        t = rng.uniform(-1.0, 1.0, 3)
        s = rng.uniform(-scalar, scalar)
        if not on_quadric:
            return DiagonalACT(w, t, s)
        t3 = solve_quadric_t3(w, t[0], t[1])
        if t3 is not None:
            t[2] = t3 * rng.choice((-1.0, 1.0))
            return DiagonalACT(w, t, s)


def random_variety_point(rng) -> KSMatrix:
    d = random_diagonal(rng, on_quadric=True)
    w = d.w
    return KSMatrix([w[1] - w[2], w[2] - w[0], w[0] - w[1]], d.t)


def random_act(rng, on_quadric: bool = False, conjugate: bool = True):
    d = random_diagonal(rng, on_quadric)
    r = d.act()
    if conjugate:
        r = so_action(r, RotationPair.random(rng))
    return r


def random_general_act(rng):
    """A generic (typically non-integrable) curvature tensor."""
    a, b = rng.standard_normal((2, 3, 3))
    wp = a + a.T
    wp -= np.trace(wp) / 3 * np.eye(3)
    wm = b + b.T
    wm -= np.trace(wm) / 3 * np.eye(3)
    return blocks_to_act(HodgeBlocks(wp, wm, rng.standard_normal((3, 3)), rng.uniform(-12, 12)))


def random_sphere_point(rng, min_coord: float = 0.0) -> np.ndarray:
    while True:
        x = rng.standard_normal(4)
        x /= np.linalg.norm(x)
        if np.all(np.abs(x) > min_coord):
            return x
