import itertools

import numpy as np
import pytest

from s3killing.decomposition import DiagonalACT, HodgeBlocks, RotationPair, blocks_to_act, so_action
from s3killing.integrability import (Method, aic1_residual, aic2_raw, aic2_reduced, aic2_residual,
                                     aic2_tensor, diagonal_is_integrable, invariants,
                                     is_integrable, ks_determinant, normalized_invariants)
from s3killing.lambda2 import kulkarni_nomizu, metric_act
from s3killing.samplers import random_act, random_diagonal, random_general_act
from s3killing.tolerances import ToleranceConfig

# max-abs of the unnormalized second-condition tensor of a diagonal tensor
# divided by |det KS|; measured once on the family below and frozen
AIC2_PER_DETERMINANT = 16.0


def blocks(wp, wm, tpm=None, s=0.0):
    tpm = np.zeros((3, 3)) if tpm is None else np.asarray(tpm, float)
    return blocks_to_act(HodgeBlocks(np.diag(np.asarray(wp, float)), np.diag(np.asarray(wm, float)),
                                     tpm, s))


def levi_civita():
    eps = np.zeros((4, 4, 4, 4))
    for p in itertools.permutations(range(4)):
        eps[p] = np.linalg.det(np.eye(4)[list(p)])
    return eps


def test_aic1_examples():
    assert aic1_residual(metric_act()) == 0.0
    assert aic1_residual(DiagonalACT([0.4, 0.1, -0.5], [1.0, -2.0, 0.3], 7.0).act()) < 1e-12
    assert aic1_residual(blocks([1, 0, -1], [2, -1, -1])) > 0.1


def test_aic1_detects_misalignment():
    assert aic1_residual(blocks([1, 0, -1], [0, 1, -1], np.eye(3))) > 0.1


def test_aic2_examples():
    assert aic2_residual(metric_act()) == 0.0
    d = DiagonalACT([1, 0, -1], [0, 0, 0], 0)
    assert ks_determinant(d) == -2.0
    assert aic2_raw(d.act()) == pytest.approx(AIC2_PER_DETERMINANT * 2.0, rel=1e-12)
    assert aic2_residual(DiagonalACT([1, 0, -1], [1, 0, 1], 0).act()) < 1e-14


def test_aic2_constant_along_a_family(rng):
    for tau in np.linspace(-2, 2, 9):
        d = DiagonalACT([1, 0, -1], [tau, 0.3, 0.0], 0)
        det = abs(ks_determinant(d))
        raw = aic2_raw(d.act())
        assert raw == pytest.approx(AIC2_PER_DETERMINANT * det, rel=1e-9, abs=1e-12)
    for _ in range(20):
        d = random_diagonal(rng)
        assert aic2_raw(d.act()) == pytest.approx(AIC2_PER_DETERMINANT * abs(ks_determinant(d)),
                                                  rel=1e-8)


def test_aic2_reduction_matches_full_tensor(rng):
    eps = levi_civita()
    for _ in range(3):
        r = random_general_act(rng)
        full = aic2_tensor(r)
        red = aic2_reduced(r)
        assert np.allclose(full, np.einsum("abcd,pqrs->abcdpqrs", red, eps),
                           atol=1e-10 * np.abs(full).max())


def test_aic2_detects_mirrored_weyl():
    # aligned with equal squared traces, but tr W+^3 = -tr W-^3 != 0
    r = blocks([2, -1, -1], [-2, 1, 1])
    assert aic1_residual(r) < 1e-12
    assert aic2_residual(r) > 0.1
    assert not is_integrable(r, method=Method.BRUTE_FORCE).verdict


def test_opposite_spectra_fail_second_condition():
    r = blocks([1, 0, -1], [-1, 0, 1])
    assert aic2_residual(r) > 0.1
    for m in Method:
        assert not is_integrable(r, method=m).verdict


def test_invariants_examples():
    inv = invariants(metric_act())
    assert inv == {"c1": 0.0, "c2": 0.0, "c3": 0.0, "c4": 0.0}
    good = normalized_invariants(DiagonalACT([1, 0, -1], [1, 0, 1], 0).act())
    assert all(v < 1e-12 for v in good.values())
    bad = invariants(DiagonalACT([1, 0, -1], [0, 0, 0], 0).act())
    assert abs(bad["c1"]) < 1e-14 and abs(bad["c2"]) < 1e-14 and abs(bad["c3"]) < 1e-14
    assert bad["c4"] > 0.1


def test_invariants_catch_misaligned():
    inv = normalized_invariants(blocks([1, 0, -1], [0, 1, -1], np.eye(3)))
    assert inv["c1"] > 1e-3


def test_diagonal_determinant_examples(rng):
    assert not diagonal_is_integrable(DiagonalACT([1, 0, -1], [0, 0, 0]))
    assert diagonal_is_integrable(DiagonalACT([1, 0, -1], [1, 0, 1]))
    for _ in range(10):
        assert diagonal_is_integrable(DiagonalACT([0, 0, 0], rng.standard_normal(3), 3.0))


def test_determinant_matches_vandermonde(rng):
    for _ in range(50):
        d = random_diagonal(rng)
        w, t = d.w, d.t
        vdm = np.linalg.det(np.column_stack([np.ones(3), w, w * w - t * t]))
        assert ks_determinant(d) == pytest.approx(vdm, abs=1e-12)
        quad = ((w[0] - w[1]) * t[2] ** 2 + (w[1] - w[2]) * t[0] ** 2 + (w[2] - w[0]) * t[1] ** 2
                + (w[0] - w[1]) * (w[1] - w[2]) * (w[2] - w[0]))
        assert ks_determinant(d) == pytest.approx(quad, abs=1e-12)


def test_scalar_part_never_matters(rng):
    for _ in range(50):
        r = random_act(rng, on_quadric=bool(rng.integers(2)))
        shifted = r + metric_act() * rng.uniform(-50, 50)
        a, b = is_integrable(r), is_integrable(shifted)
        assert a.verdict == b.verdict
        assert abs(a.aic2_residual - b.aic2_residual) < 1e-9


def test_methods_agree_on_conjugated_integrable(rng):
    d = DiagonalACT([1, 0, -1], [1, 0, 1], 5)
    r = so_action(d.act(), RotationPair.random(rng))
    for m in Method:
        rep = is_integrable(r, method=m)
        assert rep.verdict, m
    rep = is_integrable(r)
    assert rep.ks_determinant == pytest.approx(0.0, abs=1e-12)


def test_methods_agree_on_random_tensors(rng):
    for k in range(60):
        r = random_act(rng, on_quadric=k % 2 == 0) if k < 40 else random_general_act(rng)
        verdicts = {is_integrable(r, method=m).verdict for m in Method}
        assert len(verdicts) == 1


def test_products_of_a_symmetric_tensor_are_integrable(rng):
    for _ in range(20):
        a = rng.standard_normal((4, 4))
        h = a + a.T
        rep = is_integrable(kulkarni_nomizu(h, h))
        assert rep.verdict
        assert rep.aic2_residual < 1e-10


def test_tolerance_is_threaded():
    d = DiagonalACT([1, 0, -1], [1, 0, 1.001], 0).act()
    assert not is_integrable(d).verdict
    assert is_integrable(d, ToleranceConfig(eq=1e-2)).verdict
