import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s3killing.errors import NotOnVariety, RankOne, SingularPoint
from s3killing.integrability import ks_determinant
from s3killing.ksvariety import (S4_MATRICES, VERTICES, KSMatrix, blowup_limit, canonical_form,
                                 center, det_gradient, diagonal_from_ks, iota, is_singular,
                                 isokernel_space, kernel_map, ks_matrix, nu, on_variety, orbit,
                                 projective_normalize, projectively_equal, rank, s4_act,
                                 singular_points, stabilizer_size, staeckel_line)
from s3killing.samplers import random_diagonal, random_sphere_point, random_variety_point

EXCEPTIONAL = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)]


def null_space(a, tol=1e-9):
    u, s, vt = np.linalg.svd(a)
    return vt[np.sum(s > tol * s[0]):]


def test_matrix_layout():
    m = KSMatrix([1, 2, -3], [4, 5, 6])
    assert np.allclose(m.matrix, [[1, -6, 5], [6, 2, -4], [-5, 4, -3]])
    assert KSMatrix.from_matrix(m.matrix).vector().tolist() == m.vector().tolist()
    assert m.det() == pytest.approx(np.linalg.det(m.matrix))
    with pytest.raises(ValueError):
        KSMatrix.from_matrix(np.ones((3, 3)))


def test_round_trip_with_diagonal(rng):
    for _ in range(20):
        d = random_diagonal(rng)
        back = diagonal_from_ks(ks_matrix(d), d.s)
        assert back.allclose(d)
        assert ks_matrix(d).det() == pytest.approx(ks_determinant(d), abs=1e-14)


def test_singular_points_have_zero_gradient():
    pts = singular_points()
    assert len(pts) == 10
    for p in pts:
        assert on_variety(p)
        assert np.linalg.norm(det_gradient(p)) < 1e-12
        assert is_singular(p)


def test_vertex_and_centre_ranks():
    for v in VERTICES.values():
        assert rank(v) == 1
    # centres are singular but keep a one-dimensional kernel
    for i in range(4):
        assert rank(center(i)) == 2
    assert np.allclose(center(0).vector(), [0, 0, 0, 1, 1, 1])
    assert np.allclose(center(1).vector(), [0, 0, 0, -1, 1, 1])


def test_regular_points_have_nonzero_gradient(rng):
    for _ in range(200):
        m = random_variety_point(rng)
        assert on_variety(m)
        assert not is_singular(m)


@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
@settings(max_examples=200, deadline=None)
def test_rank_one_iff_adjugate_vanishes(v):
    m = KSMatrix(v[:3], v[3:])
    a = m.matrix
    scale = max(1.0, np.abs(a).max())
    minors = [[np.delete(np.delete(a, i, 0), j, 1) for i in range(3)] for j in range(3)]
    adj = np.array([[m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] for m in row] for row in minors])
    if rank(m) <= 1:
        assert np.abs(adj).max() < 1e-8 * scale ** 2


def test_kernel_map_examples():
    assert np.allclose(kernel_map(nu([1, 2, 3])), [1 / 3, 2 / 3, 1])
    assert np.allclose(kernel_map(iota([0, 0, 2])), [0, 0, 1])
    with pytest.raises(RankOne):
        kernel_map(VERTICES[1, 1])
    with pytest.raises(NotOnVariety):
        kernel_map(KSMatrix([1, -1, 0], [1, 0, 0]))


def test_kernel_map_against_null_space(rng):
    for _ in range(200):
        m = random_variety_point(rng)
        ns = null_space(m.matrix)
        assert ns.shape[0] == 1
        assert projectively_equal(kernel_map(m), ns[0])


def test_iota_and_nu_invariants(rng):
    for _ in range(50):
        n = rng.standard_normal(3)
        for m in (iota(n), nu(n)):
            assert np.allclose(m.matrix @ n, 0, atol=1e-12)
            assert abs(m.det()) < 1e-12
            assert abs(np.trace(m.matrix)) < 1e-12


def slice_basis():
    deltas = [[1, -1, 0], [0, 1, -1]]
    return ([KSMatrix(d, [0, 0, 0]) for d in deltas]
            + [KSMatrix([0, 0, 0], e) for e in np.eye(3)])


def isokernel_reference(n):
    """Null space of the linear map M -> M n on the trace-free slice, as 6-vectors."""
    basis = slice_basis()
    lin = np.column_stack([b.matrix @ n for b in basis])
    coeffs = null_space(lin)
    return np.array([sum(c * b.vector() for c, b in zip(row, basis)) for row in coeffs])


def same_span(a, b):
    a, b = np.atleast_2d(a), np.atleast_2d(b)
    ra = np.linalg.matrix_rank(a, 1e-9)
    return ra == np.linalg.matrix_rank(b, 1e-9) == np.linalg.matrix_rank(np.vstack([a, b]), 1e-9)


def test_isokernel_space_generic(rng):
    for _ in range(30):
        n = rng.standard_normal(3)
        basis = isokernel_space(n)
        assert len(basis) == 2
        assert same_span(np.vstack([b.vector() for b in basis]), isokernel_reference(n))


@pytest.mark.parametrize("n", EXCEPTIONAL)
def test_isokernel_space_exceptional(n):
    basis = isokernel_space(n)
    assert len(basis) == 3
    stack = np.vstack([b.vector() for b in basis])
    assert np.linalg.matrix_rank(stack, 1e-9) == 3
    assert same_span(stack, isokernel_reference(np.asarray(n, float)))


def test_staeckel_line_is_contained_in_the_variety(rng):
    for _ in range(500):
        m = random_variety_point(rng)
        line = staeckel_line(m)
        assert line.contains(m)
        for a, b in rng.standard_normal((3, 2)):
            p = line.base * a + line.second * b
            assert abs(p.det()) < 1e-10 * max(1.0, np.abs(p.vector()).max()) ** 3
            if rank(p) == 2:
                assert projectively_equal(kernel_map(p), line.kernel)


def test_staeckel_line_degenerate_case():
    # kernel (1, 1, 1): a face direction of the octahedron
    m = iota([1, 1, 1]) + isokernel_space([1, 1, 1])[0] * 0.5
    line = staeckel_line(m)
    assert line.degenerate
    assert line.contains(m)
    assert projectively_equal(line.kernel, [1, 1, 1])


def test_staeckel_line_rejects_singular_points():
    for p in singular_points():
        with pytest.raises(SingularPoint):
            staeckel_line(p)


@pytest.mark.parametrize("n0", EXCEPTIONAL + [(-2, 2, 2)])
def test_blowup_limit_matches_numeric_limit(n0):
    n0 = np.asarray(n0, float)
    d = np.array([0.3, -0.7, 0.2])
    limit = blowup_limit(n0, d)
    for eps in (1e-5, 1e-6):
        n = n0 + eps * d
        assert limit.contains(iota(n), 1e-4)
        assert limit.contains(nu(n), 1e-4)


def test_octahedral_group():
    assert len(S4_MATRICES) == 24
    for p in S4_MATRICES:
        assert np.isclose(np.linalg.det(p), 1.0)
    keys = {tuple(p.ravel()) for p in S4_MATRICES}
    assert len(keys) == 24
    prods = {tuple((a @ b).ravel()) for a in S4_MATRICES for b in S4_MATRICES}
    assert prods == keys


def test_action_preserves_determinant(rng):
    for _ in range(50):
        m = KSMatrix(rng.standard_normal(3), rng.standard_normal(3))
        for p in S4_MATRICES:
            assert s4_act(m, p).det() == pytest.approx(m.det(), abs=1e-12)


def test_orbit_sizes():
    assert len(orbit(VERTICES[1, 1])) == 6
    assert len(orbit(center(0))) == 4
    assert stabilizer_size(VERTICES[1, 1]) == 4
    assert stabilizer_size(center(0)) == 6
    vert = {tuple(projective_normalize(v.vector())) for v in VERTICES.values()}
    assert {tuple(v) for v in orbit(VERTICES[2, -1])} == vert


def test_canonical_form_is_orbit_invariant(rng):
    for _ in range(30):
        m = random_variety_point(rng)
        c = canonical_form(m)
        for k in rng.choice(24, 5, replace=False):
            assert np.allclose(canonical_form(s4_act(m, int(k))).vector(), c.vector(), atol=1e-8)


def test_projective_helpers():
    assert np.allclose(projective_normalize([0, -2, 1]), [0, 1, -0.5])
    assert projectively_equal([1, 2, 3], [-2, -4, -6])
    assert not projectively_equal([1, 2, 3], [1, 2, 4])
    with pytest.raises(ValueError):
        projective_normalize([0, 0, 0])


def test_sphere_points_are_unit(rng):
    for _ in range(10):
        assert np.linalg.norm(random_sphere_point(rng)) == pytest.approx(1.0)
