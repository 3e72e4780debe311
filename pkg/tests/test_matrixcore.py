import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from semiconvexity import matrixcore as mc

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def matrices(n):
    return arrays(np.float64, (n, n), elements=entries)


def test_det_small_closed_forms(rng):
    A = rng.uniform(-5, 5, (500, 3, 3))
    assert np.allclose(mc.det(A), np.linalg.det(A), atol=1e-11)
    B = rng.uniform(-5, 5, (500, 2, 2))
    assert np.allclose(mc.det(B), np.linalg.det(B), atol=1e-12)
    C = rng.uniform(-1, 1, (20, 4, 4))
    assert np.allclose(mc.det(C), np.linalg.det(C))


def test_cofactor_identity(rng):
    for n in (2, 3, 4):
        A = rng.uniform(-3, 3, (100, n, n))
        lhs = np.swapaxes(mc.cofactor(A), -1, -2) @ A
        rhs = mc.det(A)[:, None, None] * np.eye(n)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_operator_norm_against_lapack(rng):
    for n in (2, 3, 4):
        A = rng.standard_normal((300, n, n))
        assert np.allclose(mc.operator_norm(A), np.linalg.norm(A, 2, axis=(-2, -1)), rtol=1e-13)


def test_jacobi_eigenvalues(rng):
    M = rng.standard_normal((50, 4, 4))
    S = M + np.swapaxes(M, -1, -2)
    ev = mc.jacobi_eigvalsh(S)
    ref = np.sort(np.linalg.eigvalsh(S), axis=-1)[:, ::-1]
    assert np.max(np.abs(ev - ref)) < 1e-12
    # single matrix path
    assert np.allclose(mc.jacobi_eigvalsh(S[0]), ref[0], atol=1e-12)


def test_signed_singular_values_examples():
    spec = mc.signed_singular_values(np.diag([2.0, -1.0]))
    assert np.allclose(spec.lam, [2.0, -1.0])
    assert np.allclose(spec.sigma, [2.0, -2.0])
    spec = mc.signed_singular_values(np.array([[0.0, 3.0], [-2.0, 0.0]]))
    assert np.allclose(spec.lam, [3.0, 2.0])


@settings(max_examples=200, deadline=None)
@given(matrices(3))
def test_signed_singular_values_properties(A):
    spec = mc.signed_singular_values(A)
    lam = spec.lam
    assert np.all(lam[:-1] >= 0)
    assert np.all(np.diff(np.abs(lam)) <= 1e-9 * max(1.0, abs(lam[0])))
    assert abs(spec.sigma[-1] - mc.det(A)) <= 1e-9 * max(1.0, abs(lam[0]) ** 3)
    ref = np.linalg.svd(A, compute_uv=False)
    assert np.allclose(np.abs(lam), ref, atol=1e-12 * max(1.0, ref[0]) ** 2)


@settings(max_examples=200, deadline=None)
@given(matrices(2))
def test_conformal_identities_2x2(A):
    c = mc.conformal_norms(A)
    nrm = mc.operator_norm(A)
    assert math.isclose(c.plus_norm + c.minus_norm, nrm, rel_tol=1e-12, abs_tol=1e-12)
    assert abs(c.plus_norm**2 - c.minus_norm**2 - mc.det(A)) <= 1e-11 * max(1.0, nrm**2)


def test_conformal_parts_norms_match_coordinates(rng):
    for n in (2, 3):
        A = rng.uniform(-3, 3, (200, n, n))
        plus, minus, coords = mc.conformal_parts(A)
        assert np.allclose(mc.operator_norm(plus), coords.plus_norm, rtol=1e-11, atol=1e-12)
        assert np.allclose(mc.operator_norm(minus), coords.minus_norm, rtol=1e-11, atol=1e-12)
        if n == 2:
            # only in the plane are the parts themselves (anti-)conformal
            assert np.all(mc.is_conformal(plus, "+", 1e-9))
            assert np.all(mc.is_conformal(minus, "-", 1e-9))


def test_is_conformal_and_qco(rng):
    Q = mc.random_rotation(3, rng)
    assert mc.is_conformal(2.5 * Q, "+", 1e-12)
    assert not mc.is_conformal(2.5 * Q, "-", 1e-12)
    assert mc.is_conformal(Q @ mc.id_bar(3), "-", 1e-12)
    A = np.diag([2.0, 1.0])
    assert mc.qco_membership(A, 2.0, "+")
    assert not mc.qco_membership(A, 1.5, "+")
    assert not mc.qco_membership(A, 2.0, "-")


def test_minors_vector_layout():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(mc.minors_vector(A), [1, 2, 3, 4, -2])
    B = np.diag([1.0, 2.0, 3.0])
    m = mc.minors_vector(B)
    assert len(m) == mc.minors_dim(3) == 19
    assert np.allclose(m[:9], B.ravel())
    assert np.allclose(m[9:18], np.diag([6.0, 3.0, 2.0]).ravel())
    assert m[-1] == 6.0


def test_random_rotation_is_special_orthogonal(rng):
    Q = mc.random_rotation(3, rng, 100)
    assert np.allclose(Q @ np.swapaxes(Q, -1, -2), np.eye(3), atol=1e-13)
    assert np.allclose(mc.det(Q), 1.0)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        mc.as_matrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        mc.as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))
