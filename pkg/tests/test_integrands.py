import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiconvexity import integrands as itg
from semiconvexity import matrixcore as mc
from semiconvexity.errors import DescriptorError, DomainError, ParameterError, SingularHessianWarning


def B(p, n):
    return itg.burkholder(p, n)


@pytest.mark.parametrize("n,p", [(2, 1), (2, 1.5), (2, 2), (3, 1.5), (3, 2), (3, 3), (2, 4), (3, 5)])
def test_burkholder_at_identity(n, p):
    # n/p on the p <= n branch; |1 - n/p| + 1 in general
    expect = n / p if p <= n else 2 - n / p
    assert math.isclose(float(itg.evaluate(B(p, n), np.eye(n))), expect, rel_tol=1e-14)


def test_burkholder_examples():
    assert float(itg.evaluate(B(2, 2), np.diag([3.0, 5.0]))) == pytest.approx(15.0, rel=1e-14)
    # (|1 - n/p| + det) |A|^{p-n} at Id_bar is -n/p
    assert float(itg.evaluate(B(4, 2), mc.id_bar(2))) == pytest.approx(-0.5, abs=1e-15)
    assert float(itg.burkholder_alt(np.diag([1.0, -1.0]), 4)) == pytest.approx(-0.5, abs=1e-15)
    assert float(itg.evaluate(B(4, 2), np.zeros((2, 2)))) == 0.0


def test_burkholder_alt_matches(rng):
    A = rng.uniform(-3, 3, (1000, 2, 2))
    for p in (2.5, 3.0, 4.0):
        ref = itg.evaluate(B(p, 2), A)
        scale = mc.operator_norm(A) ** p
        assert np.max(np.abs(itg.burkholder_alt(A, p) - ref) / np.maximum(1, scale)) < 1e-12
    with pytest.raises(ParameterError):
        itg.burkholder_alt(np.eye(2), 2.0)


def test_burkholder_by_hand_diagonal():
    # f(l1, l2) = ((1 - 2/p) l1^2 + l1 l2) l1^{p-2} for l1 >= |l2|
    for p in (1.0, 1.5, 3.0):
        l1, l2 = 2.0, -0.5
        expect = (abs(1 - 2 / p) * l1**2 + l1 * l2) * l1 ** (p - 2)
        assert float(itg.evaluate(B(p, 2), np.diag([l1, l2]))) == pytest.approx(expect, rel=1e-14)


def test_plus_and_det_kinds():
    assert float(itg.evaluate(itg.burkholder_plus(4, 2), mc.id_bar(2))) == 0.0
    assert float(itg.evaluate(itg.det_plus(2), np.diag([2.0, 3.0]))) == 6.0
    assert float(itg.evaluate(itg.det_plus(2), np.diag([2.0, -3.0]))) == 0.0
    assert float(itg.evaluate(itg.det_plus_power(4, 2, 1.5), np.diag([2.0, 1.0]))) == pytest.approx(6.0)
    with pytest.raises(ParameterError):
        itg.det_plus_power_eval(np.eye(2), 1.0, 2)


def test_fp_aniso_values():
    F = itg.fp_aniso(3)
    assert float(itg.evaluate(F, np.eye(2))) == 1.0
    for D in (np.diag([-3.0, -3.0]), np.diag([9.0, -3.0]), np.diag([-3.0, 9.0])):
        assert float(itg.evaluate(F, D)) == 0.0
    with pytest.raises(ParameterError):
        itg.fp_aniso(1.5)


def test_conformal_norm_kinds(rng):
    A = rng.uniform(-2, 2, (50, 3, 3))
    c = mc.conformal_norms(A)
    assert np.allclose(itg.evaluate(itg.conf_norm(3, "+"), A), c.plus_norm)
    assert np.allclose(itg.evaluate(itg.conf_norm(3, "-"), A), c.minus_norm)


# --------------------------------------------------------------------------
# h and its Hessian


def _fd_hessian_mp(t, d, p, step=1e-5):
    with mpmath.workdps(40):
        t, d, s = mpmath.mpf(t), mpmath.mpf(d), mpmath.mpf(step)

        def h(a, b):
            return itg.h_eval(a, b, mpmath.mpf(p))

        htt = (h(t + s, d) - 2 * h(t, d) + h(t - s, d)) / s**2
        hdd = (h(t, d + s) - 2 * h(t, d) + h(t, d - s)) / s**2
        htd = (h(t + s, d + s) - h(t + s, d - s) - h(t - s, d + s) + h(t - s, d - s)) / (4 * s**2)
        return np.array([[float(htt), float(htd)], [float(htd), float(hdd)]])


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
def test_h_hessian_against_mp_finite_differences(p):
    for t in (0.2, 1.0, 1.7):
        for s in (0.3, 1.0, 3.5):
            d = s - t * t
            H = itg.h_hessian(t, d, p)
            assert np.max(np.abs(H - _fd_hessian_mp(t, d, p))) <= 1e-6 * np.max(np.abs(H))
            assert abs(np.linalg.det(H)) <= 1e-9 * H[0, 0] * H[1, 1]


def test_h_matches_burkholder(rng):
    A = rng.uniform(-3, 3, (500, 2, 2))
    p = 3.0
    t, d = itg.conformal_coordinates(A)
    assert np.allclose(itg.h_eval(t, d, p), itg.evaluate(B(p, 2), A), rtol=1e-11, atol=1e-11)


def test_h_gradient_fd():
    p, t, d, e = 3.5, 0.8, 0.4, 1e-6
    gt, gd = itg.h_gradient(t, d, p)
    assert gt == pytest.approx((itg.h_eval(t + e, d, p) - itg.h_eval(t - e, d, p)) / (2 * e), rel=1e-8)
    assert gd == pytest.approx((itg.h_eval(t, d + e, p) - itg.h_eval(t, d - e, p)) / (2 * e), rel=1e-8)


def test_h_examples_and_s_prime():
    assert itg.h_eval(0.0, 1.0, 4.0) == pytest.approx(1.5)
    for p in (2.5, 3.0, 4.0):
        c = itg.s_prime_coefficient(p)
        assert c <= 1.0
        for t in (0.5, 1.0, 2.0):
            assert abs(itg.h_eval(t, -c * t * t, p)) < 1e-12
            assert itg.h_plus_eval(t, -c * t * t - 0.1, p) == 0.0


def test_h_hessian_warns_on_the_degenerate_line():
    with pytest.warns(SingularHessianWarning):
        itg.h_hessian(0.0, 0.0, 3.0)


# --------------------------------------------------------------------------
# B_sharp and transforms


def test_b_sharp_values():
    assert float(itg.evaluate(itg.b_sharp(), np.eye(2))) == pytest.approx(0.5)
    assert float(itg.evaluate(itg.hat_transform(itg.b_sharp()), np.eye(2))) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        itg.evaluate(itg.hat_transform(itg.b_sharp()), np.diag([1.0, -1.0]))
    with pytest.raises(DomainError):
        itg.b_sharp_eval(np.diag([1.0, -1.0]))


def test_b_sharp_limit_converges(rng):
    A = np.array([[2.0, 0.5], [-0.3, 1.1]])
    exact = float(itg.b_sharp_eval(A))
    e1 = abs(float(itg.b_sharp_limit(A, 2.01)) - exact)
    e2 = abs(float(itg.b_sharp_limit(A, 2.001)) - exact)
    assert e2 < e1 and 8 <= e1 / e2 <= 12


def test_hat_and_tilde(rng):
    Q = mc.random_rotation(2, rng, 200)
    A = Q @ np.diag([2.0, 0.7]) @ Q
    hh = itg.hat_transform(itg.hat_transform(itg.b_sharp()))
    assert np.allclose(itg.evaluate(hh, A), itg.evaluate(itg.b_sharp(), A), rtol=1e-12)
    assert np.allclose(itg.evaluate(itg.hat_transform(itg.b_sharp()), A), itg.hat_b_sharp_closed_form(A), rtol=1e-12)
    F = itg.tilde_transform(B(3, 2))
    assert float(itg.evaluate(F, mc.id_bar(2))) == pytest.approx(float(itg.evaluate(B(3, 2), np.eye(2))))
    assert itg.hat_transform(B(1.5, 2)).p == pytest.approx(0.5)


# --------------------------------------------------------------------------
# descriptors


@pytest.mark.parametrize(
    "text",
    [
        "burkholder:p=1.5,n=2",
        "burkholder_plus:p=3,n=3",
        "det:n=3",
        "det_plus:n=2",
        "det_plus_power:p=4,n=2,scale=1.5",
        "fp_aniso:p=3",
        "b_sharp",
        "hat(b_sharp)",
        "tilde(burkholder:p=3,n=2)",
        "plus(burkholder:p=3,n=3)",
        "pow(burkholder:p=3,n=2;q=1.5)",
        "conf_norm_plus:n=3",
    ],
)
def test_descriptor_roundtrip(text):
    F = itg.parse(text)
    assert itg.parse(itg.describe(F)) == F


@pytest.mark.parametrize("text", ["", "nope", "burkholder:p=x,n=2", "hat(b_sharp", "burkholder:p=0.5,n=2"])
def test_descriptor_errors(text):
    with pytest.raises((DescriptorError, ParameterError)):
        itg.parse(text)


def test_symmetry_probe():
    assert itg.symmetry_probe(B(1.5, 2), samples=500).passed
    assert itg.symmetry_probe(B(4, 3), samples=500).passed
    rep = itg.symmetry_probe(itg.fp_aniso(3), samples=500)
    assert not rep.passed and rep.witness is not None


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(1.0, 5.0))
def test_burkholder_homogeneity(t, p):
    A = np.array([[1.3, -0.4], [0.9, 0.2]])
    lhs = float(itg.evaluate(B(p, 2), t * A))
    rhs = t**p * float(itg.evaluate(B(p, 2), A))
    assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-12)
