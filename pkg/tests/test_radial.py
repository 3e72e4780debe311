import numpy as np
import pytest
from scipy import integrate

from semiconvexity import integrands as itg
from semiconvexity import matrixcore as mc
from semiconvexity import radial as rd
from semiconvexity.errors import DescriptorError, NormalizationMismatch, QuadratureError

ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0)


def test_profile_values():
    ident = rd.RadialProfile.identity()
    assert rd.profile_eval(ident, 0.3) == pytest.approx(0.3)
    assert rd.profile_derivative(ident, 0.3) == pytest.approx(1.0)
    rho = rd.RadialProfile.thm41(0.5)
    assert rd.profile_eval(rho, 0.25) == pytest.approx(2**-1.5, rel=1e-15)
    assert rd.profile_eval(rho, 0.5) == pytest.approx(0.5**0.5, rel=1e-15)
    assert rd.profile_eval(rho, 1.0) == 1.0
    # right derivative at the knot comes from the power piece
    assert rd.profile_derivative(rho, 0.5) == pytest.approx(0.5 * 0.5**-0.5)
    with pytest.raises(ValueError):
        rd.profile_eval(rho, 1.5)


def test_profile_invariants_enforced():
    with pytest.raises(ValueError):
        rd.RadialProfile((rd.Piece("lin", 0.0, 1.0, a=0.0, b=2.0),))
    with pytest.raises(ValueError):
        rd.RadialProfile.power(-1.0)


def test_gradient_spectrum():
    spec = rd.gradient_spectrum(rd.RadialProfile.identity(), 0.4, 3)
    assert np.allclose(spec.lam, [1, 1, 1])
    spec = rd.gradient_spectrum(rd.RadialProfile.identity(), 0.4, 3, conjugate=True)
    assert np.allclose(spec.lam, [1, 1, -1])
    a, r, n = 0.5, 0.7, 3
    spec = rd.gradient_spectrum(rd.RadialProfile.thm41(a), r, n)
    assert spec.sigma[-1] == pytest.approx(a * r ** (n * (a - 1)), rel=1e-14)
    assert sorted(np.abs(spec.lam)) == pytest.approx(sorted([r ** (a - 1)] * 2 + [a * r ** (a - 1)]))


def test_nonexpanding():
    assert rd.nonexpanding_check(rd.RadialProfile.thm41(-1.0)).passed
    for a in ALPHAS:
        assert rd.nonexpanding_check(rd.RadialProfile.thm41(a)).passed
    rep = rd.nonexpanding_check(rd.RadialProfile.power(2.0))
    assert not rep.passed and rep.witness is not None
    with pytest.raises(ValueError):
        rd.nonexpanding_check(rd.RadialProfile.identity(), grid=5)


def test_adaptive_simpson_against_scipy():
    for f, a, b in [(np.sin, 0.0, 3.0), (lambda x: x**2.5, 0.0, 1.0), (lambda x: np.exp(-x) * np.cos(5 * x), 0.0, 2.0)]:
        ref, _ = integrate.quad(f, a, b, epsabs=1e-13)
        assert rd.adaptive_simpson(f, a, b, 1e-11) == pytest.approx(ref, abs=1e-10)
        assert rd.gauss_legendre_composite(f, a, b, 8, 20) == pytest.approx(ref, abs=1e-10)


def test_adaptive_simpson_reports_non_convergence():
    with pytest.raises(QuadratureError):
        rd.adaptive_simpson(lambda x: np.sign(x - 0.3141592653589793), 0.0, 1.0, 1e-14, max_depth=8)


def test_energy_identity_profile_is_constant():
    F = itg.fp_aniso(3)
    assert rd.radial_energy(F, rd.RadialProfile.identity(), 2) == pytest.approx(1.0, abs=1e-12)


def test_energy_examples():
    rho = rd.RadialProfile.thm41(0.5)
    assert rd.radial_energy(itg.burkholder(1.5, 2), rho) == pytest.approx(4 / 3, abs=1e-9)
    assert rd.radial_energy(itg.burkholder(4, 2), rho, conjugate=True) == pytest.approx(-0.5, abs=1e-9)


def test_energy_against_scipy_quad():
    F = itg.burkholder(1.5, 3)
    rho = rd.RadialProfile.thm41(-0.5)
    g = rd.radial_integrand(F, rho, 3)
    ref = sum(integrate.quad(lambda r: float(g(np.array([r]))[0]), a, b, epsabs=1e-13)[0] for a, b in [(1e-12, 0.5), (0.5, 1.0)])
    assert rd.radial_energy(F, rho) == pytest.approx(ref, abs=1e-10)


def test_null_lagrangian_and_conjugate_symmetry():
    prof = rd.parse_profile("pw:[(0.3,lin),(0.6,pow:-1),(1.0,pow:0.5)]")
    assert rd.radial_energy(itg.determinant(2), prof) == pytest.approx(1.0, abs=1e-9)
    assert rd.radial_energy(itg.determinant(3), prof) == pytest.approx(1.0, abs=1e-9)
    norm3 = itg.custom(lambda A: mc.operator_norm(A) ** 3, 2, 3.0, label="|A|^3")
    e0 = rd.radial_energy(norm3, prof, 2)
    assert rd.radial_energy(norm3, prof, 2, conjugate=True) == pytest.approx(e0, abs=1e-10)


@pytest.mark.parametrize("n,p,a", [(2, 1.5, 0.5), (3, 2.0, -0.5), (3, 3.0, 0.3)])
def test_power_piece_integrand_is_exact_derivative(n, p, a):
    rho = rd.RadialProfile.thm41(a)
    r = np.linspace(0.5, 1.0, 40)
    lhs = rd.radial_integrand(itg.burkholder(p, n), rho, n, False, rho.pieces[1])(r) / n
    rhs = (n - p + p * a) / p * r ** (n - p - 1 + p * a)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_quasiaffinity():
    rep = rd.quasiaffinity_check(1.0, 2, [rd.RadialProfile.thm41(a) for a in ALPHAS])
    assert rep.passed and rep.worst_residual <= 1e-8
    assert rd.quasiaffinity_check(2.0, 3, [rd.RadialProfile.thm41(0.7)], tol=1e-8).passed
    rep = rd.quasiaffinity_check(1.5, 2, [rd.RadialProfile.power(2.0)])
    assert rep.details["status"] == "not-applicable"


def test_profile_grammar():
    rho = rd.parse_profile("power:alpha=0.5@thm41")
    assert rho.knots == (0.5,)
    rho = rd.parse_profile("pw:[(0.5,lin),(1.0,pow:0.3)]")
    assert rd.profile_eval(rho, 0.5) == pytest.approx(0.5**0.3)
    assert str(rd.parse_profile(rd.describe_profile(rho))) == str(rho)
    rho = rd.RadialProfile.piecewise([(0.4, "lin", None), (0.7, "lin", 0.5), (1.0, "pow", 2.0)])
    back = rd.parse_profile(rd.describe_profile(rho))
    r = np.linspace(0.0, 1.0, 101)
    assert np.allclose([rd.profile_eval(back, x) for x in r], [rd.profile_eval(rho, x) for x in r], atol=1e-14)
    for bad in ("pw:[(0.5,foo)]", "power:alpha=x", "spiral"):
        with pytest.raises(DescriptorError):
            rd.parse_profile(bad)


def test_radial_search():
    rep = rd.radial_quasiconvexity_search(itg.burkholder(1.5, 2), 2, restarts=4)
    assert rep.passed
    neg = itg.custom(lambda A: -np.sum(A * A, axis=(-2, -1)), 2, 2.0, label="-|A|_F^2")
    rep = rd.radial_quasiconvexity_search(neg, 2, restarts=2)
    assert not rep.passed and rep.details["min_gap"] < 0
    rep = rd.radial_quasiconvexity_search(itg.determinant(2), 2, restarts=2)
    assert abs(rep.details["min_gap"]) < 1e-9


def test_extremality():
    assert rd.extremality_scan(itg.burkholder(1.5, 2), 1.5, 2).passed
    assert rd.extremality_scan(itg.burkholder_plus(1.5, 2), 1.5, 2).passed
    c = 2 / 1.5
    Fc = itg.custom(lambda A: c * mc.operator_norm(A) ** 1.5, 2, 1.5, label="c|A|^1.5")
    assert rd.extremality_scan(Fc, 1.5, 2).passed
    with pytest.raises(NormalizationMismatch):
        rd.extremality_scan(itg.fp_aniso(2), 1.5, 2)
