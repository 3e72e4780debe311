import math

import numpy as np
import pytest

from semiconvexity import checks as ck
from semiconvexity import integrands as itg
from semiconvexity import matrixcore as mc
from semiconvexity.errors import FDFailure, PreconditionViolation

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
G = itg.custom(lambda A: A[..., 0, 0] * A[..., 1, 1] + 0.5 * (A[..., 0, 1] ** 2 + A[..., 1, 0] ** 2), 2, label="G")
NEG_A2 = itg.custom(lambda A: -A[..., 0, 0] ** 2, 2, 2.0, label="-a^2")


def test_second_difference_examples(rng):
    A = rng.uniform(-2, 2, (2, 2))
    assert ck.rank_one_second_difference(G, A, ck.RankOneDirection(E1, E1), 1e-2) == pytest.approx(0.0, abs=1e-10)
    assert ck.rank_one_second_difference(G, A, ck.RankOneDirection(E1, E2), 1e-2) == pytest.approx(1.0, abs=1e-10)
    assert ck.rank_one_second_difference(NEG_A2, A, ck.RankOneDirection(E1, E1), 1e-2) == pytest.approx(-2.0, abs=1e-10)
    with pytest.raises(ValueError):
        ck.rank_one_second_difference(G, A, ck.RankOneDirection(E1, E2), 0.0)
    with pytest.raises(ValueError):
        ck.RankOneDirection(np.zeros(2), E1)


def test_rank_one_scan_pass_and_control():
    assert ck.rank_one_convexity_scan(itg.burkholder(1.5, 2), samples=5000).passed
    rep = ck.rank_one_convexity_scan(NEG_A2, samples=500)
    assert not rep.passed
    assert set(rep.witness) >= {"A", "x", "y", "h", "index"}


def test_scan_is_thread_independent():
    F = itg.burkholder(3, 3)
    a = ck.rank_one_convexity_scan(F, samples=9000, seed=7, threads=1)
    b = ck.rank_one_convexity_scan(F, samples=9000, seed=7, threads=4)
    assert a.to_json() == b.to_json()
    assert np.array_equal(a.residuals, b.residuals)


def test_baker_ericksen_examples():
    lam = np.array([2.0, 1.0])
    assert ck.baker_ericksen_check(itg.determinant(2), lam, 0, 1) == pytest.approx(0.0, abs=1e-8)
    # (p-2) l1^{p-1} (l1 + l2) / (l1 - l2) at p = 3
    assert ck.baker_ericksen_check(itg.burkholder(3, 2), lam, 0, 1) == pytest.approx(12.0, rel=1e-7)
    neg_det = itg.custom(lambda A: -mc.det(A), 2, 2.0, label="-det")
    assert ck.baker_ericksen_check(neg_det, lam, 0, 1) == pytest.approx(0.0, abs=1e-8)
    aniso = itg.fp_aniso(3)
    assert ck.baker_ericksen_check(aniso, np.array([3.0, 0.5]), 0, 1) >= 0
    for bad in ([2.0, 2.0], [2.0, -1.0]):
        with pytest.raises(PreconditionViolation):
            ck.baker_ericksen_check(itg.burkholder(3, 2), np.array(bad), 0, 1)


def test_monotonicity_examples():
    F = itg.burkholder(4, 2)
    Bm = np.diag([2.0, 0.5])
    A = np.eye(2)
    assert float(itg.evaluate(F, Bm)) == pytest.approx(12.0)
    assert float(itg.evaluate(F, A)) == pytest.approx(1.5)
    assert ck.monotonicity_check(F, A, Bm).passed
    assert ck.monotonicity_check(F, Bm, Bm).worst_residual == 0.0
    Ae, Be = ck.regularized_singular_pair([2.0], [3.0], 2, 1e-6)
    assert ck.monotonicity_check(F, Ae, Be).passed
    with pytest.raises(PreconditionViolation):
        ck.monotonicity_check(F, Bm, A)


def test_pair_sampler_ordering(rng):
    for n in (2, 3):
        for sign in (1, -1):
            A, B = ck.monotonicity_pair_sampler(n, rng, 500, det_sign=sign)
            assert np.all(ck.ordering_condition(A, B))
            assert np.all(np.sign(mc.det(A)) == sign)


def test_infimum_probe():
    for F in (itg.burkholder_plus(3, 2), itg.det_plus(2), itg.conf_norm(2, "+")):
        rep = ck.infimum_reduction_probe(F, samples=2000)
        assert rep.passed
        assert rep.details["min_conformal"] == pytest.approx(0.0, abs=1e-12)


def test_certificate_check():
    F = itg.burkholder_plus(4, 2)
    cert = ck.det_plus_certificate(4, 2, 1.5)
    assert ck.polyconvexity_certificate_check(F, np.eye(2), cert, samples=2000, multistarts=5).passed
    det = itg.determinant(2)
    affine_det = ck.affine_certificate([0, 0, 0, 0, 1.0], 0.0)
    rep = ck.polyconvexity_certificate_check(det, np.eye(2), affine_det, samples=2000, multistarts=5)
    assert rep.passed and abs(rep.details["worst_gap"]) < 1e-12


def test_affine_certificate_for_fp_fails_on_witness():
    # tangent plane of F_3 at Id in minors coordinates: F_3 = (ad + ...)^{3/2}
    F = itg.fp_aniso(3)
    cert = ck.affine_certificate([1.5, 0, 0, 1.5, 0.0], -2.0)
    dec = ck.diagonal_ansatz()
    rep = ck.polyconvexity_certificate_check(F, np.eye(2), cert, samples=100, multistarts=2, extra_points=dec.points)
    assert not rep.passed


def test_diagonal_ansatz_is_exact():
    dec = ck.diagonal_ansatz(1.0 / 3.0, 3.0)
    assert np.max(np.abs(dec.minors_residual())) < 1e-14
    assert dec.jensen_gap(itg.fp_aniso(3)) == pytest.approx(-1.0, abs=1e-14)
    s3 = 2 * math.sqrt(3)
    assert np.allclose(dec.points[1], np.diag([3 + s3, 3 - s3]))


def test_stated_triple_violates_the_determinant_relation():
    w = np.full(3, 1.0 / 3.0)
    dets = mc.det(np.array(ck.STATED_TRIPLE))
    assert w @ dets == pytest.approx(-15.0)


def test_violation_search():
    dec = ck.polyconvexity_violation_search(itg.fp_aniso(3), np.eye(2))
    assert dec is not None and dec.jensen_gap(itg.fp_aniso(3)) == pytest.approx(-1.0)
    assert ck.polyconvexity_violation_search(itg.determinant(2), np.eye(2), restarts=2) is None
    F = itg.burkholder_plus(1.5, 2)
    dec = ck.polyconvexity_violation_search(F, np.eye(2))
    assert dec is not None
    assert dec.jensen_gap(F) < -1e-3
    assert np.max(np.abs(dec.minors_residual())) <= 1e-10 * dec.scale()


def test_minors_decomposition_validation():
    with pytest.raises(ValueError):
        ck.MinorsDecomposition([0.5, 0.6], np.stack([np.eye(2)] * 2), np.eye(2))
    with pytest.raises(ValueError):
        ck.MinorsDecomposition(np.full(7, 1 / 7), np.stack([np.eye(2)] * 7), np.eye(2))


def test_segment_convexity():
    h3 = lambda t, d: itg.h_plus_eval(t, d, 3.0)
    assert ck.convexity_segment_check(h3, (1.0, -0.9), (1.0, 1.0)).passed
    lin = ck.convexity_segment_check(lambda x, y: 2 * x - y, (0, 0), (3, 1))
    assert lin.passed and abs(lin.worst_residual) < 1e-15
    assert not ck.convexity_segment_check(lambda x, y: -(x * x + y * y), (0, 0), (1, 1)).passed


def test_bppc():
    A = np.array([[1.0, 2.0], [-0.5, 3.0]])
    assert ck.bppc_subgradient_check(A, A, 3.0).worst_residual == pytest.approx(0.0, abs=1e-15)
    Bn = np.diag([1.0, -0.9])  # B_3(B) < 0
    tau, delta = ck.bppc_subgradient(Bn, 3.0)
    assert tau == 0.0 and delta == 0.0
    assert ck.bppc_sweep(3.0, samples=3000).passed


def test_nonnegativity_dichotomy():
    for F in (itg.burkholder(1.5, 2), itg.burkholder(4, 3), itg.fp_aniso(3)):
        assert ck.nonnegativity_dichotomy_probe(F, samples=2000).passed


def test_prop49_chain():
    coeffs, rep = ck.reproduce_prop_4_9(4.0)
    assert np.max(np.abs(coeffs.c - [1, 0, 0, 0, 0, 1, 2])) < 1e-6
    rows = {r["y"]: r for r in rep.details["margins"]}
    assert rows[1.01]["margin"] > 0
    assert rows[0.99]["margin"] < 0
    for r in rows.values():
        assert r["margin_error"] < 1e-10
    with pytest.raises(ValueError):
        ck.reproduce_prop_4_9(3.0)


def test_fd_failure_outside_smooth_set():
    with pytest.raises(FDFailure):
        ck._smooth_gradient(4.0, (1.0, 1.0, 0.0), 1e-6)


@pytest.mark.parametrize(
    "desc",
    ["burkholder_plus:p=1.5,n=2", "burkholder_plus:p=3,n=3", "det_plus:n=2", "det_plus:n=3",
     "conf_norm_plus:n=2", "conf_norm_minus:n=2", "conf_norm_plus:n=3", "fp_aniso:p=2.5"],
)
def test_catalog_is_rank_one_convex(desc):
    F = itg.parse(desc)
    rep = ck.rank_one_convexity_scan(F, samples=100_000, seed=7, tol=1e-7)
    assert rep.passed, (desc, rep.worst_residual, rep.witness)
