"""Sampling checks for rank-one convexity and polyconvexity.

Sampling can refute a semiconvexity property or lend support to it; it never
proves one. Every check returns a :class:`~semiconvexity.report.CheckReport`
whose ``worst_residual`` is "larger is worse" (see :mod:`.report`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import integrands as itg
from . import matrixcore as mc
from .errors import FDFailure, PreconditionViolation
from .integrands import IntegrandHandle, evaluate
from .report import CheckReport, Timer, run_chunked, summarize, to_jsonable

DEFAULT_BOX = 5.0
SMOOTH_GAP = 1e-3


def _dim(F: IntegrandHandle, n: int | None) -> int:
    n = n if n is not None else F.n
    if n is None:
        raise ValueError("dimension unknown; pass n")
    return n


def _uniform_matrices(rng, count, n, box=DEFAULT_BOX):
    return rng.uniform(-box, box, size=(count, n, n))


def _unit_vectors(rng, count, n):
    v = rng.standard_normal((count, n))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _diag(lam):
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[-1]
    out = np.zeros(lam.shape + (n,))
    idx = np.arange(n)
    out[..., idx, idx] = lam
    return out


# --------------------------------------------------------------------------
# rank-one convexity


@dataclass(frozen=True)
class RankOneDirection:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        nx, ny = np.linalg.norm(x, axis=-1), np.linalg.norm(y, axis=-1)
        if np.any(nx == 0) or np.any(ny == 0):
            raise ValueError("rank-one direction needs non-zero x and y")
        object.__setattr__(self, "x", x / nx[..., None] if x.ndim > 1 else x / nx)
        object.__setattr__(self, "y", y / ny[..., None] if y.ndim > 1 else y / ny)

    def matrix(self) -> np.ndarray:
        return self.x[..., :, None] * self.y[..., None, :]


def rank_one_second_difference(F: IntegrandHandle, A, direction: RankOneDirection, h: float):
    """``(F(A + hX) - 2F(A) + F(A - hX)) / h^2`` with ``X = x (x) y``."""
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise ValueError("h must be positive")
    A = mc.as_matrix(A)
    X = direction.matrix()
    hh = h[..., None, None] if h.ndim else h
    return (evaluate(F, A + hh * X) - 2.0 * evaluate(F, A) + evaluate(F, A - hh * X)) / h**2


def rank_one_convexity_scan(
    F: IntegrandHandle,
    samples: int = 100_000,
    seed: int = 42,
    tol: float = 1e-7,
    n: int | None = None,
    box: float = DEFAULT_BOX,
    step: float = 1e-2,
    threads: int = 1,
) -> CheckReport:
    """Random second differences along rank-one lines.

    The step is ``step * max(1, |A|_F)``. Second differences of a convex
    function are non-negative for every step, so a coarse step costs nothing
    in soundness and keeps roundoff well below ``tol``.
    """
    n = _dim(F, n)

    def chunk(rng, count):
        A = _uniform_matrices(rng, count, n, box)
        x = _unit_vectors(rng, count, n)
        y = _unit_vectors(rng, count, n)
        h = step * np.maximum(1.0, np.linalg.norm(A, axis=(-2, -1)))
        fA = evaluate(F, A)
        sd = rank_one_second_difference(F, A, RankOneDirection(x, y), h)
        return {"resid": -sd / np.maximum(1.0, np.abs(fA)), "A": A, "x": x, "y": y, "h": h}

    with Timer() as timer:
        out = run_chunked(chunk, samples, seed, threads)
    return summarize(
        f"rank-one-convexity[{itg.describe(F)}]",
        out["resid"],
        tol,
        {k: out[k] for k in ("A", "x", "y", "h")},
        seed,
        timer.elapsed,
        details={"tol": tol, "box": box, "step": step},
    )


def nonnegativity_dichotomy_probe(
    F: IntegrandHandle, samples: int = 10_000, seed: int = 42, tol: float = 1e-12, n=None
) -> CheckReport:
    """For rank-one ``X``: ``max(F(X), F(-X)) >= 0`` whenever ``F(0) = 0``."""
    n = _dim(F, n)
    rng = np.random.default_rng(seed)
    with Timer() as timer:
        x = _unit_vectors(rng, samples, n)
        y = _unit_vectors(rng, samples, n)
        r = rng.uniform(0.01, DEFAULT_BOX, samples)
        X = r[:, None, None] * x[:, :, None] * y[:, None, :]
        best = np.maximum(evaluate(F, X), evaluate(F, -X))
        resid = -best / np.maximum(1.0, np.abs(best))
    return summarize(f"nonnegativity-dichotomy[{itg.describe(F)}]", resid, tol, {"X": X}, seed, timer.elapsed)


# --------------------------------------------------------------------------
# Baker-Ericksen inequalities


def baker_ericksen_check(F: IntegrandHandle, lam, i: int, j: int, fd_step: float = 1e-4):
    """``(lam_i d_i f - lam_j d_j f) / (lam_i - lam_j)`` with ``f(lam) = F(diag(lam))``.

    ``lam_k d_k f`` is a central difference under the relative perturbation
    ``lam_k -> lam_k (1 +- fd_step)``. Broadcasts over leading axes of ``lam``.
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[-1]
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise PreconditionViolation("need distinct indices i, j")
    if np.any(lam <= 0):
        raise PreconditionViolation("Baker-Ericksen needs all lam_k > 0")
    if np.any(lam[..., i] == lam[..., j]):
        raise PreconditionViolation("Baker-Ericksen needs lam_i != lam_j")

    def scaled_partial(k):
        up = lam.copy()
        dn = lam.copy()
        up[..., k] *= 1.0 + fd_step
        dn[..., k] *= 1.0 - fd_step
        return (evaluate(F, _diag(up)) - evaluate(F, _diag(dn))) / (2.0 * fd_step)

    return (scaled_partial(i) - scaled_partial(j)) / (lam[..., i] - lam[..., j])


def sample_ordered_spectra(rng, count, n, low=0.1, high=3.0, min_gap=SMOOTH_GAP):
    """Strictly ordered positive spectra with relative gaps above ``min_gap``."""
    out = []
    need = count
    while need > 0:
        lam = -np.sort(-rng.uniform(low, high, size=(2 * need + 8, n)), axis=-1)
        gaps = np.min(-np.diff(lam, axis=-1), axis=-1)
        lam = lam[gaps > min_gap * lam[:, 0]]
        out.append(lam[:need])
        need -= len(lam[:need])
    return np.concatenate(out)


def baker_ericksen_sweep(
    F: IntegrandHandle,
    samples: int = 10_000,
    seed: int = 42,
    tol: float = 1e-6,
    fd_step: float = 1e-4,
    threads: int = 1,
) -> CheckReport:
    n = F.n

    def chunk(rng, count):
        lam = sample_ordered_spectra(rng, count, n)
        worst = np.full(count, np.inf)
        for i in range(n):
            for j in range(i + 1, n):
                worst = np.minimum(worst, baker_ericksen_check(F, lam, i, j, fd_step))
        return {"resid": -worst, "lam": lam}

    with Timer() as timer:
        out = run_chunked(chunk, samples, seed, threads)
    return summarize(
        f"baker-ericksen[{itg.describe(F)}]", out["resid"], tol, {"lam": out["lam"]}, seed, timer.elapsed
    )


# --------------------------------------------------------------------------
# monotonicity under the partial-product ordering


def _random_doubly_stochastic(rng, count, n, terms=None):
    terms = terms or n
    weights = rng.dirichlet(np.ones(terms), size=count)
    D = np.zeros((count, n, n))
    eye = np.eye(n)
    for k in range(terms):
        perm = np.array([rng.permutation(n) for _ in range(count)])
        D += weights[:, k, None, None] * eye[perm]
    return D


def monotonicity_pair_sampler(n: int, rng, size: int | None = None, det_sign: int = 1, rotate=True):
    """Pairs ``(A, B)`` with ``sigma_k(A) <= sigma_k(B)`` for ``k < n`` and equal determinants.

    ``B`` gets a random spectrum; the log-magnitudes of ``A`` are a doubly
    stochastic average of those of ``B``, which can only shrink the leading
    partial products and leaves the full product fixed. Both matrices are
    then rotated by independent Haar samples from ``SO(n)``.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    single = size is None
    count = 1 if single else int(size)
    sign = np.sign(det_sign) or 1
    xb = -np.sort(-np.log(rng.uniform(0.2, 5.0, size=(count, n))), axis=-1)
    D = _random_doubly_stochastic(rng, count, n)
    xa = -np.sort(-np.einsum("bij,bj->bi", D, xb), axis=-1)
    # pin the determinant exactly
    xa[:, -1] = xb.sum(axis=-1) - xa[:, :-1].sum(axis=-1)
    lam_a = np.exp(xa)
    lam_b = np.exp(xb)
    lam_a[:, -1] *= sign
    lam_b[:, -1] *= sign
    A = _diag(lam_a)
    B = _diag(lam_b)
    if rotate:
        A = mc.random_rotation(n, rng, count) @ A @ mc.random_rotation(n, rng, count)
        B = mc.random_rotation(n, rng, count) @ B @ mc.random_rotation(n, rng, count)
    if single:
        return A[0], B[0]
    return A, B


def ordering_condition(A, B, rtol: float = 1e-12):
    """``sigma_k(A) <= sigma_k(B)`` for ``k < n`` and ``sigma_n(A) = sigma_n(B)``, within ``rtol``."""
    sa = mc.signed_singular_values(A).sigma
    sb = mc.signed_singular_values(B).sigma
    scale = np.maximum(np.abs(sa), np.abs(sb))
    lead = np.all(sa[..., :-1] <= sb[..., :-1] + rtol * np.maximum(scale[..., :-1], 1e-300), axis=-1)
    last_scale = np.maximum(mc.operator_norm(A), mc.operator_norm(B)) ** A.shape[-1]
    last = np.abs(sa[..., -1] - sb[..., -1]) <= rtol * np.maximum(last_scale, 1e-300)
    return lead & last


def monotonicity_check(F: IntegrandHandle, A, B, tol: float = 1e-9, rtol: float = 1e-12, seed=None) -> CheckReport:
    """``F(A) <= F(B) + tol * max(1, |F(B)|)`` for ordered pairs (single or stacked)."""
    A = mc.as_matrix(A)
    B = mc.as_matrix(B)
    ok = ordering_condition(A, B, rtol)
    if not np.all(ok):
        bad = int(np.flatnonzero(np.atleast_1d(~ok))[0])
        raise PreconditionViolation(f"pair {bad} violates the partial-product ordering")
    with Timer() as timer:
        fa = np.atleast_1d(evaluate(F, A))
        fb = np.atleast_1d(evaluate(F, B))
        resid = (fa - fb) / np.maximum(1.0, np.abs(fb))
    Ab = A.reshape((-1,) + A.shape[-2:])
    Bb = B.reshape((-1,) + B.shape[-2:])
    return summarize(
        f"monotonicity[{itg.describe(F)}]", resid, tol, {"A": Ab, "B": Bb, "FA": fa, "FB": fb}, seed, timer.elapsed
    )


def monotonicity_sweep(
    F: IntegrandHandle, samples: int = 10_000, seed: int = 42, tol: float = 1e-9, threads: int = 1
) -> CheckReport:
    """Sampler pairs split evenly between the ``det > 0`` and ``det < 0`` branches."""
    n = F.n

    def chunk(rng, count):
        half = count // 2
        Ap, Bp = monotonicity_pair_sampler(n, rng, half, det_sign=1)
        Am, Bm = monotonicity_pair_sampler(n, rng, count - half, det_sign=-1)
        A = np.concatenate([Ap, Am])
        B = np.concatenate([Bp, Bm])
        if not np.all(ordering_condition(A, B)):
            raise PreconditionViolation("sampler produced an unordered pair")
        fa, fb = evaluate(F, A), evaluate(F, B)
        return {"resid": (fa - fb) / np.maximum(1.0, np.abs(fb)), "A": A, "B": B}

    with Timer() as timer:
        out = run_chunked(chunk, samples, seed, threads)
    return summarize(
        f"monotonicity[{itg.describe(F)}]", out["resid"], tol, {"A": out["A"], "B": out["B"]}, seed, timer.elapsed
    )


def regularized_singular_pair(lam_a_head, lam_b_head, n: int, eps: float):
    """``A_eps = diag(lam_A, eps, ..., eps)``, ``B_eps = diag(lam_B, eps, ..., eps, eps * zeta)``.

    ``lam_*_head`` are the ``k < n`` positive leading singular values of a
    singular pair; ``zeta = prod(lam_A / lam_B)``.
    """
    la = np.asarray(lam_a_head, dtype=float)
    lb = np.asarray(lam_b_head, dtype=float)
    k = len(la)
    if k >= n or len(lb) != k:
        raise PreconditionViolation("need the same number k < n of positive singular values")
    zeta = float(np.prod(la / lb))
    A = np.diag(np.concatenate([la, np.full(n - k, eps)]))
    B = np.diag(np.concatenate([lb, np.full(n - k - 1, eps), [eps * zeta]]))
    return A, B


# --------------------------------------------------------------------------
# infimum over conformal matrices


def sample_conformal(rng, count, n, box=DEFAULT_BOX):
    """``t Q`` with ``t`` uniform in ``[0, box]`` and ``Q`` Haar in ``O(n)`` (both components)."""
    t = rng.uniform(0.0, box, size=count)
    Q = mc.random_rotation(n, rng, count)
    flip = rng.random(count) < 0.5
    Q = np.where(flip[:, None, None], Q @ mc.id_bar(n), Q)
    return t[:, None, None] * Q


def infimum_reduction_probe(
    F: IntegrandHandle, samples: int = 10_000, seed: int = 42, tol: float = 1e-9, n=None
) -> CheckReport:
    """``min`` over random matrices ``>= min`` over sampled ``CO(n)`` minus ``tol``."""
    n = _dim(F, n)
    rng = np.random.default_rng(seed)
    with Timer() as timer:
        A = _uniform_matrices(rng, samples, n)
        C = sample_conformal(rng, samples, n)
        fa = evaluate(F, A)
        fc = evaluate(F, C)
        m_co = float(np.min(fc))
        resid = (m_co - fa) / max(1.0, abs(m_co))
    rep = summarize(
        f"infimum-reduction[{itg.describe(F)}]", resid, tol, {"A": A}, seed, timer.elapsed,
        details={"min_random": float(np.min(fa)), "min_conformal": m_co},
    )
    return rep


# --------------------------------------------------------------------------
# polyconvexity at a point


def det_plus_certificate(p: float, n: int, scale: float) -> Callable[[np.ndarray], np.ndarray]:
    """``G(M) = scale * max(det, 0)^{p/n}`` on minors vectors (convex for ``p >= n``)."""
    if p < n:
        raise ValueError("the det^+ power certificate needs p >= n")

    def G(M):
        return scale * np.maximum(np.asarray(M)[..., -1], 0.0) ** (p / n)

    G.description = f"{scale!r}*(det^+)^({p!r}/{n})"
    return G


def affine_certificate(coeffs, const: float) -> Callable[[np.ndarray], np.ndarray]:
    coeffs = np.asarray(coeffs, dtype=float)

    def G(M):
        return const + np.asarray(M) @ coeffs

    G.description = "affine"
    return G


def polyconvexity_certificate_check(
    F: IntegrandHandle,
    A,
    G: Callable[[np.ndarray], np.ndarray],
    samples: int = 100_000,
    seed: int = 42,
    tol: float = 1e-9,
    multistarts: int = 50,
    extra_points=None,
    threads: int = 1,
) -> CheckReport:
    """Check that ``G o M`` touches ``F`` at ``A`` and stays below it elsewhere.

    ``G`` is any caller-supplied convex function of the minors vector. The
    minorant property is probed on uniform samples, on caller-supplied
    ``extra_points`` and by local minimization of ``(F - G o M)`` on the unit
    sphere from ``multistarts`` random starts (both sides are compared after
    normalizing by ``max(1, |F|)``).
    """
    A = mc.as_matrix(A)
    n = A.shape[-1]
    fa = float(evaluate(F, A))
    touch = abs(float(G(mc.minors_vector(A))) - fa) / max(1.0, abs(fa))

    def gap(B):
        fb = evaluate(F, B)
        return (G(mc.minors_vector(B)) - fb) / np.maximum(1.0, np.abs(fb))

    def chunk(rng, count):
        B = _uniform_matrices(rng, count, n)
        return {"resid": gap(B), "B": B}

    with Timer() as timer:
        out = run_chunked(chunk, samples, seed, threads)
        pts = [out["B"]]
        res = [out["resid"]]
        if extra_points is not None:
            E = mc.as_matrix(extra_points).reshape((-1, n, n))
            pts.append(E)
            res.append(gap(E))
        rng = np.random.default_rng([int(seed), 1])
        starts = rng.standard_normal((multistarts, n * n))
        local = []
        for z0 in starts:
            def obj(z):
                Z = z.reshape(n, n) / max(np.linalg.norm(z), 1e-12)
                return -float(gap(Z))

            r = optimize.minimize(obj, z0, method="Nelder-Mead", options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 200 * n * n})
            local.append((r.x / max(np.linalg.norm(r.x), 1e-12)).reshape(n, n))
        L = np.array(local)
        pts.append(L)
        res.append(gap(L))
        B = np.concatenate(pts)
        resid = np.concatenate(res)
    rep = summarize(
        f"polyconvexity-certificate[{itg.describe(F)}]",
        np.concatenate([[touch], resid]),
        tol,
        {"B": np.concatenate([A[None], B])},
        seed,
        timer.elapsed,
        details={
            "touch_residual": touch,
            "worst_gap": float(-np.max(resid)),
            "certificate": getattr(G, "description", "callable"),
        },
    )
    return rep


@dataclass
class MinorsDecomposition:
    weights: np.ndarray
    points: np.ndarray
    center: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.points = mc.as_matrix(self.points)
        self.center = mc.as_matrix(self.center)
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        n = self.center.shape[-1]
        if len(self.weights) > mc.minors_dim(n) + 1:
            raise ValueError("at most tau(n, n) + 1 points are needed")

    def minors_residual(self) -> np.ndarray:
        return self.weights @ mc.minors_vector(self.points) - mc.minors_vector(self.center)

    def scale(self) -> float:
        return float(max(1.0, np.max(np.abs(mc.minors_vector(self.points)))))

    def jensen_gap(self, F: IntegrandHandle) -> float:
        """``sum w_i F(A_i) - F(A)``; negative means ``F`` is not polyconvex at ``A``."""
        return float(self.weights @ evaluate(F, self.points) - evaluate(F, self.center))

    def to_dict(self):
        return to_jsonable({"weights": self.weights, "points": self.points, "center": self.center})


STATED_TRIPLE = (np.diag([-3.0, -3.0]), np.diag([9.0, -3.0]), np.diag([-3.0, 9.0]))


def diagonal_ansatz(w1: float = 1.0 / 3.0, s: float = 3.0):
    """Three-point decomposition of ``Id`` (2x2) with equal outer weights.

    Points ``diag(-s, -s)`` (weight ``w1``) and ``diag(u, -v)``, ``diag(-v, u)``
    (weight ``(1 - w1)/2`` each). ``u, v`` solve the trace and determinant
    relations; ``(w1, s) = (1/3, 3)`` gives ``u, v = 3 + 2 sqrt(3), 2 sqrt(3) - 3``.
    Returns ``None`` when no ``v >= 0`` exists.
    """
    w2 = 0.5 * (1.0 - w1)
    b = 2.0 * (1.0 + w1 * s)
    c = 1.0 - w1 * s * s
    disc = b * b - 8.0 * w2 * c
    if w2 <= 0 or disc < 0:
        return None
    v = (-b + math.sqrt(disc)) / (4.0 * w2)
    if v < 0:
        return None
    u = v + (1.0 + w1 * s) / w2
    pts = np.array([np.diag([-s, -s]), np.diag([u, -v]), np.diag([-v, u])])
    return MinorsDecomposition(np.array([w1, w2, w2]), pts, np.eye(2))


def _conformal_factor(A):
    """``(c, Q)`` with ``A = c Q``, ``Q`` in ``SO(2)``, or ``None`` if ``A`` is not in ``CO^+(2)``."""
    if A.shape != (2, 2) or not bool(mc.is_conformal(A, "+", 1e-12)):
        return None
    c = math.sqrt(max(float(mc.det(A)), 0.0))
    if c == 0:
        return None
    return c, A / c


def _mapped(dec: MinorsDecomposition, c: float, Q) -> MinorsDecomposition:
    return MinorsDecomposition(dec.weights, c * (Q @ dec.points), c * Q @ dec.center)


def _det_repair(weights, points, center, eps):
    """Fix the determinant relation of a 2x2 decomposition that already averages to ``center``.

    Adds the pair ``center +- Y`` with weight ``eps/2`` each and rescales the
    other weights by ``1 - eps``; ``Y`` is a multiple of ``Id`` or of ``Id_bar``
    so that ``det Y`` takes the needed value.
    """
    D = float(weights @ mc.det(points))
    d0 = float(mc.det(center))
    need = (d0 - (1.0 - eps) * D) / eps - d0
    Y = math.sqrt(abs(need)) * (np.eye(2) if need >= 0 else mc.id_bar(2))
    w = np.concatenate([(1.0 - eps) * weights, [eps / 2, eps / 2]])
    P = np.concatenate([points, [center + Y, center - Y]])
    return MinorsDecomposition(w, P, center)


def _unpack(z, k, n, center):
    lw = z[:k]
    w = np.exp(lw - lw.max())
    w /= w.sum()
    P = z[k:].reshape(k - 1, n, n)
    last = (center - np.einsum("i,ijk->jk", w[:-1], P)) / w[-1]
    return w, np.concatenate([P, last[None]])


def _bounded_value(w, P, F, radius):
    """``sum w_i F(P_i)`` plus a soft wall keeping the points in a ball; non-finite maps to a large value."""
    if not np.all(np.isfinite(P)):
        return 1e300
    with np.errstate(all="ignore"):
        val = float(w @ evaluate(F, P))
    excess = max(0.0, float(np.max(np.abs(P))) - radius)
    val += 1e3 * excess**2
    return val if math.isfinite(val) else 1e300


def _convex_violation(F, center, k, restarts, rng, box):
    """Minimize ``sum w_i F(A_i)`` subject to ``sum w_i A_i = center`` (linear constraint eliminated)."""
    n = center.shape[-1]
    best = None
    for _ in range(restarts):
        z0 = np.concatenate([np.zeros(k), rng.uniform(-box, box, (k - 1) * n * n)])

        def obj(z):
            w, P = _unpack(z, k, n, center)
            return _bounded_value(w, P, F, 4.0 * box)

        r = optimize.minimize(obj, z0, method="Powell", options={"xtol": 1e-9, "ftol": 1e-12, "maxfev": 20_000})
        if best is None or r.fun < best[0]:
            best = (r.fun, r.x)
    return _unpack(best[1], k, n, center)


def _penalty_search(F, center, k, restarts, rng, box, rounds=6, mu0=1.0):
    """Quadratic-penalty multistart on the nonlinear minors relations.

    The linear relation is eliminated by solving for the last point; the
    penalty weight grows tenfold per round. The result is polished with a
    least-squares solve of the remaining relations.
    """
    n = center.shape[-1]
    m0 = mc.minors_vector(center)
    nonlin = slice(n * n, None)
    fc = float(evaluate(F, center))
    found = []
    for _ in range(restarts):
        z = np.concatenate([np.zeros(k), rng.uniform(-box, box, (k - 1) * n * n)])
        mu = mu0
        for _round in range(rounds):
            def obj(z, mu=mu):
                w, P = _unpack(z, k, n, center)
                if not np.all(np.isfinite(P)):
                    return 1e300
                r = (w @ mc.minors_vector(P) - m0)[nonlin]
                return _bounded_value(w, P, F, 4.0 * box) - fc + mu * float(r @ r)

            z = optimize.minimize(obj, z, method="Powell", options={"xtol": 1e-10, "ftol": 1e-13, "maxfev": 20_000}).x
            mu *= 10.0

        def cons(z):
            w, P = _unpack(z, k, n, center)
            return (w @ mc.minors_vector(P) - m0)[nonlin]

        sol = optimize.least_squares(cons, z, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        w, P = _unpack(sol.x, k, n, center)
        found.append((w, P))
    return found


def polyconvexity_violation_search(
    F: IntegrandHandle,
    A,
    k: int = 4,
    restarts: int = 8,
    seed: int = 42,
    tol: float = 1e-9,
    box: float = 3.0,
) -> MinorsDecomposition | None:
    """Search for ``sum w_i M(A_i) = M(A)`` with ``sum w_i F(A_i) < F(A) - tol``.

    Stages, in order, stopping at the first valid witness:

    1. (``n = 2``, ``A`` conformal) the diagonal three-point ansatz around
       ``Id``, starting from ``(w1, s) = (1/3, 3)``, then a small grid;
    2. (``n = 2``) a convexity violation for the linear relation only, followed
       by a determinant repair with a far-out pair of small weight;
    3. the quadratic-penalty multistart on all minors relations.

    Every candidate must satisfy the minors relations to ``1e-10`` times the
    scale of its minors.
    """
    A = mc.as_matrix(A)
    n = A.shape[-1]
    if n not in (2, 3):
        raise ValueError("violation search supports n in (2, 3)")
    if k > mc.minors_dim(n) + 1:
        raise ValueError("k must not exceed tau(n, n) + 1")
    fa = float(evaluate(F, A))
    thresh = tol * max(1.0, abs(fa))
    rng = np.random.default_rng(seed)

    def accept(dec):
        if dec is None:
            return False
        try:
            gap = dec.jensen_gap(F)
        except Exception:
            return False
        return (np.max(np.abs(dec.minors_residual())) <= 1e-10 * dec.scale()) and gap < -thresh

    if n == 2:
        cq = _conformal_factor(A)
        if cq is not None:
            c, Q = cq
            grid = [(1.0 / 3.0, 3.0)] + [(w, s) for w in (0.2, 0.5) for s in (2.0, 3.0, 5.0)]
            for w1, s in grid:
                dec = diagonal_ansatz(w1, s)
                if dec is not None:
                    dec = _mapped(dec, c, Q)
                    if accept(dec):
                        return dec
        if k >= 3:
            w, P = _convex_violation(F, A, k - 2, restarts, rng, box)
            keep = w > 1e-12
            w, P = w[keep] / w[keep].sum(), P[keep]
            for eps in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
                dec = _det_repair(w, P, A, eps)
                if accept(dec):
                    return dec
    for w, P in _penalty_search(F, A, k, restarts, rng, box):
        keep = w > 1e-14
        if np.sum(keep) < 2:
            continue
        try:
            dec = MinorsDecomposition(w[keep] / w[keep].sum(), P[keep], A)
        except ValueError:
            continue
        if accept(dec):
            return dec
    return None


# --------------------------------------------------------------------------
# convexity along segments and the subgradient inequality for B_p^+


def convexity_segment_check(g, a, b, grid: int = 101, tol: float = 1e-10, name="segment-convexity") -> CheckReport:
    """Midpoint convexity ``g((u+v)/2) <= (g(u) + g(v))/2`` over all grid pairs on ``[a, b]``."""
    if grid < 3:
        raise ValueError("grid must be at least 3")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = np.linspace(0.0, 1.0, grid)
    pts = a + s[:, None] * (b - a)

    def G(X):
        try:
            return np.asarray(g(X[:, 0], X[:, 1]), dtype=float)
        except Exception:
            return np.array([float(g(x[0], x[1])) for x in X])

    with Timer() as timer:
        gv = G(pts)
        i, j = np.triu_indices(grid, k=2)
        mid = 0.5 * (pts[i] + pts[j])
        avg = 0.5 * (gv[i] + gv[j])
        gm = G(mid)
        resid = (gm - avg) / np.maximum(1.0, np.abs(avg))
    return summarize(name, resid, tol, {"u": pts[i], "v": pts[j]}, None, timer.elapsed)


def bppc_subgradient(B, p: float):
    """``(tau_B, delta_B)`` with ``|B|^{p-2} (tau_B, delta_B)`` a subgradient of ``h^+`` at ``(t_B, d_B)``.

    Inside ``S'`` (and on its boundary, one-sided from inside) this is the
    gradient of ``h``; outside ``S'`` it is zero.
    """
    B = mc.as_matrix(B)
    t, d = itg.conformal_coordinates(B)
    c = itg.s_prime_coefficient(p)
    inside = c * t * t + d >= 0
    tt = np.where(inside, t, 0.0)
    dd = np.where(inside, d, 1.0)
    gt, gd = itg.h_gradient(tt, dd, p)
    nrm = mc.operator_norm(B)
    scale = np.where(nrm > 0, nrm, 1.0) ** (p - 2)
    tau = np.where(inside & (nrm > 0), gt / scale, 0.0)
    delta = np.where(inside & (nrm > 0), gd / scale, 0.0)
    return tau, delta


def _bppc_residual(A, B, p):
    Fp = itg.burkholder_plus(p, 2)
    fa, fb = evaluate(Fp, A), evaluate(Fp, B)
    tau, delta = bppc_subgradient(B, p)
    ta, da = itg.conformal_coordinates(A)
    tb, db = itg.conformal_coordinates(B)
    w = mc.operator_norm(B) ** (p - 2)
    lin = w * (tau * (ta - tb) + delta * (da - db))
    lhs = fa - fb
    scale = np.maximum.reduce([np.ones_like(fa), np.abs(fa), np.abs(fb), w * (np.abs(tau * (ta - tb)) + np.abs(delta * (da - db)))])
    return (lin - lhs) / scale


def bppc_subgradient_check(A, B, p: float, tol: float = 1e-9, seed=None) -> CheckReport:
    """``B_p^+(A) - B_p^+(B) >= |B|^{p-2} (tau_B (|A^-| - |B^-|) + delta_B (det A - det B))``."""
    if p <= 2:
        raise ValueError("needs p > 2")
    A = mc.as_matrix(A)
    B = mc.as_matrix(B)
    if A.shape[-1] != 2:
        raise PreconditionViolation("the subgradient inequality is the 2x2 statement")
    with Timer() as timer:
        resid = np.atleast_1d(_bppc_residual(A, B, p))
    return summarize(
        f"bppc-subgradient[p={p!r}]",
        resid,
        tol,
        {"A": A.reshape(-1, 2, 2), "B": B.reshape(-1, 2, 2)},
        seed,
        timer.elapsed,
    )


def bppc_pairs(rng, count):
    """Mixture of pair types: uniform, ``B`` on the boundary of ``S'``, and ``A`` close to ``B``."""
    q = count // 4
    A = _uniform_matrices(rng, count, 2)
    B = _uniform_matrices(rng, count, 2)
    # B with B_p(B) ~ 0: det = -K^{-1} |B|^2 for the relevant K is covered by
    # scanning diag(1, s) rotations over s in [-1, 1]
    s = rng.uniform(-1.0, 1.0, q)
    r = rng.uniform(0.1, DEFAULT_BOX, q)
    Bq = r[:, None, None] * (mc.random_rotation(2, rng, q) @ _diag(np.stack([np.ones(q), s], -1)) @ mc.random_rotation(2, rng, q))
    B[:q] = Bq
    A[q:2 * q] = B[q:2 * q] + 1e-3 * _uniform_matrices(rng, q, 2, 1.0)
    return A, B


def bppc_sweep(p: float, samples: int = 10_000, seed: int = 42, tol: float = 1e-9, threads: int = 1) -> CheckReport:
    def chunk(rng, count):
        A, B = bppc_pairs(rng, count)
        return {"resid": _bppc_residual(A, B, p), "A": A, "B": B}

    with Timer() as timer:
        out = run_chunked(chunk, samples, seed, threads)
    return summarize(f"bppc-sweep[p={p!r}]", out["resid"], tol, {"A": out["A"], "B": out["B"]}, seed, timer.elapsed)


# --------------------------------------------------------------------------
# the 3x3 obstruction at diag(1, 0, 0)


@dataclass
class Prop49Coefficients:
    c: np.ndarray
    chain: dict = field(default_factory=dict)

    def expected(self, p: float) -> np.ndarray:
        return np.array([p - 3.0, 0.0, 0.0, 0.0, 0.0, 1.0, p - 2.0])

    def G(self, x, y, z):
        c1, c2, c3, c4, c5, c6, c7 = self.c
        return c1 * (x - 1) + c2 * y + c3 * z + c4 * (x - 1) * y + c5 * (x - 1) * z + c6 * y * z + c7 * (x - 1) * y * z


def _diag3_F(p):
    Fp = itg.burkholder_plus(p, 3)
    base = float(evaluate(Fp, np.diag([1.0, 0.0, 0.0])))

    def F(x, y, z):
        return evaluate(Fp, _diag(np.stack(np.broadcast_arrays(x, y, z), axis=-1))) - base

    return F


def _smooth_gradient(p, point, step):
    """Central-difference gradient of ``F`` at a point of the smooth set, or ``FDFailure``."""
    point = np.asarray(point, dtype=float)
    mags = np.sort(np.abs(point))[::-1]
    if mags[0] - mags[1] <= 10 * step:
        raise FDFailure(f"{point.tolist()} has no strictly dominant entry; B_p is not smooth there")
    Bp = itg.burkholder(p, 3)
    F = _diag3_F(p)
    grad = np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = step
        up, dn = point + e, point - e
        if min(float(evaluate(Bp, np.diag(up))), float(evaluate(Bp, np.diag(dn)))) <= 0:
            raise FDFailure(f"stencil at {point.tolist()} crosses the zero set of B_p")
        grad[i] = (float(F(*up)) - float(F(*dn))) / (2 * step)
    return grad


def reproduce_prop_4_9(
    p: float = 4.0,
    fd_step: float = 1e-6,
    tol: float = 1e-6,
    y_probe: float = 0.5,
    z_probe: float = 0.5,
    margin_y=(0.99, 1.01),
):
    """Derive the would-be affine-in-minors minorant of ``B_p^+`` at ``diag(1, 0, 0)`` (``n = 3``).

    Coefficients come from matching finite-difference gradients of
    ``F(x, y, z) = B_p^+(diag(x, y, z)) - B_p^+(diag(1, 0, 0))`` at
    ``(1, 0, 0)``, ``(1, y, 0)``, ``(1, 0, z)`` and, for ``c7``, the
    ``x``-derivative at ``(1, y, y)``. The margin ``G(0, y, -y) - F(0, y, -y)``
    is evaluated for each ``y`` in ``margin_y`` and compared with
    ``(p - 3)[(y^2 - 1) - (y^p - 1)/p]``. The report passes when the
    coefficients match their closed form, every margin matches its closed
    form, and some probed margin is positive (``G > F`` contradicts ``F >= G``).
    """
    if p <= 3:
        raise ValueError("the obstruction needs p > 3")
    with Timer() as timer:
        g0 = _smooth_gradient(p, (1.0, 0.0, 0.0), fd_step)
        c1, c2, c3 = g0
        g1 = _smooth_gradient(p, (1.0, y_probe, 0.0), fd_step)
        c4 = (g1[0] - c1) / y_probe
        c6_from_y = (g1[2] - c3) / y_probe
        g2 = _smooth_gradient(p, (1.0, 0.0, z_probe), fd_step)
        c5 = (g2[0] - c1) / z_probe
        c6_from_z = (g2[1] - c2) / z_probe
        c6 = 0.5 * (c6_from_y + c6_from_z)
        g3 = _smooth_gradient(p, (1.0, y_probe, y_probe), fd_step)
        c7 = (g3[0] - c1 - c4 * y_probe - c5 * y_probe) / y_probe**2
        coeffs = Prop49Coefficients(
            np.array([c1, c2, c3, c4, c5, c6, c7]),
            chain={
                "grad(1,0,0)": g0,
                f"grad(1,{y_probe},0)": g1,
                f"grad(1,0,{z_probe})": g2,
                f"grad(1,{y_probe},{y_probe})": g3,
                "c6_from_y": c6_from_y,
                "c6_from_z": c6_from_z,
            },
        )
        coeff_err = float(np.max(np.abs(coeffs.c - coeffs.expected(p))))
        F = _diag3_F(p)
        rows = []
        for y in margin_y:
            Gv = float(coeffs.G(0.0, y, -y))
            Fv = float(F(0.0, y, -y))
            margin = Gv - Fv
            exact = (p - 3) * ((y * y - 1) - (y**p - 1) / p)
            exact_G = (p - 3) * (y * y - 1)
            exact_F = (p - 3) * (y**p - 1) / p
            rows.append(
                {
                    "y": y,
                    "G": Gv,
                    "F": Fv,
                    "margin": margin,
                    "closed_form_margin": exact,
                    "margin_error": abs(margin - exact),
                    "F_closed_form_error": abs(Fv - exact_F),
                    "G_closed_form_error": abs(Gv - exact_G),
                    "positive": margin > 0,
                }
            )
        slope_G, slope_F = 2 * (p - 3), p - 3
    form_err = max(r["margin_error"] for r in rows)
    contradiction = any(r["positive"] for r in rows)
    passed = coeff_err <= tol and form_err <= 1e-10 and contradiction
    resid = max(coeff_err / tol, form_err / 1e-10, 0.0 if contradiction else 2.0)
    witness = None if passed else {"rows": rows, "coefficients": coeffs.c}
    rep = CheckReport(
        name=f"prop-4.9-chain[p={p!r}]",
        passed=passed,
        worst_residual=resid,
        witness=to_jsonable(witness) if witness else None,
        samples=len(rows),
        seed=None,
        elapsed=timer.elapsed,
        details=to_jsonable(
            {
                "coefficients": coeffs.c,
                "expected": coeffs.expected(p),
                "coefficient_error": coeff_err,
                "margins": rows,
                "slope_at_1": {"G": slope_G, "F": slope_F},
            }
        ),
    )
    return coeffs, rep
