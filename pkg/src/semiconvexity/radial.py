"""Radial stretchings of the unit ball and one-dimensional energy quadrature.

A profile ``rho`` on ``[0, 1]`` with ``rho(0) = 0`` and ``rho(1) = 1`` defines
``phi(x) = rho(|x|) x / |x|``. The gradient of ``phi`` at ``|x| = r`` has
singular values ``rho(r)/r`` (``n - 1`` times) and ``|rho'(r)|``, so for an
isotropic integrand the ball average of ``F(D phi)`` reduces to
``n * int_0^1 F(diag(rho/r, ..., rho')) r^{n-1} dr``.
"""
from __future__ import annotations

import ast
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import integrands as itg
from . import matrixcore as mc
from .errors import DescriptorError, NormalizationMismatch, QuadratureError
from .integrands import IntegrandHandle, evaluate
from .report import CheckReport, Timer, chunk_rng, summarize, to_jsonable

CONTINUITY_TOL = 1e-14
OPEN_START = 1e-12


@dataclass(frozen=True)
class Piece:
    """``rho(r) = a + b r`` (``kind="lin"``) or ``rho(r) = c r^alpha`` (``kind="pow"``) on ``[lo, hi]``."""

    kind: str
    lo: float
    hi: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    alpha: float = 0.0

    def value(self, r):
        if self.kind == "lin":
            return self.a + self.b * r
        return self.c * r**self.alpha

    def derivative(self, r):
        if self.kind == "lin":
            return self.b + 0.0 * r
        return self.c * self.alpha * r ** (self.alpha - 1.0)


@dataclass(frozen=True)
class RadialProfile:
    pieces: tuple
    label: str = ""

    def __post_init__(self):
        ps = self.pieces
        if not ps:
            raise ValueError("profile needs at least one piece")
        if ps[0].lo != 0.0 or ps[-1].hi != 1.0:
            raise ValueError("pieces must cover [0, 1]")
        for left, right in zip(ps[:-1], ps[1:]):
            if left.hi != right.lo or not left.lo < left.hi:
                raise ValueError("pieces must be ordered and adjacent")
            jump = abs(left.value(left.hi) - right.value(right.lo))
            if jump > CONTINUITY_TOL * max(1.0, abs(left.value(left.hi))):
                raise ValueError(f"profile is discontinuous at r={left.hi!r} (jump {jump:.3g})")
        first = ps[0]
        if first.kind == "pow" and first.alpha <= 0:
            raise ValueError("a power piece at r=0 needs alpha > 0 so that rho(0) = 0")
        if first.kind == "lin" and first.a != 0.0:
            raise ValueError("rho(0) must be 0")
        if abs(ps[-1].value(1.0) - 1.0) > CONTINUITY_TOL:
            raise ValueError("rho(1) must be 1")

    @property
    def knots(self) -> tuple:
        return tuple(p.hi for p in self.pieces[:-1])

    def __str__(self):
        return self.label or describe_profile(self)

    # constructors -------------------------------------------------------

    @classmethod
    def identity(cls) -> "RadialProfile":
        return cls((Piece("lin", 0.0, 1.0, a=0.0, b=1.0),), label="identity")

    @classmethod
    def power(cls, alpha: float) -> "RadialProfile":
        """``rho(r) = r^alpha``; Lipschitz only for ``alpha >= 1``."""
        return cls((Piece("pow", 0.0, 1.0, c=1.0, alpha=float(alpha)),), label=f"power:alpha={alpha!r}")

    @classmethod
    def thm41(cls, alpha: float, knot: float = 0.5) -> "RadialProfile":
        """Linear on ``[0, knot]``, ``r^alpha`` on ``[knot, 1]``.

        With ``knot = 1/2`` the linear piece is ``r / 2^{alpha - 1}``.
        """
        alpha = float(alpha)
        slope = knot ** (alpha - 1.0)
        return cls(
            (Piece("lin", 0.0, knot, a=0.0, b=slope), Piece("pow", knot, 1.0, c=1.0, alpha=alpha)),
            label=f"power:alpha={alpha!r}@thm41" if knot == 0.5 else "",
        )

    @classmethod
    def piecewise(cls, spec) -> "RadialProfile":
        """Build from ``[(hi, kind, param), ...]`` working back from ``rho(1) = 1``.

        ``("pow", alpha)`` pieces are scaled to match the value at their right
        end; a ``"lin"`` piece without a slope must be the first piece and
        passes through the origin; ``("lin", b)`` fixes the slope ``b``.
        """
        spec = list(spec)
        if not spec:
            raise ValueError("empty piece list")
        his = [float(s[0]) for s in spec]
        if abs(his[-1] - 1.0) > 0 or any(not x < y for x, y in zip([0.0] + his[:-1], his)):
            raise ValueError("piece ends must increase strictly to 1")
        los = [0.0] + his[:-1]
        pieces = []
        right_value = 1.0
        for idx in range(len(spec) - 1, -1, -1):
            kind = spec[idx][1]
            param = spec[idx][2] if len(spec[idx]) > 2 else None
            lo, hi = los[idx], his[idx]
            if kind == "pow":
                if param is None:
                    raise ValueError("power pieces need an exponent")
                alpha = float(param)
                piece = Piece("pow", lo, hi, c=right_value / hi**alpha, alpha=alpha)
            elif kind == "lin":
                if param is None:
                    if idx != 0:
                        raise ValueError("a linear piece without slope must start at r=0")
                    b = right_value / hi
                else:
                    b = float(param)
                piece = Piece("lin", lo, hi, a=right_value - b * hi, b=b)
            else:
                raise ValueError(f"unknown piece kind {kind!r}")
            pieces.append(piece)
            right_value = piece.value(lo)
        pieces.reverse()
        if pieces[0].kind == "lin" and abs(pieces[0].a) <= CONTINUITY_TOL:
            pieces[0] = Piece("lin", 0.0, pieces[0].hi, a=0.0, b=pieces[0].b)
        return cls(tuple(pieces))


def _find_piece(rho: RadialProfile, r: float) -> Piece:
    for p in rho.pieces:
        if r < p.hi:
            return p
    return rho.pieces[-1]


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1) or np.any(np.isnan(r)):
        raise ValueError("r must lie in [0, 1]")
    return r


def _piecewise(rho: RadialProfile, r, attr: str):
    r = _check_r(r)
    out = np.empty_like(r)
    # right-continuous selection: knots belong to the piece on their right
    idx = np.searchsorted(np.array(rho.knots), r, side="right")
    for k, piece in enumerate(rho.pieces):
        mask = idx == k
        if np.any(mask):
            with np.errstate(divide="ignore"):
                out[mask] = getattr(piece, attr)(r[mask])
    return out if out.ndim else float(out)


def profile_eval(rho: RadialProfile, r):
    return _piecewise(rho, r, "value")


def profile_derivative(rho: RadialProfile, r):
    """``rho'(r)``, taken from the right at knots and from the left at ``r = 1``."""
    return _piecewise(rho, r, "derivative")


def _spectrum_lambda(rho, r, n, conjugate, piece: Piece | None = None):
    r = np.asarray(r, dtype=float)
    if piece is None:
        ratio = np.asarray(profile_eval(rho, r), dtype=float) / r
        deriv = np.asarray(profile_derivative(rho, r), dtype=float)
    else:
        ratio = np.asarray(piece.value(r), dtype=float) / r
        deriv = np.asarray(piece.derivative(r), dtype=float)
    lam = np.repeat(ratio[..., None], n, axis=-1)
    lam[..., -1] = -deriv if conjugate else deriv
    return lam


def gradient_spectrum(rho: RadialProfile, r, n: int, conjugate: bool = False) -> mc.SignedSpectrum:
    """Signed singular values of ``D phi`` at ``|x| = r``."""
    r = _check_r(r)
    if np.any(r <= 0):
        raise ValueError("r must lie in (0, 1]")
    lam = _spectrum_lambda(rho, r, n, conjugate)
    mags = np.abs(lam)
    order = np.argsort(-mags, axis=-1, kind="stable")
    sorted_mags = np.take_along_axis(mags, order, axis=-1)
    sign = np.prod(np.sign(lam), axis=-1)
    sorted_mags[..., -1] *= np.where(sign < 0, -1.0, 1.0)
    return mc.SignedSpectrum.from_lambda(sorted_mags)


def nonexpanding_check(rho: RadialProfile, grid: int = 1000, tol: float = 1e-12) -> CheckReport:
    """``|rho'(r)| <= rho(r)/r`` on a grid and on every piece in closed form."""
    if grid < 10:
        raise ValueError("grid must be at least 10")
    r = np.linspace(0.0, 1.0, grid + 1)[1:]
    with Timer() as timer:
        rv = np.asarray(profile_eval(rho, r))
        dv = np.asarray(profile_derivative(rho, r))
        resid = (np.abs(dv) - rv / r) / np.maximum(1.0, rv / r)
        analytic = []
        for piece in rho.pieces:
            if piece.kind == "pow":
                # |c alpha r^{alpha-1}| <= c r^{alpha-1}  iff  |alpha| <= 1 (for c > 0)
                analytic.append((abs(piece.alpha) - 1.0) if piece.c > 0 else 1.0)
            else:
                # a/r + b - |b| is monotone in r, so the endpoints decide
                ends = [x for x in (piece.lo, piece.hi) if x > 0]
                analytic.append(max(abs(piece.b) - (piece.a / x + piece.b) for x in ends))
        analytic = np.array(analytic)
    all_resid = np.concatenate([resid, analytic])
    inputs = {"r": np.concatenate([r, [p.lo for p in rho.pieces]])}
    return summarize(f"nonexpanding[{rho}]", all_resid, tol, inputs, None, timer.elapsed)


# --------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = "adaptive-simpson"
    abs_tol: float = 1e-10
    max_depth: int = 40
    knot_aware: bool = True
    panels: int = 8
    order: int = 20

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.method not in ("adaptive-simpson", "gauss-legendre-composite"):
            raise ValueError(f"unknown quadrature method {self.method!r}")


def adaptive_simpson(f, a: float, b: float, abs_tol: float = 1e-10, max_depth: int = 40) -> float:
    """Adaptive Simpson with Richardson correction, refined breadth-first.

    ``f`` is called on arrays of abscissae. Every interval gets a share of the
    tolerance proportional to its length; an interval that still fails at
    ``max_depth`` raises :class:`QuadratureError`.
    """
    if b <= a:
        return 0.0
    x = np.array([a, 0.5 * (a + b), b])
    fx = np.asarray(f(x), dtype=float)
    lo = np.array([a])
    hi = np.array([b])
    flo, fmid, fhi = fx[:1], fx[1:2], fx[2:]
    whole = (b - a) / 6.0 * (flo + 4.0 * fmid + fhi)
    total = 0.0
    for depth in range(max_depth + 1):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        vals = np.asarray(f(np.concatenate([lm, rm])), dtype=float)
        flm, frm = vals[: len(lo)], vals[len(lo):]
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        diff = left + right - whole
        if not np.all(np.isfinite(diff)):
            raise QuadratureError("integrand is not finite on the panel")
        tol = abs_tol * (hi - lo) / (b - a)
        done = np.abs(diff) <= 15.0 * tol
        total += float(np.sum((left + right + diff / 15.0)[done]))
        if np.all(done):
            return total
        if depth == max_depth:
            worst = int(np.argmax(np.abs(diff) * ~done))
            raise QuadratureError(
                f"adaptive Simpson did not converge within depth {max_depth} near r={float(mid[worst])!r}"
            )
        keep = ~done
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        flo, flm, fmid, frm, fhi = flo[keep], flm[keep], fmid[keep], frm[keep], fhi[keep]
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        whole = np.concatenate([left[keep], right[keep]])
        flo, fmid, fhi = np.concatenate([flo, fmid]), np.concatenate([flm, frm]), np.concatenate([fmid, fhi])
    return total


def gauss_legendre_composite(f, a: float, b: float, panels: int = 8, order: int = 20, grade: bool = False) -> float:
    """Composite Gauss-Legendre; ``grade`` clusters panels geometrically toward ``a``."""
    if b <= a:
        return 0.0
    if grade:
        edges = a + (b - a) * np.concatenate([[0.0], 2.0 ** -np.arange(panels - 1, -1, -1, dtype=float)])
    else:
        edges = np.linspace(a, b, panels + 1)
    xg, wg = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * wg
    return float(np.sum(w * np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)))


def radial_integrand(F: IntegrandHandle, rho: RadialProfile, n: int, conjugate: bool = False, piece=None):
    """``r -> n F(D phi(r)) r^{n-1}`` evaluated on the diagonal representative.

    With ``piece`` given, that piece's closed form is used on its closed
    interval, so panel endpoints at knots see the one-sided values.
    """

    def g(r):
        r = np.asarray(r, dtype=float)
        lam = _spectrum_lambda(rho, r, n, conjugate, piece)
        D = np.zeros(lam.shape + (n,))
        idx = np.arange(n)
        D[..., idx, idx] = lam
        return n * evaluate(F, D) * r ** (n - 1)

    return g


def radial_energy(
    F: IntegrandHandle,
    rho: RadialProfile,
    n: int | None = None,
    conjugate: bool = False,
    quad: QuadratureSpec | None = None,
) -> float:
    """Ball average of ``F(D phi)`` (``F(D phi_bar)`` with ``conjugate``)."""
    n = n if n is not None else F.n
    if n is None:
        raise ValueError("dimension unknown; pass n")
    quad = quad or QuadratureSpec()
    if quad.knot_aware:
        panels = [(p.lo, p.hi, radial_integrand(F, rho, n, conjugate, p)) for p in rho.pieces]
    else:
        panels = [(0.0, 1.0, radial_integrand(F, rho, n, conjugate))]
    total = 0.0
    for k, (a, b, g) in enumerate(panels):
        a = max(a, OPEN_START)
        share = quad.abs_tol * (b - a)
        if quad.method == "adaptive-simpson":
            total += adaptive_simpson(g, a, b, share, quad.max_depth)
        else:
            total += gauss_legendre_composite(g, a, b, quad.panels, quad.order, grade=(k == 0))
    return total


# --------------------------------------------------------------------------
# profile grammar


_PIECE_RE = re.compile(r"^(lin|pow)(?::(?:b=|alpha=)?(.+))?$")


def parse_profile(text: str) -> RadialProfile:
    """Parse ``identity``, ``power:alpha=A``, ``power:alpha=A@thm41`` or ``pw:[(r, piece), ...]``.

    Pieces are ``lin``, ``lin:b=SLOPE`` or ``pow:ALPHA``.
    """
    s = text.strip()
    try:
        if s == "identity":
            return RadialProfile.identity()
        m = re.fullmatch(r"power:alpha=([^@]+)(@thm41)?", s)
        if m:
            alpha = float(m.group(1))
            return RadialProfile.thm41(alpha) if m.group(2) else RadialProfile.power(alpha)
        if s.startswith("pw:"):
            body = s[3:].strip()
            # quote bare piece tokens so the list is a Python literal
            quoted = re.sub(r"(?<=,)\s*((?:lin|pow)[^)\]]*)", lambda mm: repr(mm.group(1).strip()), body)
            items = ast.literal_eval(quoted)
            spec = []
            for hi, token in items:
                pm = _PIECE_RE.match(token)
                if not pm:
                    raise DescriptorError(f"bad piece {token!r}")
                spec.append((float(hi), pm.group(1), None if pm.group(2) is None else float(pm.group(2))))
            rho = RadialProfile.piecewise(spec)
            return RadialProfile(rho.pieces, label=s)
    except DescriptorError:
        raise
    except (ValueError, SyntaxError, TypeError) as exc:
        raise DescriptorError(f"cannot parse profile {text!r}: {exc}") from exc
    raise DescriptorError(f"cannot parse profile {text!r}")


def describe_profile(rho: RadialProfile) -> str:
    if rho.label:
        return rho.label
    items = []
    for p in rho.pieces:
        if p.kind == "lin":
            token = "lin" if p.lo == 0.0 else f"lin:b={p.b!r}"
        else:
            token = f"pow:{p.alpha!r}"
        items.append(f"({p.hi!r},{token})")
    return "pw:[" + ",".join(items) + "]"


# --------------------------------------------------------------------------
# checks


def quasiaffinity_check(
    p: float, n: int, profiles, quad: QuadratureSpec | None = None, tol: float | None = None
) -> CheckReport:
    """Radial energies of ``B_p`` against ``B_p(Id)`` (``p <= n``) and ``B_p(Id_bar)`` (``p >= n``).

    Profiles failing the non-expanding condition are skipped and listed as
    not applicable. ``tol`` defaults to ``10 * quad.abs_tol``.
    """
    quad = quad or QuadratureSpec()
    tol = 10 * quad.abs_tol if tol is None else tol
    F = itg.burkholder(p, n)
    rows, resid, labels, skipped = [], [], [], []
    with Timer() as timer:
        for rho in profiles:
            if not nonexpanding_check(rho).passed:
                skipped.append(str(rho))
                continue
            branches = []
            if p <= n:
                branches.append((False, np.eye(n)))
            if p >= n:
                branches.append((True, mc.id_bar(n)))
            for conj, center in branches:
                energy = radial_energy(F, rho, n, conj, quad)
                target = float(evaluate(F, center))
                r = abs(energy - target)
                rows.append({"profile": str(rho), "conjugate": conj, "energy": energy, "target": target, "residual": r})
                resid.append(r)
                labels.append(f"{rho}{' (conjugate)' if conj else ''}")
    details = {"p": p, "n": n, "rows": rows, "not_applicable": skipped, "tol": tol}
    name = f"quasiaffinity[p={p!r},n={n}]"
    if not resid:
        return CheckReport(name, True, 0.0, None, 0, None, timer.elapsed, to_jsonable(details | {"status": "not-applicable"}))
    return summarize(name, np.array(resid), tol, {"profile": np.array(labels, dtype=object)}, None, timer.elapsed, to_jsonable(details))


def search_family(params: np.ndarray, pieces: int) -> RadialProfile:
    """Map unconstrained parameters to a piecewise profile.

    One linear piece from the origin followed by ``pieces - 1`` power pieces;
    knots lie in ``[0.05, 0.95]`` and exponents in ``[-3, 3]``.
    """
    m = pieces - 1
    raw_knots, raw_alpha = params[:m], params[m: 2 * m]
    knots = np.sort(0.05 + 0.9 / (1.0 + np.exp(-raw_knots)))
    # keep knots strictly increasing
    for i in range(1, m):
        knots[i] = max(knots[i], knots[i - 1] + 1e-6)
    alphas = 3.0 * np.tanh(raw_alpha)
    ends = list(knots) + [1.0]
    spec = [(ends[0], "lin", None)] + [(ends[i + 1], "pow", alphas[i]) for i in range(m)]
    return RadialProfile.piecewise(spec)


def radial_quasiconvexity_search(
    F: IntegrandHandle,
    n: int | None = None,
    at: str = "Id",
    pieces: int = 3,
    restarts: int = 20,
    maxiter: int = 300,
    seed: int = 42,
    tol: float = 1e-7,
    threads: int = 1,
    quad: QuadratureSpec | None = None,
) -> CheckReport:
    """Minimize ``radial_energy(F, rho) - F(at)`` over a piecewise-power family.

    ``at`` is ``"Id"`` or ``"Id-bar"`` (the latter uses conjugate stretchings).
    A gap below ``-tol * max(1, |F(at)|)`` refutes rank-one convexity.
    """
    n = n if n is not None else F.n
    if n is None:
        raise ValueError("dimension unknown; pass n")
    if not 2 <= pieces <= 4:
        raise ValueError("pieces must be in 2..4")
    if at not in ("Id", "Id-bar"):
        raise ValueError("at must be 'Id' or 'Id-bar'")
    conj = at == "Id-bar"
    center = mc.id_bar(n) if conj else np.eye(n)
    f0 = float(evaluate(F, center))
    quad = quad or QuadratureSpec("gauss-legendre-composite", panels=6, order=16)
    dim = 2 * (pieces - 1)

    def gap(z):
        try:
            rho = search_family(np.asarray(z), pieces)
            with np.errstate(all="ignore"):
                e = radial_energy(F, rho, n, conj, quad)
        except (ValueError, QuadratureError):
            return math.inf
        return e - f0 if math.isfinite(e) else math.inf

    def run(start):
        rng = chunk_rng(seed, start)
        z0 = rng.normal(0.0, 1.0, dim)
        r = optimize.minimize(gap, z0, method="Nelder-Mead", options={"maxiter": maxiter, "xatol": 1e-8, "fatol": 1e-12})
        return float(r.fun), r.x

    with Timer() as timer:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, range(restarts)))
        else:
            results = [run(s) for s in range(restarts)]
    gaps = np.array([g for g, _ in results])
    k = int(np.argmin(gaps))
    best = search_family(results[k][1], pieces)
    scale = max(1.0, abs(f0))
    worst = -gaps[k] / scale
    passed = worst <= tol
    witness = None if passed else {"profile": describe_profile(best), "gap": gaps[k]}
    return CheckReport(
        name=f"radial-quasiconvexity[{itg.describe(F)} at {at}]",
        passed=passed,
        worst_residual=worst,
        witness=to_jsonable(witness) if witness else None,
        samples=restarts,
        seed=seed,
        elapsed=timer.elapsed,
        details=to_jsonable({"min_gap": gaps[k], "best_profile": describe_profile(best), "F_at": f0}),
        residuals=-gaps / scale,
    )


def extremality_scan(
    F: IntegrandHandle,
    p: float,
    n: int,
    quad: QuadratureSpec | None = None,
    grid: int = 201,
    tol: float = 1e-10,
    alphas=(-1.0, -0.5, 0.0, 0.5, 1.0),
) -> CheckReport:
    """``B_p <= F`` on the segment ``diag(1, ..., 1, s)``, ``s in [-1, 1]``.

    The normalization ``F(Id) = B_p(Id)`` (``p <= n``) or
    ``F(Id_bar) = B_p(Id_bar)`` (``p >= n``) is verified first. Radial energies
    of ``F`` along the given profiles must also dominate ``B_p`` at the center.
    """
    quad = quad or QuadratureSpec()
    B = itg.burkholder(p, n)
    checks = []
    if p <= n:
        checks.append((np.eye(n), False))
    if p >= n:
        checks.append((mc.id_bar(n), True))
    for center, _ in checks:
        fb, ff = float(evaluate(B, center)), float(evaluate(F, center))
        if abs(fb - ff) > 1e-12 * max(1.0, abs(fb)):
            raise NormalizationMismatch(f"F={ff!r} but B_p={fb!r} at {center.tolist()}")
    with Timer() as timer:
        s = np.linspace(-1.0, 1.0, grid)
        D = np.zeros((grid, n, n))
        D[:, np.arange(n - 1), np.arange(n - 1)] = 1.0
        D[:, -1, -1] = s
        fb = evaluate(B, D)
        ff = evaluate(F, D)
        resid = (fb - ff) / np.maximum(1.0, np.abs(ff))
        radial_rows = []
        for center, conj in checks:
            target = float(evaluate(B, center))
            for a in alphas:
                rho = RadialProfile.thm41(a)
                e = radial_energy(F, rho, n, conj, quad)
                radial_rows.append({"profile": str(rho), "conjugate": conj, "energy": e, "B_p": target})
        radial_resid = np.array([(r["B_p"] - r["energy"]) / max(1.0, abs(r["B_p"])) for r in radial_rows])
    all_resid = np.concatenate([resid, radial_resid - 10 * quad.abs_tol])
    inputs = {"s": np.concatenate([s, np.full(len(radial_rows), np.nan)])}
    return summarize(
        f"extremality[{itg.describe(F)} vs burkholder p={p!r}]",
        all_resid,
        tol,
        inputs,
        None,
        timer.elapsed,
        details=to_jsonable({"radial": radial_rows}),
    )
