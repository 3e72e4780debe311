"""Catalog of isotropic integrands on square matrices.

All integrands go through :func:`evaluate` (or calling the handle), which
broadcasts over stacks of matrices. Handles are immutable; transforms build
new handles that wrap the original lazily.

Descriptor grammar, used by the CLI and in reports::

    burkholder:p=1.5,n=2
    burkholder_plus:p=3,n=3
    det:n=3                      (the Burkholder integrand with p = n)
    det_plus:n=2
    det_plus_power:p=4,n=2,scale=1.5
    fp_aniso:p=3
    conf_norm_plus:n=3
    b_sharp
    hat(b_sharp)
    tilde(burkholder:p=4,n=2)
    plus(burkholder:p=3,n=3)
    pow(fp_aniso:p=2;q=1.5)
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import matrixcore as mc
from .errors import DescriptorError, DomainError, ParameterError, SingularHessianWarning
from .report import CheckReport, summarize, Timer

KINDS = (
    "burkholder",
    "burkholder_plus",
    "det",
    "det_plus",
    "det_plus_power",
    "fp_aniso",
    "conf_norm_plus",
    "conf_norm_minus",
    "b_sharp",
    "isotropic_profile",
    "custom",
    "transformed",
)
TRANSFORMS = ("hat", "tilde", "positive_part", "power_compose")


@dataclass(frozen=True)
class IsotropicProfile:
    """A symmetric, even function ``f`` of the signed singular values.

    ``f`` receives an array of shape ``(..., n)`` and returns shape ``(...)``.
    """

    f: Callable[[np.ndarray], np.ndarray]
    n: int
    p: float | None = None
    label: str = "profile"


@dataclass(frozen=True)
class IntegrandHandle:
    kind: str
    p: float | None = None
    n: int | None = None
    inner: "IntegrandHandle | None" = None
    transform: str | None = None
    q: float | None = None
    scale: float = 1.0
    func: Callable | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown integrand kind {self.kind!r}")
        if self.transform is not None and self.transform not in TRANSFORMS:
            raise ParameterError(f"unknown transform {self.transform!r}")
        _validate(self)

    def __call__(self, A):
        return evaluate(self, A)

    def __str__(self):
        return describe(self)


def _validate(F: IntegrandHandle):
    k, p, n = F.kind, F.p, F.n
    if k in ("burkholder", "burkholder_plus"):
        if p is None or n is None:
            raise ParameterError(f"{k} needs p and n")
        if n < 2:
            raise ParameterError("n must be at least 2")
        if p < n / 2:
            raise ParameterError(f"{k} requires p >= n/2, got p={p}, n={n}")
    elif k == "det_plus_power":
        if p is None or n is None or p < n:
            raise ParameterError("det_plus_power requires p >= n")
        if F.scale < 0:
            raise ParameterError("det_plus_power requires scale >= 0")
    elif k == "fp_aniso":
        if n != 2:
            raise ParameterError("fp_aniso is defined on 2x2 matrices")
        if p is None or p < 2:
            raise ParameterError("fp_aniso requires p >= 2")
    elif k == "b_sharp":
        if n != 2:
            raise ParameterError("b_sharp is defined on 2x2 matrices")
    elif k in ("isotropic_profile", "custom"):
        if F.func is None or n is None:
            raise ParameterError(f"{k} needs a callable and n")
    elif k == "transformed":
        if F.inner is None or F.transform is None:
            raise ParameterError("transformed handles need inner and transform")
        if F.transform == "power_compose" and (F.q is None or F.q < 1):
            raise ParameterError("power_compose needs q >= 1")


# --------------------------------------------------------------------------
# constructors


def burkholder(p: float, n: int) -> IntegrandHandle:
    return IntegrandHandle("burkholder", p=float(p), n=int(n))


def burkholder_plus(p: float, n: int) -> IntegrandHandle:
    return IntegrandHandle("burkholder_plus", p=float(p), n=int(n))


def determinant(n: int) -> IntegrandHandle:
    return IntegrandHandle("det", p=float(n), n=int(n))


def det_plus(n: int) -> IntegrandHandle:
    return IntegrandHandle("det_plus", p=float(n), n=int(n))


def det_plus_power(p: float, n: int, scale: float = 1.0) -> IntegrandHandle:
    return IntegrandHandle("det_plus_power", p=float(p), n=int(n), scale=float(scale))


def fp_aniso(p: float) -> IntegrandHandle:
    return IntegrandHandle("fp_aniso", p=float(p), n=2)


def conf_norm(n: int, sign: str = "+") -> IntegrandHandle:
    kind = "conf_norm_plus" if sign in ("+", "plus") else "conf_norm_minus"
    return IntegrandHandle(kind, p=n / 2.0, n=int(n))


def b_sharp() -> IntegrandHandle:
    return IntegrandHandle("b_sharp", p=2.0, n=2)


def from_profile(profile: IsotropicProfile) -> IntegrandHandle:
    return IntegrandHandle(
        "isotropic_profile", p=profile.p, n=profile.n, func=profile.f, label=profile.label
    )


def custom(func: Callable, n: int, p: float | None = None, label: str = "custom") -> IntegrandHandle:
    """Wrap an arbitrary (not necessarily isotropic) batched integrand ``func(A)``."""
    return IntegrandHandle("custom", p=p, n=int(n), func=func, label=label)


def hat_transform(F: IntegrandHandle) -> IntegrandHandle:
    """``A -> F(A^{-1}) det A`` on ``det A > 0``."""
    p = None if F.p is None or F.n is None else F.n - F.p
    return IntegrandHandle("transformed", p=p, n=F.n, inner=F, transform="hat")


def tilde_transform(F: IntegrandHandle) -> IntegrandHandle:
    """``A -> F(Id_bar A)``."""
    return IntegrandHandle("transformed", p=F.p, n=F.n, inner=F, transform="tilde")


def positive_part(F: IntegrandHandle) -> IntegrandHandle:
    return IntegrandHandle("transformed", p=F.p, n=F.n, inner=F, transform="positive_part")


def power_compose(F: IntegrandHandle, q: float) -> IntegrandHandle:
    """``A -> max(F(A), 0)^q``; convex non-decreasing outer map for ``q >= 1``."""
    p = None if F.p is None else F.p * q
    return IntegrandHandle("transformed", p=p, n=F.n, inner=F, transform="power_compose", q=float(q))


# --------------------------------------------------------------------------
# closed-form integrands


def burkholder_eval(A, p: float) -> np.ndarray:
    """``(|1 - n/p| |A|^n + det A) |A|^{p-n}``, continuously extended by 0 at 0."""
    A = mc.as_matrix(A)
    n = A.shape[-1]
    if p < n / 2:
        raise ParameterError(f"burkholder requires p >= n/2, got p={p}, n={n}")
    nrm = mc.operator_norm(A)
    dA = mc.det(A)
    safe = np.where(nrm > 0, nrm, 1.0)
    val = abs(1.0 - n / p) * safe**p + dA * safe ** (p - n)
    return np.where(nrm > 0, val, 0.0)


def burkholder_alt(A, p: float) -> np.ndarray:
    """2x2 Burkholder integrand through the conformal coordinates.

    ``(2/p) ((p-1)|A^+| - |A^-|) |A|^{p-1}``, valid for ``p > 2``.
    """
    A = mc.as_matrix(A)
    if A.shape[-1] != 2:
        raise ParameterError("burkholder_alt is the 2x2 form")
    if p <= 2:
        raise ParameterError("burkholder_alt requires p > 2")
    c = mc.conformal_norms(A)
    nrm = mc.operator_norm(A)
    return (2.0 / p) * ((p - 1.0) * c.plus_norm - c.minus_norm) * nrm ** (p - 1.0)


def det_plus_power_eval(A, p: float, n: int, scale: float = 1.0) -> np.ndarray:
    """``scale * max(det A, 0)^{p/n}``, a convex function of the determinant for ``p >= n``."""
    if p < n:
        raise ParameterError("det_plus_power requires p >= n")
    if scale < 0:
        raise ParameterError("scale must be non-negative")
    A = mc.as_matrix(A)
    if A.shape[-1] != n:
        raise ParameterError(f"expected {n}x{n} matrices")
    return scale * np.maximum(mc.det(A), 0.0) ** (p / n)


def fp_aniso_eval(A, p: float) -> np.ndarray:
    """``(a^+ d^+ + (b^2 + c^2)/2)^{p/2}`` for ``A = [[a, b], [c, d]]``."""
    if p < 2:
        raise ParameterError("fp_aniso requires p >= 2")
    A = mc.as_matrix(A)
    if A.shape[-1] != 2:
        raise ParameterError("fp_aniso is defined on 2x2 matrices")
    a, b, c, d = A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1]
    base = np.maximum(a, 0.0) * np.maximum(d, 0.0) + 0.5 * (b * b + c * c)
    return base ** (p / 2.0)


def b_sharp_eval(A) -> np.ndarray:
    """``(|A|^2 + det A log |A|^2) / 2`` on ``det A > 0`` (natural log)."""
    A = mc.as_matrix(A)
    if A.shape[-1] != 2:
        raise ParameterError("b_sharp is defined on 2x2 matrices")
    dA = mc.det(A)
    if np.any(dA <= 0):
        raise DomainError("b_sharp requires det A > 0")
    nrm2 = mc.operator_norm(A) ** 2
    return 0.5 * (nrm2 + dA * np.log(nrm2))


def b_sharp_limit(A, p: float) -> np.ndarray:
    """Difference quotient ``(B_p^+(A) - det A)/(p - 2)``; tends to ``b_sharp`` as ``p -> 2+``."""
    if p <= 2:
        raise ParameterError("the limit quotient needs p > 2")
    A = mc.as_matrix(A)
    dA = mc.det(A)
    if np.any(dA <= 0):
        raise DomainError("b_sharp_limit requires det A > 0")
    return (np.maximum(burkholder_eval(A, p), 0.0) - dA) / (p - 2.0)


def hat_b_sharp_closed_form(A) -> np.ndarray:
    """``(|A|^2/det + log(|A|^2/det) - log det) / 2``."""
    A = mc.as_matrix(A)
    dA = mc.det(A)
    if np.any(dA <= 0):
        raise DomainError("requires det A > 0")
    nrm2 = mc.operator_norm(A) ** 2
    return 0.5 * (nrm2 / dA + np.log(nrm2 / dA) - np.log(dA))


def _inverse(A):
    n = A.shape[-1]
    if n in (2, 3):
        return np.swapaxes(mc.cofactor(A), -1, -2) / mc.det(A)[..., None, None]
    return np.linalg.inv(A)


# --------------------------------------------------------------------------
# the function h(t, d) on the conformal coordinates t = |A^-|, d = det A (n = 2)


def _is_array(x):
    return isinstance(x, np.ndarray)


def _any(cond) -> bool:
    return bool(np.any(cond)) if _is_array(cond) else bool(cond)


def _check_p(p):
    if p <= 2:
        raise ParameterError("h is defined for p > 2")


def _root(t, d):
    # generic arithmetic so mpmath numbers pass through unchanged
    return (t * t + d) ** 0.5


def h_eval(t, d, p: float):
    """``((1 - 2/p) u^2 + d) u^{p-2}`` with ``u = t + sqrt(t^2 + d)``, on ``S``.

    ``S = {t >= 0, t^2 + d >= 0}``. Accepts floats, arrays or mpmath numbers.
    """
    _check_p(p)
    if _is_array(t) or _is_array(d):
        t, d = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(d, dtype=float))
    if _any(t < 0) or _any(t * t + d < 0):
        raise DomainError("h is defined on {t >= 0, t^2 + d >= 0}")
    u = t + _root(t, d)
    return ((1 - 2 / p) * u * u + d) * u ** (p - 2)


def h_gradient(t, d, p: float):
    """``(dh/dt, dh/dd) = (2(p-2) u^{p-1}, (p-1) u^{p-2})``."""
    _check_p(p)
    if _any(t < 0) or _any(t * t + d < 0):
        raise DomainError("h is defined on {t >= 0, t^2 + d >= 0}")
    u = t + _root(t, d)
    return 2 * (p - 2) * u ** (p - 1), (p - 1) * u ** (p - 2)


def h_hessian(t, d, p: float):
    """Closed-form second derivatives of ``h``, shape ``(..., 2, 2)``.

    With ``s = sqrt(t^2 + d)``, ``u = t + s`` and ``k = (p-1)(p-2)/s``:
    ``h_tt = 2 k u^{p-1}``, ``h_td = k u^{p-2}``, ``h_dd = k u^{p-3} / 2``.
    The determinant vanishes identically. Unbounded where ``t^2 + d = 0``.
    """
    _check_p(p)
    if _any(t < 0) or _any(t * t + d < 0):
        raise DomainError("h is defined on {t >= 0, t^2 + d >= 0}")
    s = _root(t, d)
    singular = _any(s == 0)
    if singular:
        warnings.warn("Hessian of h is unbounded where t^2 + d = 0", SingularHessianWarning)
    u = t + s
    with np.errstate(divide="ignore", invalid="ignore"):
        if singular and not _is_array(s):
            k = math.inf
        else:
            k = (p - 1) * (p - 2) / s
        htt = 2 * k * u ** (p - 1)
        htd = k * u ** (p - 2)
        hdd = k * u ** (p - 3) / 2
    if _is_array(htt):
        row0 = np.stack([htt, htd], axis=-1)
        row1 = np.stack([htd, hdd], axis=-1)
        return np.stack([row0, row1], axis=-2)
    return np.array([[htt, htd], [htd, hdd]], dtype=object if not isinstance(htt, float) else float)


def s_prime_coefficient(p: float) -> float:
    """``p(p-2)/(p-1)^2``; ``S' = {t >= 0, coef t^2 + d >= 0}``."""
    return p * (p - 2) / (p - 1) ** 2


def h_plus_eval(t, d, p: float):
    """``h`` on ``S'`` and 0 elsewhere; defined for all ``t >= 0``."""
    _check_p(p)
    if _any(t < 0):
        raise DomainError("h_plus is defined for t >= 0")
    c = s_prime_coefficient(p)
    if _is_array(t) or _is_array(d):
        t, d = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(d, dtype=float))
        inside = c * t * t + d >= 0
        dd = np.where(inside, d, 0.0)
        val = h_eval(t, dd, p)
        return np.where(inside, val, 0.0)
    if c * t * t + d >= 0:
        return h_eval(t, d, p)
    return 0.0 * t


def conformal_coordinates(A):
    """``(t_A, d_A) = (|A^-|, det A)``."""
    c = mc.conformal_norms(A)
    return c.t, c.d


# --------------------------------------------------------------------------
# evaluation


def evaluate(F: IntegrandHandle, A) -> np.ndarray:
    """Evaluate ``F`` at ``A`` (a matrix or a stack of matrices)."""
    A = mc.as_matrix(A)
    n = A.shape[-1]
    if F.n is not None and F.n != n:
        raise ParameterError(f"{describe(F)} expects {F.n}x{F.n} matrices, got {n}x{n}")
    k = F.kind
    if k == "burkholder" or k == "det":
        return burkholder_eval(A, F.p)
    if k == "burkholder_plus":
        return np.maximum(burkholder_eval(A, F.p), 0.0)
    if k == "det_plus":
        return np.maximum(mc.det(A), 0.0)
    if k == "det_plus_power":
        return det_plus_power_eval(A, F.p, n, F.scale)
    if k == "fp_aniso":
        return fp_aniso_eval(A, F.p)
    if k == "conf_norm_plus":
        return mc.conformal_norms(A).plus_norm
    if k == "conf_norm_minus":
        return mc.conformal_norms(A).minus_norm
    if k == "b_sharp":
        return b_sharp_eval(A)
    if k == "isotropic_profile":
        return np.asarray(F.func(mc.signed_singular_values(A).lam), dtype=float)
    if k == "custom":
        return np.asarray(F.func(A), dtype=float)
    # transformed
    tr, inner = F.transform, F.inner
    if tr == "hat":
        dA = mc.det(A)
        if np.any(dA <= 0):
            raise DomainError("hat transform requires det A > 0")
        return evaluate(inner, _inverse(A)) * dA
    if tr == "tilde":
        return evaluate(inner, mc.id_bar(n) @ A)
    if tr == "positive_part":
        return np.maximum(evaluate(inner, A), 0.0)
    if tr == "power_compose":
        return np.maximum(evaluate(inner, A), 0.0) ** F.q
    raise ParameterError(f"cannot evaluate {F!r}")


def isotropic_eval(f: IsotropicProfile, A) -> np.ndarray:
    return np.asarray(f.f(mc.signed_singular_values(A).lam), dtype=float)


# --------------------------------------------------------------------------
# descriptors


def _fmt(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def describe(F: IntegrandHandle) -> str:
    k = F.kind
    if k in ("burkholder", "burkholder_plus"):
        return f"{k}:p={_fmt(F.p)},n={F.n}"
    if k in ("det", "det_plus", "conf_norm_plus", "conf_norm_minus"):
        return f"{k}:n={F.n}"
    if k == "det_plus_power":
        return f"det_plus_power:p={_fmt(F.p)},n={F.n},scale={_fmt(F.scale)}"
    if k == "fp_aniso":
        return f"fp_aniso:p={_fmt(F.p)}"
    if k == "b_sharp":
        return "b_sharp"
    if k in ("isotropic_profile", "custom"):
        return f"{k}<{F.label}>"
    inner = describe(F.inner)
    if F.transform == "hat":
        return f"hat({inner})"
    if F.transform == "tilde":
        return f"tilde({inner})"
    if F.transform == "positive_part":
        return f"plus({inner})"
    return f"pow({inner};q={_fmt(F.q)})"


_FUNC_RE = re.compile(r"^(hat|tilde|plus|pow)\((.*)\)$")
_ALLOWED_KEYS = {
    "burkholder": {"p", "n"},
    "burkholder_plus": {"p", "n"},
    "det": {"n"},
    "det_plus": {"n"},
    "det_plus_power": {"p", "n", "scale"},
    "fp_aniso": {"p"},
    "conf_norm_plus": {"n"},
    "conf_norm_minus": {"n"},
    "b_sharp": set(),
}


def _parse_params(text: str) -> dict[str, float]:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise DescriptorError(f"expected key=value, got {item!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        try:
            out[key] = float(val)
        except ValueError:
            raise DescriptorError(f"non-numeric value for {key!r}: {val!r}") from None
    return out


def parse(text: str) -> IntegrandHandle:
    """Parse a descriptor string into a handle (see the module docstring)."""
    s = text.strip().replace(" ", "")
    m = _FUNC_RE.match(s)
    if m:
        fname, body = m.groups()
        if fname == "pow":
            if ";" not in body:
                raise DescriptorError("pow(...) needs ';q=<exponent>'")
            body, tail = body.rsplit(";", 1)
            q = _parse_params(tail).get("q")
            if q is None:
                raise DescriptorError("pow(...) needs q")
            return power_compose(parse(body), q)
        inner = parse(body)
        return {"hat": hat_transform, "tilde": tilde_transform, "plus": positive_part}[fname](inner)
    name, _, params = s.partition(":")
    if name not in _ALLOWED_KEYS:
        raise DescriptorError(f"unknown integrand {name!r}")
    kw = _parse_params(params)
    extra = set(kw) - _ALLOWED_KEYS[name]
    if extra:
        raise DescriptorError(f"unexpected parameters for {name}: {sorted(extra)}")
    if "n" in kw:
        if not kw["n"].is_integer():
            raise DescriptorError("n must be an integer")
        kw["n"] = int(kw["n"])
    try:
        if name in ("burkholder", "burkholder_plus"):
            if "p" not in kw or "n" not in kw:
                raise DescriptorError(f"{name} needs p and n")
            return IntegrandHandle(name, p=kw["p"], n=kw["n"])
        if name == "det":
            return determinant(kw.get("n", 2))
        if name == "det_plus":
            return det_plus(kw.get("n", 2))
        if name == "det_plus_power":
            if "p" not in kw:
                raise DescriptorError("det_plus_power needs p")
            return det_plus_power(kw["p"], kw.get("n", 2), kw.get("scale", 1.0))
        if name == "fp_aniso":
            if "p" not in kw:
                raise DescriptorError("fp_aniso needs p")
            return fp_aniso(kw["p"])
        if name == "b_sharp":
            return b_sharp()
        return conf_norm(kw.get("n", 2), "+" if name == "conf_norm_plus" else "-")
    except ParameterError as exc:
        raise DescriptorError(str(exc)) from exc


# --------------------------------------------------------------------------
# symmetry probe


def symmetry_probe(
    F: IntegrandHandle,
    samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-10,
    box: float = 5.0,
    check_homogeneity: bool = True,
) -> CheckReport:
    """Sample ``F(QAR) = F(A)`` and ``F(tA) = t^p F(A)``; report the worst scaled residual."""
    n = F.n
    rng = np.random.default_rng(seed)
    with Timer() as timer:
        A = rng.uniform(-box, box, size=(samples, n, n))
        Q = mc.random_rotation(n, rng, samples)
        R = mc.random_rotation(n, rng, samples)
        t = rng.uniform(0.1, 5.0, size=samples)
        fA = evaluate(F, A)
        scale = np.maximum(1.0, np.abs(fA))
        iso = np.abs(evaluate(F, Q @ A @ R) - fA) / scale
        resid = iso
        hom = np.zeros_like(iso)
        if check_homogeneity and F.p is not None:
            tp = t**F.p
            hom = np.abs(evaluate(F, t[:, None, None] * A) - tp * fA) / np.maximum(1.0, tp * np.abs(fA))
            resid = np.maximum(iso, hom)
    return summarize(
        f"symmetry[{describe(F)}]",
        resid,
        tol,
        {"A": A, "Q": Q, "R": R, "t": t},
        seed,
        timer.elapsed,
        details={
            "worst_isotropy": float(np.max(iso)),
            "worst_homogeneity": float(np.max(hom)),
        },
    )
