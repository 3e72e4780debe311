"""Primitives on small square matrices.

Every function accepts either a single ``(n, n)`` array or a stack of shape
``(..., n, n)`` and broadcasts over the leading axes. Closed forms are used
for ``n = 2`` (and ``n = 3`` where cheap); larger sizes fall back to generic
routines.

Notation: ``|A|`` is the operator norm (largest singular value), ``cof(A)``
the cofactor matrix with ``cof(A) A^T = det(A) Id``.
"""
from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

__all__ = [
    "SignedSpectrum",
    "ConformalCoordinates",
    "UnsupportedDimension",
    "as_matrix",
    "det",
    "cofactor",
    "operator_norm",
    "jacobi_eigvalsh",
    "signed_singular_values",
    "conformal_parts",
    "conformal_norms",
    "is_conformal",
    "qco_membership",
    "minors_vector",
    "minors_dim",
    "random_rotation",
    "id_bar",
]


class UnsupportedDimension(ValueError):
    pass


@dataclass(frozen=True)
class SignedSpectrum:
    """Signed singular values ``lam`` and their partial products ``sigma``.

    ``lam[..., :-1]`` are non-negative and descending, ``|lam[..., -1]|`` is
    the smallest singular value and carries the sign of ``det A``.
    ``sigma[..., k] = lam[..., 0] * ... * lam[..., k]``.
    """

    lam: np.ndarray
    sigma: np.ndarray

    @classmethod
    def from_lambda(cls, lam) -> "SignedSpectrum":
        lam = np.asarray(lam, dtype=float)
        return cls(lam=lam, sigma=np.cumprod(lam, axis=-1))


@dataclass(frozen=True)
class ConformalCoordinates:
    plus_norm: np.ndarray
    minus_norm: np.ndarray
    t: np.ndarray
    d: np.ndarray


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {A.shape}")
    if A.shape[-1] < 2:
        raise ValueError("matrix dimension must be at least 2")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def id_bar(n: int) -> np.ndarray:
    """``diag(1, ..., 1, -1)``."""
    out = np.eye(n)
    out[-1, -1] = -1.0
    return out


def det(A) -> np.ndarray:
    A = as_matrix(A)
    n = A.shape[-1]
    if n == 2:
        return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    if n == 3:
        a = A[..., 0, :]
        b = A[..., 1, :]
        c = A[..., 2, :]
        return (
            a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
            - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
            + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
        )
    # LU with partial pivoting
    return np.linalg.det(A)


def cofactor(A) -> np.ndarray:
    A = as_matrix(A)
    n = A.shape[-1]
    if n == 2:
        out = np.empty_like(A)
        out[..., 0, 0] = A[..., 1, 1]
        out[..., 0, 1] = -A[..., 1, 0]
        out[..., 1, 0] = -A[..., 0, 1]
        out[..., 1, 1] = A[..., 0, 0]
        return out
    if n == 3:
        r0, r1, r2 = A[..., 0, :], A[..., 1, :], A[..., 2, :]
        return np.stack([np.cross(r1, r2), np.cross(r2, r0), np.cross(r0, r1)], axis=-2)
    out = np.empty_like(A)
    idx = np.arange(n)
    for i in range(n):
        for j in range(n):
            sub = A[..., idx != i, :][..., :, idx != j]
            out[..., i, j] = (-1) ** (i + j) * np.linalg.det(sub)
    return out


def _jacobi_single(S, rtol, max_sweeps):
    n = len(S)
    scale = abs(sum(S[i][i] for i in range(n))) or 1.0
    for _ in range(max_sweeps):
        off = math.sqrt(sum(S[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off < rtol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p][q]
                if apq == 0.0:
                    continue
                tau = (S[q][q] - S[p][p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau)) if abs(tau) < 1e150 else 0.5 / tau
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for row in S:
                    sp, sq = row[p], row[q]
                    row[p] = c * sp - s * sq
                    row[q] = s * sp + c * sq
                rp, rq = S[p], S[q]
                S[p] = [c * x - s * y for x, y in zip(rp, rq)]
                S[q] = [s * x + c * y for x, y in zip(rp, rq)]
    return sorted((S[i][i] for i in range(n)), reverse=True)


def jacobi_eigvalsh(S, rtol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of symmetric matrices by the cyclic Jacobi method.

    Sweeps stop once the off-diagonal Frobenius mass of every matrix in the
    stack is below ``rtol * trace`` (trace of ``|S|``). Returns eigenvalues
    in descending order.
    """
    S = np.array(S, dtype=float, copy=True)
    n = S.shape[-1]
    batch_shape = S.shape[:-2]
    if S.size == n * n:
        # single matrix: plain Python floats avoid per-rotation array overhead
        ev = np.array(_jacobi_single(S.reshape(n, n).tolist(), rtol, max_sweeps))
        return ev.reshape(batch_shape + (n,))
    S = S.reshape((-1, n, n))
    scale = np.abs(np.trace(S, axis1=-2, axis2=-1))
    scale = np.where(scale > 0, scale, 1.0)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(S[:, off_mask] ** 2, axis=-1))
        if np.all(off < rtol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                safe = np.where(active, apq, 1.0)
                # tau may overflow for negligible apq; t -> 0 is then correct
                with np.errstate(over="ignore"):
                    tau = (S[:, q, q] - S[:, p, p]) / (2.0 * safe)
                    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # S <- J^T S J with J the (p, q) plane rotation
                Sp = S[:, :, p].copy()
                Sq = S[:, :, q]
                S[:, :, p] = c[:, None] * Sp - s[:, None] * Sq
                S[:, :, q] = s[:, None] * Sp + c[:, None] * Sq
                Sp = S[:, p, :].copy()
                Sq = S[:, q, :]
                S[:, p, :] = c[:, None] * Sp - s[:, None] * Sq
                S[:, q, :] = s[:, None] * Sp + c[:, None] * Sq
    ev = np.diagonal(S, axis1=-2, axis2=-1)
    ev = -np.sort(-ev, axis=-1)
    return ev.reshape(batch_shape + (n,))


def _conformal_roots_2x2(A):
    """``(2|A^+|, 2|A^-|)`` for 2x2 matrices, computed without cancellation."""
    a, b, c, d = A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1]
    return np.hypot(a + d, b - c), np.hypot(a - d, b + c)


def _singular_values_desc(A) -> np.ndarray:
    n = A.shape[-1]
    if n == 2:
        rp, rm = _conformal_roots_2x2(A)
        s1 = 0.5 * (rp + rm)
        s2 = 0.5 * np.abs(rp - rm)
        return np.stack([s1, s2], axis=-1)
    ata = np.swapaxes(A, -1, -2) @ A
    ev = jacobi_eigvalsh(ata)
    return np.sqrt(np.clip(ev, 0.0, None))


def operator_norm(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[-1] == 2:
        rp, rm = _conformal_roots_2x2(A)
        return 0.5 * (rp + rm)
    return _singular_values_desc(A)[..., 0]


def signed_singular_values(A) -> SignedSpectrum:
    """Signed singular values of ``A``.

    The last entry is recomputed as ``det A / (lam_1 ... lam_{n-1})`` so that
    the full partial product reproduces the determinant to rounding; when the
    leading product vanishes the determinant is zero and the last entry is
    ``+0``.
    """
    A = as_matrix(A)
    sv = _singular_values_desc(A)
    if A.shape[-1] == 3:
        # sqrt of the small eigenvalues of A^T A loses ~sqrt(eps) |A|; the top
        # singular value of cof A is lam_1 lam_2 to full relative accuracy
        c12 = _singular_values_desc(cofactor(A))[..., 0]
        s1 = sv[..., 0]
        sv = sv.copy()
        sv[..., 1] = np.where(s1 > 0, c12 / np.where(s1 > 0, s1, 1.0), 0.0)
    dA = det(A)
    head = np.prod(sv[..., :-1], axis=-1)
    safe = np.where(head > 0, head, 1.0)
    last = np.where(head > 0, dA / safe, 0.0)
    # det == 0 keeps the + sign
    last = np.where(last == 0.0, 0.0, last)
    lam = np.concatenate([sv[..., :-1], last[..., None]], axis=-1)
    return SignedSpectrum.from_lambda(lam)


def conformal_norms(A) -> ConformalCoordinates:
    """``|A^+|``, ``|A^-|`` via ``1/2 (|A|^{n/2} +- |A|^{-n/2} det A)``."""
    A = as_matrix(A)
    n = A.shape[-1]
    nrm = operator_norm(A)
    dA = det(A)
    half = nrm ** (n / 2.0)
    safe = np.where(nrm > 0, nrm, 1.0)
    ratio = np.where(nrm > 0, dA / safe ** (n / 2.0), 0.0)
    plus = 0.5 * (half + ratio)
    minus = 0.5 * (half - ratio)
    # rounding can push a vanishing part a hair below zero
    plus = np.maximum(plus, 0.0)
    minus = np.maximum(minus, 0.0)
    return ConformalCoordinates(plus_norm=plus, minus_norm=minus, t=minus, d=dA)


def conformal_parts(A):
    """Conformal and anti-conformal parts ``(A^+, A^-, coords)``.

    ``A^+- = 1/2 (|A|^{(n-2)/2} A +- |A|^{(2-n)/2} cof(A))``, with zeros at
    ``A = 0``.
    """
    A = as_matrix(A)
    n = A.shape[-1]
    nrm = operator_norm(A)
    cof = cofactor(A)
    safe = np.where(nrm > 0, nrm, 1.0)
    w1 = np.where(nrm > 0, safe ** ((n - 2) / 2.0), 0.0)[..., None, None]
    w2 = np.where(nrm > 0, safe ** ((2 - n) / 2.0), 0.0)[..., None, None]
    plus = 0.5 * (w1 * A + w2 * cof)
    minus = 0.5 * (w1 * A - w2 * cof)
    return plus, minus, conformal_norms(A)


def _sign_value(sign) -> int:
    if sign in ("+", 1, +1, "plus"):
        return 1
    if sign in ("-", -1, "minus"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def is_conformal(A, sign="+", tol: float = 1e-10):
    """Membership in ``CO^+(n)`` (``sign='+'``) or ``CO^-(n)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = _sign_value(sign)
    A = as_matrix(A)
    n = A.shape[-1]
    nrm = operator_norm(A)
    resid = cofactor(A) - s * (nrm ** (n - 2))[..., None, None] * A
    resid = np.sqrt(np.sum(resid**2, axis=(-2, -1)))
    fro = np.sqrt(np.sum(A**2, axis=(-2, -1)))
    ok = resid <= tol * np.maximum(1.0, fro ** (n - 1))
    return ok & (s * det(A) >= -tol)


def qco_membership(A, K: float, sign="+"):
    """``|A|^n <= +-K det A``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    s = _sign_value(sign)
    A = as_matrix(A)
    n = A.shape[-1]
    return operator_norm(A) ** n <= s * K * det(A)


def minors_dim(n: int) -> int:
    if n == 2:
        return 5
    if n == 3:
        return 19
    raise UnsupportedDimension(f"minors vector is only implemented for n in (2, 3), got {n}")


def minors_vector(A) -> np.ndarray:
    """Vector of minors in a fixed order.

    ``n = 2``: ``(a11, a12, a21, a22, det)``.
    ``n = 3``: the 9 entries row-major, the 9 cofactor entries row-major,
    then ``det``.
    """
    A = as_matrix(A)
    n = A.shape[-1]
    minors_dim(n)
    flat = A.reshape(A.shape[:-2] + (n * n,))
    parts = [flat]
    if n == 3:
        parts.append(cofactor(A).reshape(A.shape[:-2] + (9,)))
    parts.append(det(A)[..., None])
    return np.concatenate(parts, axis=-1)


def random_rotation(n: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Haar-distributed samples from ``SO(n)``.

    QR of a Gaussian matrix, with the signs of ``R``'s diagonal folded into
    ``Q`` and one column flipped where needed to make ``det Q = +1``.
    """
    shape = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
    G = rng.standard_normal(shape + (n, n))
    Q, R = np.linalg.qr(G)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    Q = Q * d[..., None, :]
    flip = np.linalg.det(Q) < 0
    Q[..., :, 0] = np.where(flip[..., None], -Q[..., :, 0], Q[..., :, 0])
    return Q
