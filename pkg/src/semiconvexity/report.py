"""Check reports and deterministic chunked sampling.

A :class:`CheckReport` always stores ``worst_residual`` with "larger is
worse" semantics: for an inequality ``lhs <= rhs`` the residual is the scaled
excess ``lhs - rhs``, for an identity it is the scaled absolute error. A check
passes when ``worst_residual <= tol``.
"""
from __future__ import annotations

import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

CHUNK_SIZE = 4096


def to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if np.isnan(x):
            return "nan"
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    return obj


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_residual: float
    witness: dict | None = None
    samples: int = 0
    seed: int | None = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)
    residuals: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.worst_residual = float(self.worst_residual)
        if not self.passed and self.witness is None:
            raise ValueError(f"failed check {self.name!r} must carry a witness")

    def __bool__(self):
        return self.passed

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "witness": self.witness,
            "samples": int(self.samples),
            "seed": self.seed,
            # wall time breaks byte-identical output, so it is opt-in
            "elapsed_s": round(self.elapsed, 6) if timing else None,
        }
        if self.details:
            out["details"] = self.details
        return to_jsonable(out)

    def to_json(self, timing: bool = False, **kw) -> str:
        kw.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(timing=timing), **kw)

    def histogram_csv(self, bins: int = 50) -> str:
        """Histogram of the per-sample residuals as CSV (``lo,hi,count``)."""
        if self.residuals is None or len(self.residuals) == 0:
            return "lo,hi,count\n"
        r = np.asarray(self.residuals, dtype=float)
        r = r[np.isfinite(r)]
        counts, edges = np.histogram(r, bins=bins)
        buf = io.StringIO()
        buf.write("lo,hi,count\n")
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            buf.write(f"{lo!r},{hi!r},{int(c)}\n")
        return buf.getvalue()


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Independent substream for a chunk, fixed by ``(seed, chunk index)``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(chunk)]))


def run_chunked(
    fn: Callable[[np.random.Generator, int], dict[str, np.ndarray]],
    samples: int,
    seed: int,
    threads: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> dict[str, np.ndarray]:
    """Run ``fn(rng, count)`` over fixed sample-index chunks and concatenate.

    Chunk boundaries depend only on ``samples`` and ``chunk_size``, never on
    ``threads``, so the merged arrays are bit-identical for any pool size.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    counts = [min(chunk_size, samples - s) for s in range(0, samples, chunk_size)]
    jobs = [(i, c) for i, c in enumerate(counts)]

    def work(job):
        i, c = job
        return fn(chunk_rng(seed, i), c)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    keys = parts[0].keys()
    return {k: np.concatenate([np.asarray(p[k]) for p in parts], axis=0) for k in keys}


def worst_index(residuals: np.ndarray) -> int:
    """Index of the largest residual; NaN counts as worst, ties go to the lowest index."""
    r = np.asarray(residuals, dtype=float)
    nan = np.isnan(r)
    if np.any(nan):
        return int(np.flatnonzero(nan)[0])
    return int(np.argmax(r))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def summarize(
    name: str,
    residuals: np.ndarray,
    tol: float,
    inputs: dict[str, Any],
    seed: int | None,
    elapsed: float = 0.0,
    details: dict | None = None,
    always_witness: bool = False,
) -> CheckReport:
    """Build a report from per-sample residuals; the witness is the worst sample."""
    residuals = np.asarray(residuals, dtype=float)
    k = worst_index(residuals)
    worst = residuals[k]
    passed = bool(worst <= tol)
    witness = None
    if not passed or always_witness:
        witness = {key: to_jsonable(np.asarray(val)[k]) for key, val in inputs.items()}
        witness["index"] = k
    return CheckReport(
        name=name,
        passed=passed,
        worst_residual=worst,
        witness=witness,
        samples=len(residuals),
        seed=seed,
        elapsed=elapsed,
        details=dict(details or {}),
        residuals=residuals,
    )
