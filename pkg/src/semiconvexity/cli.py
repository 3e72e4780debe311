"""Command-line front end: ``semiconvexity {eval, check, reproduce}``.

Exit codes: 0 pass, 1 check failed, 2 usage or parse error, 3 domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import checks as ck
from . import integrands as itg
from . import matrixcore as mc
from . import radial as rd
from . import reproduce as rp
from .errors import (
    DescriptorError,
    DomainError,
    FDFailure,
    NormalizationMismatch,
    ParameterError,
    PreconditionViolation,
)
from .report import CheckReport, to_jsonable

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
SUITES = ("roc", "be", "mono", "pc-point", "radial-qc", "symmetry")


class UsageError(Exception):
    pass


def parse_matrix(text: str | None, n: int | None) -> np.ndarray:
    """``Id``, ``Id-bar`` or a flat row-major list ``a,b,c,d``."""
    if text is None or text in ("Id", "Id-bar"):
        if n is None:
            raise UsageError("--n is required with Id / Id-bar")
        return mc.id_bar(n) if text == "Id-bar" else np.eye(n)
    try:
        vals = [float(x) for x in text.replace(";", ",").replace(" ", ",").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"cannot parse matrix {text!r}") from exc
    k = int(round(len(vals) ** 0.5))
    if n is None:
        n = k
    if len(vals) != n * n or n < 2:
        raise UsageError(f"expected {n * n if n else 'n^2'} entries for an {n}x{n} matrix, got {len(vals)}")
    return np.array(vals).reshape(n, n)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SEMICONVEXITY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"SEMICONVEXITY_SEED={env!r} is not an integer") from exc
    return 42


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"{text!r} is not a valid {kind.__name__}") from exc
        if v <= 0:
            raise argparse.ArgumentTypeError(f"{text!r} must be positive")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 42 or $SEMICONVEXITY_SEED)")
    common.add_argument("--samples", type=_positive(int), default=None)
    common.add_argument("--tol", type=_positive(float), default=None)
    common.add_argument("--quad-tol", type=_positive(float), default=1e-10)
    common.add_argument("--output", choices=("json", "csv", "table"), default="json")
    common.add_argument("--threads", type=_positive(int), default=1)
    common.add_argument("--at", default=None, help="matrix: Id, Id-bar or flat row-major entries")
    common.add_argument("--p", type=float, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="include wall time in reports")

    parser = argparse.ArgumentParser(prog="semiconvexity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("eval", parents=[common], help="evaluate an integrand at a matrix")
    ev.add_argument("integrand")
    ev.add_argument("matrix", nargs="?", default=None, help="flat row-major entries (alternative to --at)")
    ev.add_argument("--decompose", action="store_true", help="also print conformal coordinates and signed spectrum")
    ch = sub.add_parser("check", parents=[common], help="run a check suite")
    ch.add_argument("suite", choices=SUITES)
    ch.add_argument("integrand")
    re_ = sub.add_parser("reproduce", parents=[common], help="run a scripted reproduction")
    re_.add_argument("id", choices=sorted(rp.REGISTRY) + ["all"])
    return parser


# --------------------------------------------------------------------------
# rendering


def _render_report(rep: CheckReport, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return json.dumps(rep.to_dict(timing=timing), sort_keys=True, indent=2)
    if fmt == "csv":
        return rep.histogram_csv()
    d = rep.to_dict(timing=timing)
    lines = [
        f"{d['name']}: {'PASS' if d['passed'] else 'FAIL'}",
        f"  worst residual  {d['worst_residual']:.6g}",
        f"  samples         {d['samples']}",
        f"  seed            {d['seed']}",
    ]
    if d.get("witness") is not None:
        lines.append("  witness         " + json.dumps(d["witness"], sort_keys=True))
    for k, v in sorted(d.get("details", {}).items()):
        lines.append(f"  {k:<15} {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def _fmt_cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _render_bundles(bundles, fmt: str, timing: bool) -> str:
    if fmt == "json":
        payload = [b.to_dict() for b in bundles]
        if not timing:
            return json.dumps(payload[0] if len(payload) == 1 else payload, sort_keys=True, indent=2)
        for b, d in zip(bundles, payload):
            d["checks"] = [rep.to_dict(timing=True) for rep in b.reports]
        return json.dumps(payload[0] if len(payload) == 1 else payload, sort_keys=True, indent=2)
    cols = ["quantity", "expected", "computed", "residual", "tol", "status"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id"] + cols)
        for b in bundles:
            for r in b.to_dict()["rows"]:
                w.writerow([b.id] + [r[c] for c in cols])
        return buf.getvalue().rstrip("\n")
    out = []
    for b in bundles:
        rows = [[_fmt_cell(r[c]) for c in cols] for r in b.to_dict()["rows"]]
        widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(cols)]
        out.append(f"{b.id}: {b.title} [{'PASS' if b.passed else 'FAIL'}]")
        out.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            out.append("  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
        errata = [r for r in b.rows if r["status"] == "erratum"]
        for r in errata:
            out.append(f"  erratum: {r['quantity']}: {r.get('note', '')}")
        out.append("")
    return "\n".join(out).rstrip("\n")


# --------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    F = itg.parse(args.integrand)
    text = args.matrix if args.matrix is not None else args.at
    n = args.n if args.n is not None else F.n
    A = parse_matrix(text, n)
    value = float(itg.evaluate(F, A))
    out = {"integrand": itg.describe(F), "matrix": A, "value": value}
    if args.decompose:
        spec = mc.signed_singular_values(A)
        _, _, coords = mc.conformal_parts(A)
        out["signed_singular_values"] = spec.lam
        out["partial_products"] = spec.sigma
        out["conformal"] = {"plus_norm": coords.plus_norm, "minus_norm": coords.minus_norm, "t": coords.t, "d": coords.d}
    out = to_jsonable(out)
    if args.output == "json":
        print(json.dumps(out, sort_keys=True, indent=2))
    elif args.output == "csv":
        print("integrand,value")
        print(f"{out['integrand']},{value!r}")
    else:
        print(f"{out['integrand']} = {value!r}")
        for k in ("signed_singular_values", "partial_products", "conformal"):
            if k in out:
                print(f"  {k}: {json.dumps(out[k], sort_keys=True)}")
    return EXIT_PASS


def run_check(suite: str, F, args) -> CheckReport:
    seed = _seed(args)
    samples = args.samples
    threads = args.threads
    tol = args.tol
    n = args.n if args.n is not None else F.n
    if n is None:
        raise UsageError(f"{itg.describe(F)} has no dimension; pass --n")

    def kw(default_samples, default_tol):
        return {"samples": samples or default_samples, "seed": seed, "tol": tol or default_tol}

    if suite == "roc":
        return ck.rank_one_convexity_scan(F, n=n, threads=threads, **kw(100_000, 1e-7))
    if suite == "be":
        if F.n is None:
            raise UsageError("be needs an integrand with a fixed dimension")
        return ck.baker_ericksen_sweep(F, threads=threads, **kw(10_000, 1e-6))
    if suite == "mono":
        if F.n is None:
            raise UsageError("mono needs an integrand with a fixed dimension")
        return ck.monotonicity_sweep(F, threads=threads, **kw(10_000, 1e-9))
    if suite == "symmetry":
        homog = F.p is not None
        return itg.symmetry_probe(F, samples or 1000, seed, tol or 1e-10, check_homogeneity=homog)
    if suite == "radial-qc":
        at = args.at or "Id"
        if at not in ("Id", "Id-bar"):
            raise UsageError("radial-qc supports --at Id or --at Id-bar")
        quad = rd.QuadratureSpec("gauss-legendre-composite", panels=6, order=16)
        return rd.radial_quasiconvexity_search(F, n, at, seed=seed, tol=tol or 1e-7, threads=threads,
                                               restarts=samples or 20, quad=quad)
    if suite == "pc-point":
        A = parse_matrix(args.at or "Id", n)
        p = F.p
        if F.kind == "burkholder_plus" and p is not None and p >= n:
            scale = float(itg.evaluate(F, np.eye(n)))
            if np.allclose(A, np.eye(n)):
                return ck.polyconvexity_certificate_check(
                    F, A, ck.det_plus_certificate(p, n, scale), threads=threads, **kw(100_000, 1e-9)
                )
        dec = ck.polyconvexity_violation_search(F, A, seed=seed, tol=tol or 1e-9)
        name = f"polyconvexity-at-point[{itg.describe(F)}]"
        if dec is None:
            return CheckReport(name, True, 0.0, None, 1, seed, 0.0, {"result": "no violation found (not a proof)"})
        gap = dec.jensen_gap(F)
        scale = max(1.0, abs(float(itg.evaluate(F, A))))
        return CheckReport(
            name, False, -gap / scale, dec.to_dict() | {"jensen_gap": gap}, len(dec.weights), seed, 0.0,
            to_jsonable({"minors_residual": float(np.max(np.abs(dec.minors_residual())))}),
        )
    raise UsageError(f"unknown suite {suite!r}")


def cmd_check(args) -> int:
    F = itg.parse(args.integrand)
    rep = run_check(args.suite, F, args)
    print(_render_report(rep, args.output, args.timing))
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_reproduce(args) -> int:
    cfg = rp.RunConfig(seed=_seed(args), samples=args.samples, tol=args.tol, quad_tol=args.quad_tol,
                       threads=args.threads, p=args.p)
    ids = sorted(rp.REGISTRY) if args.id == "all" else [args.id]
    bundles = [rp.reproduce(i, cfg) for i in ids]
    print(_render_bundles(bundles, args.output, args.timing))
    return EXIT_PASS if all(b.passed for b in bundles) else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    handlers = {"eval": cmd_eval, "check": cmd_check, "reproduce": cmd_reproduce}
    try:
        return handlers[args.command](args)
    except (UsageError, DescriptorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ParameterError, PreconditionViolation, NormalizationMismatch, FDFailure) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
