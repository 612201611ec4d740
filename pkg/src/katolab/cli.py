"""Command-line front end.

Subcommands: ``kappa``, ``constants``, ``verify``, ``equatorial``.

Exit status: 0 success, 1 I/O failure, 2 usage error, 3 inequality violation,
4 model input outside its valid range.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import closed_forms, equatorial_stability, pointwise_inequalities, regularity_constants
from .kato_search import SearchConfig, kappa_curve
from .output import RunManifest, csv_document, json_document, jsonable
from .tensor_core import Params

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION, EXIT_RANGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _p_values(args) -> list[float]:
    if args.p and args.p_min is not None:
        raise UsageError("give either --p or --p-min/--p-max/--p-steps, not both")
    if args.p:
        return list(args.p)
    if args.p_min is None or args.p_max is None or args.p_steps is None:
        raise UsageError("need --p, or all of --p-min, --p-max, --p-steps")
    if args.p_steps < 1:
        raise UsageError("--p-steps must be positive")
    if args.p_steps == 1:
        return [args.p_min]
    return np.linspace(args.p_min, args.p_max, args.p_steps).tolist()


def cmd_kappa(args) -> int:
    p_grid = _p_values(args)
    if args.n < 1 or args.d < 1:
        raise UsageError("--n and --d must be positive integers")
    if any(not p >= 1.0 for p in p_grid):
        raise UsageError("every p must be >= 1")
    if args.restarts < 1:
        raise UsageError("--restarts must be positive")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    cfg = SearchConfig(restarts=args.restarts, seed=args.seed)
    manifest = RunManifest("kappa", {"p": p_grid, "n": args.n, "d": args.d,
                                     "restarts": args.restarts, "format": args.format}, args.seed)
    curve = kappa_curve(args.n, args.d, p_grid, cfg)
    manifest.finish()
    results = []
    for p, est in curve:
        cf = closed_forms.kappa_closed(Params(p, args.n, args.d))
        results.append({
            "p": p, "n": args.n, "d": args.d,
            "kappa_upper": est.kappa_upper,
            "lambda_best": est.lambda_best,
            "evaluations": est.evaluations,
            "kappa_closed": None if cf is None else cf.value,
            "closed_source": None if cf is None else cf.source,
            "estimate": est.to_json(),
        })
    if args.format == "csv":
        header = ["p", "kappa_upper", "lambda_best", "evaluations"]
        with_closed = any(r["kappa_closed"] is not None for r in results)
        if with_closed:
            header.append("kappa_closed")
        rows = [[r[k] for k in header] for r in results]
        return _emit(csv_document(manifest, header, rows), args.out)
    return _emit(json_document(manifest, {"results": results}), args.out)


def _parse_grid(spec: str) -> list[float]:
    """``a:b:m`` (m evenly spaced points) or a comma-separated list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad --p-grid {spec!r}; use start:stop:count")
        a, b, m = float(parts[0]), float(parts[1]), int(parts[2])
        if m < 1:
            raise UsageError("--p-grid count must be positive")
        return [a] if m == 1 else np.linspace(a, b, m).tolist()
    return [float(x) for x in spec.split(",") if x.strip()]


def cmd_constants(args) -> int:
    ps = list(args.p or [])
    if args.p_grid:
        try:
            ps += _parse_grid(args.p_grid)
        except ValueError as exc:
            raise UsageError(f"bad --p-grid: {exc}") from exc
    if not ps and not args.thresholds:
        raise UsageError("nothing to do: give --p, --p-grid and/or --thresholds")
    manifest = RunManifest("constants", {"p": ps, "thresholds": args.thresholds,
                                         "format": args.format})
    rows, flagged = [], []
    for p in ps:
        if not 1.0 < p < 4.0:
            msg = f"p={p} outside (1, 4): constants undefined"
            print(f"warning: {msg}", file=sys.stderr)
            flagged.append({"p": p, "error": msg})
            continue
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            row = regularity_constants.constants_row(p)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        rows.append(row)
    th = regularity_constants.thresholds() if args.thresholds else None
    manifest.finish()
    if args.format == "csv":
        header = list(regularity_constants.ConstantsRow.__dataclass_fields__)
        table = [[getattr(r, k) for k in header] for r in rows]
        table += [[f["p"]] + [None] * (len(header) - 1) for f in flagged]
        text = csv_document(manifest, header, table)
        if th is not None:
            text = text.replace("\n", "\n# thresholds: " + json.dumps(jsonable(th.as_dict())) + "\n", 1)
        return _emit(text, args.out)
    payload = {"rows": [r.as_dict() for r in rows], "flagged": flagged}
    if th is not None:
        payload["thresholds"] = th.as_dict()
        payload["windows"] = {"near_2": [2.0, th.p0], "gap": [th.p0, th.p1], "near_3": [th.p1, 3.0]}
    return _emit(json_document(manifest, payload), args.out)


def _example63_report() -> dict:
    wit = closed_forms.gap_certificate_63()
    expected = closed_forms.GAP_BOUND
    bad = abs(wit.kappa_bound - expected) > 1e-12 or wit.constraint_residual_norm > 1e-12
    return {
        "name": "example63",
        "ratio": wit.ratio,
        "kappa_bound": wit.kappa_bound,
        "expected_kappa_bound": expected,
        "constraint_residual_norm": wit.constraint_residual_norm,
        "kappa_scalar": closed_forms.scalar_kappa(closed_forms.GAP_P, 3),
        "violations": int(bad),
    }


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    which = args.which
    manifest = RunManifest("verify", {"samples": args.samples, "which": which}, args.seed)
    reports = []
    if which in ("mixed", "all"):
        rep = pointwise_inequalities.fuzz_mixed_csk(args.samples, args.seed).as_dict()
        margin, sample = pointwise_inequalities.near_equality_mixed_csk(seed=args.seed)
        rep["near_equality"] = {"margin": margin, "sample": sample}
        reports.append(rep)
    if which in ("kato2d", "all"):
        reports.append(pointwise_inequalities.fuzz_kato2d_case1(args.samples, args.seed).as_dict())
        reports.append(pointwise_inequalities.fuzz_kato2d_case2(args.samples, args.seed).as_dict())
    if which in ("example63", "all"):
        reports.append(_example63_report())
    manifest.finish()
    total = sum(r["violations"] for r in reports)
    code = _emit(json_document(manifest, {"reports": reports, "violations": total}), args.out)
    if code != EXIT_OK:
        return code
    if total:
        for r in reports:
            if r["violations"]:
                print(f"violation in {r['name']}: {r.get('witness_of_worst', r)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_equatorial(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    lo, hi = equatorial_stability.instability_range(args.n)
    try:
        cert = equatorial_stability.build_certificate(args.n, args.p, args.eps, args.tol)
    except equatorial_stability.ParameterError as exc:
        print(f"error: {exc}; valid p range for n={args.n} is ({lo!r}, {hi!r})", file=sys.stderr)
        return EXIT_RANGE
    manifest = RunManifest("equatorial", {"n": args.n, "p": args.p, "eps": args.eps,
                                          "tol": args.tol})
    payload = cert.as_dict()
    payload.update(
        instability_range=[lo, hi],
        ode_residual=equatorial_stability.ode_residual(cert),
        zeta_residual=equatorial_stability.zeta_residual(cert),
        closed_form_value=equatorial_stability.closed_form_value(cert),
        unstable=cert.integral_value < 0,
    )
    if args.emit_eta:
        rows = [[r, e] for r, e in equatorial_stability.eta_samples(cert, args.eta_points)]
        code = _emit(csv_document(manifest.finish(), ["r", "eta"], rows), args.emit_eta)
        if code != EXIT_OK:
            return code
    manifest.finish()
    return _emit(json_document(manifest, payload), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="katolab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kappa", help="numerical optimal Kato constant")
    k.add_argument("--p", type=float, action="append")
    k.add_argument("--p-min", type=float)
    k.add_argument("--p-max", type=float)
    k.add_argument("--p-steps", type=int)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--d", type=int, required=True)
    k.add_argument("--restarts", type=int, default=256)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--format", choices=("json", "csv"), default="json")
    k.add_argument("--out")
    k.set_defaults(func=cmd_kappa)

    c = sub.add_parser("constants", help="explicit regularity constants and thresholds")
    c.add_argument("--p", type=float, action="append")
    c.add_argument("--p-grid", help="start:stop:count or comma-separated values")
    c.add_argument("--thresholds", action="store_true")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("verify", help="fuzz the pointwise inequalities")
    v.add_argument("--samples", type=int, default=10**6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--which", choices=("mixed", "kato2d", "example63", "all"), default="all")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("equatorial", help="instability certificate for the equatorial map")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--p", type=float, required=True)
    e.add_argument("--eps", type=float)
    e.add_argument("--tol", type=float, default=1e-12)
    e.add_argument("--emit-eta", metavar="PATH")
    e.add_argument("--eta-points", type=int, default=200)
    e.add_argument("--out")
    e.set_defaults(func=cmd_equatorial)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
