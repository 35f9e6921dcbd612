"""Command-line front end: ``hker eval | check | table``.

Exit codes: 0 success, 1 identity-check failure, 2 invalid input or domain
violation, 3 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import humbert as hb
from . import specfun as sf
from . import verify
from .records import dumps, format_float, scalar_record

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2, 3

FUNCTIONS: dict[str, tuple[str, ...]] = {
    "phi2": ("a", "b", "c", "x", "y"),
    "psi2": ("a", "b", "c", "x", "y"),
    "2f1": ("a", "b", "c", "z"),
    "1f1": ("a", "b", "z"),
    "1f2": ("a", "b", "c", "z"),
    "0f1": ("b", "z"),
}
METHODS = ("direct", "f21-series", "auto", "closed")
VARIABLES = ("a", "b", "c", "x", "y", "z")

EVAL_CSV_HEADER = ("command", "function", "method", "path", "value_re", "value_im",
                   "terms_used", "est_tail", "converged", "wall_time_ms")
TABLE_CSV_HEADER = ("sweep", "value_re", "value_im", "terms", "est_tail", "converged")
CHECK_CSV_HEADER = ("identity", "samples", "seed", "generator", "check_tol", "max_rel_err",
                    "failures", "pass")


class UsageError(Exception):
    """Invalid command-line input (exit code 2)."""


def parse_scalar(text: str) -> complex:
    """``1.5`` or ``re,im`` (e.g. ``0.3,0.1``)."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"malformed scalar {text!r}")


def _default_rel_tol() -> float:
    env = os.environ.get("HKER_DEFAULT_TOL")
    if env is None:
        return sf.DEFAULT_TOL.rel_tol
    try:
        value = float(env)
    except ValueError:
        raise UsageError(f"malformed HKER_DEFAULT_TOL {env!r}") from None
    if not value > 0:
        raise UsageError("HKER_DEFAULT_TOL must be positive")
    return value


def _tolerance(args) -> sf.ToleranceSpec:
    rel = args.tol if args.tol is not None else _default_rel_tol()
    try:
        return sf.ToleranceSpec(rel_tol=rel, max_terms=args.max_terms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# Evaluation

def _closed(function: str, v: dict, tol: sf.ToleranceSpec) -> sf.SeriesValue:
    if function == "phi2":
        a, b, c, x, y = (v[k] for k in FUNCTIONS["phi2"])
        hb.Phi2Params(a, b, c)
        if y == x:
            return hb.phi2_equal_args(a, b, c, x, tol)
        if a == b and y == -x:
            if c == 2 * a:
                return hb.phi2_antisym_2a(a, x, tol)
            return hb.phi2_antisym(a, c, x, tol)
    elif function == "2f1":
        a, b, c, z = (v[k] for k in FUNCTIONS["2f1"])
        if z == 1:
            return sf.SeriesValue(sf.gauss_sum_closed(a, b, c), 0, 0.0, True, "gauss")
        if z == -1 and c == 1 + a - b:
            return sf.SeriesValue(sf.kummer_sum_closed(a, b), 0, 0.0, True, "kummer")
    raise UsageError(f"no closed form for {function} at these arguments")


def evaluate(function: str, method: str, v: dict, tol: sf.ToleranceSpec) -> sf.SeriesValue:
    """Dispatch one evaluation; raises UsageError for invalid combinations."""
    if method == "closed":
        return _closed(function, v, tol)
    if function in ("phi2", "psi2"):
        params = (hb.Phi2Params if function == "phi2" else hb.Psi2Params)(v["a"], v["b"], v["c"])
        table = {
            "phi2": {"direct": hb.phi2_direct, "f21-series": hb.phi2_f21_series, "auto": hb.phi2_auto},
            "psi2": {"direct": hb.psi2_direct, "f21-series": hb.psi2_f21_series, "auto": hb.psi2_auto},
        }[function]
        return table[method](params, v["x"], v["y"], tol)
    if method == "f21-series":
        raise UsageError(f"method f21-series is not available for {function}")
    if function == "2f1" and method == "auto":
        try:
            return _closed(function, v, tol)
        except (UsageError, sf.DomainError):
            pass
    num, den = {
        "2f1": (["a", "b"], ["c"]),
        "1f1": (["a"], ["b"]),
        "1f2": (["a"], ["b", "c"]),
        "0f1": ([], ["b"]),
    }[function]
    return sf.hyp_pfq([v[k] for k in num], [v[k] for k in den], v["z"], tol)


def _collect(args, function: str, skip: tuple[str, ...] = ()) -> dict:
    wanted = FUNCTIONS[function]
    values = {}
    for name in VARIABLES:
        raw = getattr(args, name)
        if raw is None:
            continue
        if name not in wanted:
            raise UsageError(f"unexpected parameter --{name} for {function}")
        values[name] = parse_scalar(raw)
    for name in wanted:
        if name not in values and name not in skip:
            raise UsageError(f"missing parameter --{name} for {function}")
    return values


def _fmt_plain(z: complex) -> str:
    if z.imag == 0:
        return format(z.real, ".10g")
    return f"{z.real:.10g}{z.imag:+.10g}i"


def _eval_record(function, method, values, result, elapsed_ms) -> dict:
    return {
        "command": "eval",
        "function": function,
        "inputs": {k: scalar_record(values[k]) for k in FUNCTIONS[function] if k in values},
        "method": method,
        "path": result.path,
        "value": scalar_record(result.value),
        "terms_used": result.terms_used,
        "est_tail": result.est_tail,
        "converged": result.converged,
        "wall_time_ms": elapsed_ms,
    }


def cmd_eval(args, out) -> int:
    values = _collect(args, args.function)
    tol = _tolerance(args)
    start = time.perf_counter()
    result = evaluate(args.function, args.method, values, tol)
    elapsed = (time.perf_counter() - start) * 1e3
    record = _eval_record(args.function, args.method, values, result, elapsed)
    if args.format == "json":
        out.write(dumps(record) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(EVAL_CSV_HEADER)
        w.writerow([
            "eval", args.function, args.method, result.path,
            format_float(result.value.real), format_float(result.value.imag),
            result.terms_used, format_float(result.est_tail), str(result.converged).lower(),
            format_float(elapsed),
        ])
    else:
        out.write(f"{args.function} [{args.method} -> {result.path}]\n")
        for k in FUNCTIONS[args.function]:
            out.write(f"  {k} = {_fmt_plain(values[k])}\n")
        out.write(f"value      = {_fmt_plain(result.value)}\n")
        out.write(f"terms_used = {result.terms_used}\n")
        out.write(f"est_tail   = {result.est_tail:.10g}\n")
        out.write(f"converged  = {result.converged}\n")
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


# ---------------------------------------------------------------------------
# Identity sweeps

def _parse_overrides(items: list[str]) -> dict[str, tuple[float, float]]:
    overrides = {}
    for item in items:
        try:
            name, interval = item.split("=")
            lo, hi = (float(s) for s in interval.split(":"))
        except ValueError:
            raise UsageError(f"malformed domain override {item!r} (expected name=lo:hi)") from None
        if not lo <= hi:
            raise UsageError(f"empty interval in domain override {item!r}")
        overrides[name.strip()] = (lo, hi)
    return overrides


def cmd_check(args, out) -> int:
    names = list(verify.REGISTRY) if args.identity == "all" else [args.identity]
    if args.identity != "all" and args.identity not in verify.REGISTRY:
        raise UsageError(f"unknown identity {args.identity!r}")
    overrides = _parse_overrides(args.domain)
    if overrides:
        known = set().union(*(verify.REGISTRY[n].domain.ranges for n in names))
        unknown = set(overrides) - known
        if unknown:
            raise UsageError(f"domain override for unknown parameter(s) {sorted(unknown)}")
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be positive")
    if args.tol is not None and not args.tol >= 0:
        raise UsageError("--tol must be nonnegative")

    reports = []
    for name in names:
        domain = verify.REGISTRY[name].domain
        applicable = {k: v for k, v in overrides.items() if k in domain.ranges}
        if applicable:
            domain = domain.with_ranges(**applicable)
        if args.complex:
            domain = replace(domain, complex_parts=True)
        reports.append(verify.check_identity(name, domain, args.samples, args.seed, args.tol, jobs=args.jobs))

    if args.format == "json":
        for r in reports:
            out.write(dumps(r.to_record()) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CHECK_CSV_HEADER)
        for r in reports:
            w.writerow([r.identity_name, r.samples, r.seed, r.generator, format_float(r.check_tol),
                        format_float(r.max_rel_err), len(r.failures), str(r.passed).lower()])
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            out.write(f"{status} {r.identity_name:<13} samples={r.samples} seed={r.seed} "
                      f"max_rel_err={r.max_rel_err:.3e} tol={r.check_tol:.1e} failures={len(r.failures)}\n")
            for f in r.failures:
                out.write(f"    #{f.index} {f.diagnostic} rel_err={f.rel_err} point={f.point}\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# Tables

def cmd_table(args, out) -> int:
    function = args.function
    sweeps = []
    for name in VARIABLES:
        lo, hi = getattr(args, f"{name}_from"), getattr(args, f"{name}_to")
        if lo is None and hi is None:
            continue
        if lo is None or hi is None:
            raise UsageError(f"sweep over {name} needs both --{name}-from and --{name}-to")
        sweeps.append((name, lo, hi))
    if len(sweeps) != 1:
        raise UsageError("exactly one sweep variable is required" if not sweeps
                         else "conflicting sweep variables: " + ", ".join(s[0] for s in sweeps))
    var, lo, hi = sweeps[0]
    if var not in FUNCTIONS[function]:
        raise UsageError(f"{function} has no parameter {var}")
    if getattr(args, var) is not None:
        raise UsageError(f"--{var} given together with a sweep over {var}")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    tied = args.y_eq_x or args.y_eq_neg_x
    if args.y_eq_x and args.y_eq_neg_x:
        raise UsageError("--y-eq-x and --y-eq-neg-x are mutually exclusive")
    if tied:
        if function not in ("phi2", "psi2"):
            raise UsageError("--y-eq-x / --y-eq-neg-x apply to phi2 and psi2 only")
        if args.y is not None or var == "y":
            raise UsageError("y is tied to x; do not set or sweep it")

    fixed = _collect(args, function, skip=(var,) + (("y",) if tied else ()))
    tol = _tolerance(args)
    rows = []
    for s in np.linspace(lo, hi, args.steps):
        values = dict(fixed)
        values[var] = complex(float(s), 0.0)
        if tied:
            values["y"] = values["x"] if args.y_eq_x else -values["x"]
        rows.append((float(s), evaluate(function, args.method, values, tol)))

    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_CSV_HEADER)
        for s, r in rows:
            w.writerow([format_float(s), format_float(r.value.real), format_float(r.value.imag),
                        r.terms_used, format_float(r.est_tail), str(r.converged).lower()])
    elif args.format == "json":
        for s, r in rows:
            out.write(dumps({"sweep": s, "value": scalar_record(r.value), "terms": r.terms_used,
                             "est_tail": r.est_tail, "converged": r.converged}) + "\n")
    else:
        for s, r in rows:
            out.write(f"{var}={s:.10g}  {_fmt_plain(r.value)}  terms={r.terms_used}  "
                      f"est_tail={r.est_tail:.3e}{'' if r.converged else '  NOT CONVERGED'}\n")
    return EXIT_OK if all(r.converged for _, r in rows) else EXIT_NONCONVERGED


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    series = argparse.ArgumentParser(add_help=False)
    series.add_argument("--tol", type=float, default=None,
                        help="relative truncation tolerance (default 1e-14 or $HKER_DEFAULT_TOL)")
    series.add_argument("--max-terms", type=int, default=sf.DEFAULT_TOL.max_terms)
    series.add_argument("--method", choices=METHODS, default="auto")
    for name in VARIABLES:
        series.add_argument(f"--{name}", default=None, metavar="RE[,IM]")

    parser = argparse.ArgumentParser(prog="hker", description="Humbert phi2 / Psi2 evaluation and identity checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common, series], help="evaluate a function at one point")
    p_eval.add_argument("function", choices=tuple(FUNCTIONS))
    p_eval.add_argument("--format", choices=("json", "csv", "plain"), default="json")

    p_check = sub.add_parser("check", parents=[common], help="run randomized identity sweeps")
    p_check.add_argument("identity", help="registered identity name or 'all'")
    p_check.add_argument("--samples", type=int, default=None)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--tol", type=float, default=None, help="check tolerance on the relative error")
    p_check.add_argument("--domain", action="append", default=[], metavar="NAME=LO:HI")
    p_check.add_argument("--complex", action="store_true", help="add imaginary parts |Im| <= 0.5")
    p_check.add_argument("--jobs", type=int, default=1)
    p_check.add_argument("--format", choices=("json", "csv", "plain"), default="json")

    p_table = sub.add_parser("table", parents=[common, series], help="tabulate along one swept variable")
    p_table.add_argument("function", choices=tuple(FUNCTIONS))
    for name in VARIABLES:
        p_table.add_argument(f"--{name}-from", type=float, default=None)
        p_table.add_argument(f"--{name}-to", type=float, default=None)
    p_table.add_argument("--steps", type=int, default=11)
    p_table.add_argument("--y-eq-x", action="store_true")
    p_table.add_argument("--y-eq-neg-x", action="store_true")
    p_table.add_argument("--format", choices=("json", "csv", "plain"), default="csv")
    return parser


def _error(message: str, code: int) -> int:
    sys.stderr.write(dumps({"error": message, "exit_code": code}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    handler = {"eval": cmd_eval, "check": cmd_check, "table": cmd_table}[args.command]
    buf = io.StringIO()
    try:
        code = handler(args, buf)
    except UsageError as exc:
        return _error(str(exc), EXIT_INVALID)
    except (sf.DomainError, sf.PoleError) as exc:
        return _error(exc.message, EXIT_INVALID)
    except sf.SpecialFunctionError as exc:
        return _error(exc.message, EXIT_NONCONVERGED)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
