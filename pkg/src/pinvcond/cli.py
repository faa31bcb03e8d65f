"""Command-line front end.

Eight subcommands: bounds-eval (closed-form evaluators as one-line JSON),
estimate-q, tail, expect, tables, verify, cg-bench, lemmas.  One command
per process; internal parallelism lives in the experiment drivers and is
controlled by --threads, with results independent of its value.

Exit status: 0 when every verdict passed, 1 when a verdict failed,
2 on a configuration or usage error.

Every report embeds its config and master seed; rerunning the embedded
config reproduces the report byte for byte.  The PINVCOND_MASTER_SEED
environment variable, when set, overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds
from .cg import cg_experiment
from .errors import ConfigError, DomainError, HypothesisViolationError
from .experiments import (
    REFERENCE_TABLES,
    expectation_experiment,
    make_ones_center,
    q_experiment,
    reproduce_tables,
    tail_experiment,
    verify_inequality_suite,
)
from .reports import ExperimentReport, Verdict, format_float
from .sampling import GaussianEnsemble, Seed

__all__ = ["main"]

SEED_ENV_VAR = "PINVCOND_MASTER_SEED"
CENTER_CHOICES = "zero | ones-unit | ones-sqrt-m | file:PATH"


def _resolve_seed(args) -> Seed:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is not None:
        try:
            master = int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")
    else:
        master = args.seed
    return Seed(master)


def _resolve_center(spec: str, m: int, n: int) -> np.ndarray:
    if spec == "zero":
        return np.zeros((m, n))
    if spec == "ones-unit":
        return make_ones_center(m, n, "unit_norm")
    if spec == "ones-sqrt-m":
        return make_ones_center(m, n, "sqrt_m")
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            arr = np.load(path) if path.endswith(".npy") else np.loadtxt(path, ndmin=2)
        except OSError as exc:
            raise ConfigError(f"cannot read center file {path}: {exc}")
        arr = np.asarray(arr, dtype=np.float64)
        if arr.shape != (m, n):
            raise ConfigError(f"center file {path} has shape {arr.shape}, expected ({m}, {n})")
        return arr
    raise ConfigError(f"center must be one of {CENTER_CHOICES}, got {spec!r}")


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _write_rows_csv(report: ExperimentReport, path) -> None:
    rows = report.rows or report.tails
    if not rows:
        rows = [dict(sorted(report.estimates.items()))]
    columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in columns))
    with open(path, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _emit(report: ExperimentReport, args) -> int:
    total = len(report.verdicts)
    passed = sum(1 for v in report.verdicts if v.passed)
    failed = [v.name for v in report.verdicts if not v.passed]
    where = ""
    out = getattr(args, "out", None)
    if out:
        if args.format == "json":
            report.write_json(out)
        else:
            _write_rows_csv(report, out)
        where = f"; report -> {out}"
    if total:
        summary = f"{report.command}: {passed}/{total} checks passed"
        if failed:
            summary += f" (failed: {', '.join(failed)})"
    else:
        summary = f"{report.command}: done"
    print(summary + where)
    return 0 if passed == total else 1


# ---------------------------------------------------------------------------
# bounds-eval


def _require(args, op: str, *names: str) -> None:
    flag = {"lam": "--lambda", "o1": "--o1", "o_n": "--o-n"}
    missing = [flag.get(name, "--" + name.replace("_", "-"))
               for name in names if getattr(args, name) is None]
    if missing:
        raise ConfigError(f"--op {op} requires {', '.join(missing)}")


def _ctx(args) -> bounds.BoundContext:
    q = args.q if args.q is not None else 1.5
    return bounds.BoundContext(m=args.m, n=args.n, sigma=args.sigma,
                               lambda_mode=args.lambda_mode, q_value=q)


def _eval_op(args) -> tuple[dict, object]:
    op = args.op
    if op == "c_lambda":
        _require(args, op, "lam")
        return {"lambda": args.lam}, bounds.c_lambda(args.lam)
    if op == "zeta":
        _require(args, op, "m", "n", "sigma")
        ctx = _ctx(args)
        return ({"m": args.m, "n": args.n, "sigma": args.sigma, "q": ctx.q_value,
                 "lambda_mode": args.lambda_mode}, bounds.zeta(ctx))
    if op == "theorem_tail_bound":
        _require(args, op, "m", "n", "sigma", "z")
        ctx = _ctx(args)
        return ({"m": args.m, "n": args.n, "sigma": args.sigma, "q": ctx.q_value,
                 "lambda_mode": args.lambda_mode, "z": args.z},
                bounds.theorem_tail_bound(ctx, args.z))
    if op == "pinv_tail_bound":
        _require(args, op, "m", "n", "sigma", "t")
        ctx = _ctx(args)
        return ({"m": args.m, "n": args.n, "sigma": args.sigma,
                 "lambda_mode": args.lambda_mode, "t": args.t},
                bounds.pinv_tail_bound(ctx, args.t))
    if op == "pinv_directional_tail_bound":
        _require(args, op, "m", "n", "sigma", "xi")
        return ({"m": args.m, "n": args.n, "sigma": args.sigma, "xi": args.xi},
                bounds.pinv_directional_tail_bound(args.m, args.n, args.sigma, args.xi))
    if op == "chen_dongarra_bounds":
        _require(args, op, "m", "n", "x")
        low, high = bounds.chen_dongarra_bounds(args.m, args.n, args.x)
        return {"m": args.m, "n": args.n, "x": args.x}, [low, high]
    if op == "edelman_limit":
        _require(args, op, "lam")
        return {"lambda": args.lam}, bounds.edelman_limit(args.lam)
    if op == "q_limit":
        _require(args, op, "lam")
        return {"lambda": args.lam}, bounds.q_limit(args.lam)
    if op == "q_analytic_bounds":
        _require(args, op, "m", "n")
        low, high = bounds.q_analytic_bounds(args.m, args.n)
        return {"m": args.m, "n": args.n}, [low, high]
    if op == "expectation_bound":
        _require(args, op, "lam")
        return {"lambda": args.lam}, bounds.expectation_bound(args.lam)
    if op == "expectation_bound_log":
        _require(args, op, "lam")
        return {"lambda": args.lam}, bounds.expectation_bound_log(args.lam)
    if op == "z_of_eps":
        _require(args, op, "m", "n", "sigma", "eps")
        ctx = _ctx(args)
        return ({"m": args.m, "n": args.n, "sigma": args.sigma, "q": ctx.q_value,
                 "lambda_mode": args.lambda_mode, "eps": args.eps},
                bounds.z_of_eps(ctx, args.eps))
    if op == "mu_cdw":
        _require(args, op, "m", "n", "sigma", "r")
        return ({"m": args.m, "n": args.n, "sigma": args.sigma, "r": args.r},
                bounds.mu_cdw(args.m, args.n, args.sigma, args.r))
    if op == "lop_bound":
        _require(args, op, "m", "n", "kappa")
        o1 = args.o1 if args.o1 is not None else 0.0
        return ({"m": args.m, "n": args.n, "kappa": args.kappa, "o1": o1},
                bounds.lop_bound(args.m, args.n, args.kappa, o1))
    if op == "cg_iteration_bound":
        _require(args, op, "kappa", "eps")
        return ({"kappa": args.kappa, "eps": args.eps},
                bounds.cg_iteration_bound(args.kappa, args.eps))
    if op == "cg_cost_and_breakeven":
        _require(args, op, "n", "lam", "eps")
        o_n = args.o_n if args.o_n is not None else 0.0
        cost, breakeven = bounds.cg_cost_and_breakeven(args.n, args.lam, args.eps, o_n)
        return ({"n": args.n, "lambda": args.lam, "eps": args.eps, "o_n": o_n},
                [cost, breakeven])
    raise ConfigError(f"unknown op {op!r}")


_EVAL_OPS = [
    "c_lambda", "zeta", "theorem_tail_bound", "pinv_tail_bound",
    "pinv_directional_tail_bound", "chen_dongarra_bounds", "edelman_limit",
    "q_limit", "q_analytic_bounds", "expectation_bound", "expectation_bound_log",
    "z_of_eps", "mu_cdw", "lop_bound", "cg_iteration_bound", "cg_cost_and_breakeven",
]


def _cmd_bounds_eval(args) -> int:
    inputs, value = _eval_op(args)
    if isinstance(value, list):
        value = [float(v) for v in value]
    else:
        value = float(value)
    payload = json.dumps({"op": args.op, "inputs": inputs, "value": value},
                         sort_keys=True, allow_nan=False)
    print(payload)
    if args.out:
        with open(args.out, "w", newline="") as handle:
            handle.write(payload + "\n")
    return 0


# ---------------------------------------------------------------------------
# experiment commands


def _cmd_estimate_q(args) -> int:
    report = q_experiment(args.m, args.n, args.trials, _resolve_seed(args),
                          method=args.method, threads=args.threads)
    return _emit(report, args)


def _cmd_tail(args) -> int:
    center = _resolve_center(args.center, args.m, args.n)
    ensemble = GaussianEnsemble(center=center, sigma=args.sigma)
    report = tail_experiment(ensemble, args.trials, _resolve_seed(args),
                             q_trials=args.q_trials, z_points=args.z_points,
                             z_max_factor=args.z_max_factor,
                             lambda_mode=args.lambda_mode, threads=args.threads)
    report.config["center"] = args.center
    return _emit(report, args)


def _cmd_expect(args) -> int:
    center = _resolve_center(args.center, args.m, args.n)
    ensemble = GaussianEnsemble(center=center, sigma=args.sigma)
    report = expectation_experiment(ensemble, args.trials, _resolve_seed(args),
                                    lambda_mode=args.lambda_mode, threads=args.threads)
    report.config["center"] = args.center
    return _emit(report, args)


def _cmd_tables(args) -> int:
    seed = _resolve_seed(args)
    if args.ratio == "all":
        keys = sorted(REFERENCE_TABLES, key=float)
    else:
        keys = [args.ratio]
    rows = []
    cells = []
    for j, key in enumerate(keys):
        rep = reproduce_tables(key, trials=args.trials, seed=seed.substream(j),
                               threads=args.threads, max_m=args.max_m)
        for r in rep.rows:
            rows.append({
                "ratio": key, "m": r.m, "n": r.n,
                "mean_ln_kappa": r.mean_ln_kappa, "stderr": r.stderr,
                "reference": r.reference, "delta": r.delta,
                "bound_log": r.bound_log,
            })
            cells.append({
                "stat": r.mean_ln_kappa - 3.0 * r.stderr,
                "bound": r.bound_log,
                "label": f"ratio={key}, m={r.m}, n={r.n}",
            })
    if not cells:
        raise ConfigError(f"--max-m {args.max_m} filters out every table row")
    worst = min(cells, key=lambda c: c["bound"] - c["stat"])
    verdict = Verdict(
        name="mean_ln_kappa_below_bound_column",
        passed=all(c["stat"] <= c["bound"] for c in cells),
        lhs_label="worst mean ln(kappa) - 3 SE",
        lhs_value=worst["stat"],
        rhs_label=f"ln(20.1/(1-m/n)) at {worst['label']}",
        rhs_value=worst["bound"],
    )
    report = ExperimentReport(
        command="tables",
        config={"ratio": args.ratio, "trials": args.trials,
                "seed_master": seed.master, "seed_stream": seed.stream_index,
                "max_m": args.max_m, "lambda_mode": "asymptotic",
                "center": "ones-unit", "sigma": "1/sqrt(m) per row"},
        estimates={},
        rows=rows,
        bounds={},
        verdicts=[verdict],
        notes=["each row draws center + sigma*G with center = ones/sqrt(mn), sigma = 1/sqrt(m)"],
    )
    return _emit(report, args)


def _cmd_verify(args) -> int:
    report = verify_inequality_suite(_resolve_seed(args), trials=args.trials,
                                     threads=args.threads)
    return _emit(report, args)


def _cmd_cg_bench(args) -> int:
    center = _resolve_center(args.center, args.m, args.n)
    ensemble = GaussianEnsemble(center=center, sigma=args.sigma)
    report = cg_experiment(ensemble, args.eps, args.trials, _resolve_seed(args),
                           threads=args.threads)
    report.config["center"] = args.center
    return _emit(report, args)


def _cmd_lemmas(args) -> int:
    checks = bounds.analytic_lemma_checks()
    verdicts = [
        Verdict(name=c.name, passed=c.passed, lhs_label="worst margin",
                lhs_value=c.worst_margin, rhs_label="0", rhs_value=0.0,
                detail=f"{c.points} grid points")
        for c in checks
    ]
    report = ExperimentReport(
        command="lemmas",
        config={},
        estimates={},
        rows=[{"name": c.name, "passed": c.passed, "points": c.points,
               "worst_margin": c.worst_margin} for c in checks],
        bounds={},
        verdicts=verdicts,
    )
    return _emit(report, args)


# ---------------------------------------------------------------------------
# parser


def _add_output_flags(p: argparse.ArgumentParser, trials_default: int | None) -> None:
    p.add_argument("--seed", type=int, default=0,
                   help=f"64-bit master seed (default 0; {SEED_ENV_VAR} overrides)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads; results do not depend on this")
    p.add_argument("--out", default=None, help="report file path")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="report file format (default json)")
    if trials_default is not None:
        p.add_argument("--trials", type=int, default=trials_default,
                       help=f"Monte Carlo trials (default {trials_default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinvcond",
        description="Condition numbers of noisy rectangular matrices: "
                    "closed-form bound evaluators and seeded Monte Carlo checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds-eval", help="print one evaluator's value as JSON")
    p.add_argument("--op", required=True, choices=_EVAL_OPS)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--q", type=float, default=None,
                   help="norm constant Q(m, n); default 1.5 for ctx-based ops")
    p.add_argument("--lambda-mode", choices=["theorem", "asymptotic"], default="theorem")
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--xi", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--o1", type=float, default=None)
    p.add_argument("--o-n", dest="o_n", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bounds_eval)

    p = sub.add_parser("estimate-q", help="Monte Carlo estimate of Q(m, n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=["dense", "bidiagonal"], default="dense")
    _add_output_flags(p, trials_default=2000)
    p.set_defaults(func=_cmd_estimate_q)

    p = sub.add_parser("tail", help="empirical kappa tail vs the closed-form bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--center", default="zero", help=CENTER_CHOICES)
    p.add_argument("--lambda-mode", choices=["theorem", "asymptotic"], default="theorem")
    p.add_argument("--q-trials", type=int, default=5000)
    p.add_argument("--z-points", type=int, default=12)
    p.add_argument("--z-max-factor", type=float, default=50.0)
    _add_output_flags(p, trials_default=10000)
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("expect", help="mean kappa and mean ln(kappa) vs the mean bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--center", default="zero", help=CENTER_CHOICES)
    p.add_argument("--lambda-mode", choices=["theorem", "asymptotic"], default="theorem")
    _add_output_flags(p, trials_default=500)
    p.set_defaults(func=_cmd_expect)

    p = sub.add_parser("tables", help="reproduce the reference simulation tables")
    p.add_argument("--ratio", choices=["1.5", "2", "2.5", "3", "all"], default="all",
                   help="aspect ratio n/m (default all)")
    p.add_argument("--max-m", type=int, default=None,
                   help="skip rows with m larger than this")
    _add_output_flags(p, trials_default=500)
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("verify", help="run the full inequality battery")
    _add_output_flags(p, trials_default=10000)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("cg-bench", help="conjugate gradient iteration counts vs the bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--center", default="zero", help=CENTER_CHOICES)
    p.add_argument("--eps", type=float, default=1e-8)
    _add_output_flags(p, trials_default=50)
    p.set_defaults(func=_cmd_cg_bench)

    p = sub.add_parser("lemmas", help="grid checks of the analytic helper lemmas")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_lemmas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, HypothesisViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
