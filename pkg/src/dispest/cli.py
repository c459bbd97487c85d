"""Command-line front end: bounds, simulations, sweeps and figure data.

Every emitted JSON record and CSV file embeds the full configuration needed
to reproduce it (seeded runs bit-exactly, analytic values to rounding).
Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .bounds import (BoundQuery, RLDUnavailableError, bound_most_informative,
                     gap_D, scaling_factors, scheme_variance_sum)
from .fock import PureStateError, TruncationError
from .gaussian import make_tmst
from .montecarlo import EstimationConfig, run_baseline_heterodyne, run_scheme
from .witness import duan_check

FIG3_DELTAS = (1.0, 2.0, 3.0, 5.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit_record(command: str, config: dict, results: dict, started: float) -> dict:
    return {
        "tool": "dispest",
        "version": __version__,
        "command": command,
        "config": config,
        "results": results,
        "wall_time_s": time.perf_counter() - started,
    }


def _write_csv(path, header_cols, rows, command: str, config: dict):
    lines = [f"# tool: dispest {__version__}",
             f"# command: {command}",
             f"# config: {json.dumps(config, sort_keys=True)}",
             ",".join(header_cols)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_weight(text: str) -> np.ndarray:
    try:
        g11, g12, g22 = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--G expects three comma-separated numbers g11,g12,g22")
    return np.array([[g11, g12], [g12, g22]])


def _parse_jitter(text: str) -> tuple[float, float]:
    try:
        dq2, dp2 = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--jitter expects two comma-separated variances dq2,dp2")
    return (dq2, dp2)


def _probe_query(args) -> BoundQuery:
    kind = args.probe.replace("-", "_")
    if kind == "tmst_asym":
        if args.N1 is None or args.N2 is None:
            raise UsageError("--probe tmst-asym needs --N1 and --N2")
        if args.N is not None:
            raise UsageError("--N conflicts with --N1/--N2")
        n, n2 = args.N1, args.N2
    else:
        if args.N1 is not None or args.N2 is not None:
            raise UsageError("--N1/--N2 are only valid with --probe tmst-asym")
        n, n2 = (args.N if args.N is not None else 0.0), None
    r = args.r if args.r is not None else 0.0
    if kind == "coherent" and (r != 0.0 or n != 0.0):
        raise UsageError("a coherent probe takes no --r or --N")
    try:
        return BoundQuery(kind=kind, r=r, N=n, N2=n2, delta=args.delta,
                          weight=_parse_weight(args.G) if args.G else None,
                          shots=args.M)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_bounds(args) -> int:
    started = time.perf_counter()
    query = _probe_query(args)
    report = bound_most_informative(query)
    config = {
        "probe": args.probe, "r": query.r, "N": query.N, "N2": query.N2,
        "delta": query.delta, "M": query.shots,
        "G": args.G,
    }
    results = {
        "b_sld": report.b_sld, "b_rld": report.b_rld, "b_mi": report.b_mi,
        "branch": report.branch, "r_ths": report.r_ths, "r_sql": report.r_sql,
        "scheme_variance": report.scheme_variance, "gap": report.gap,
    }
    if args.format == "csv":
        cols = [k for k, v in results.items() if isinstance(v, (int, float)) and v is not None]
        _write_csv(None, cols, [[results[k] for k in cols]], "bounds", config)
    else:
        print(json.dumps(_emit_record("bounds", config, results, started), indent=2))
    return 0


def _parse_scaling(text: str) -> tuple[str, float | None]:
    if text in ("none", "coherent", "optimal"):
        return text, None
    if text.startswith("K="):
        try:
            return "explicit", float(text[2:])
        except ValueError:
            pass
    raise UsageError("--scaling must be none, coherent, optimal or K=<value>")


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    if args.baseline and (args.r is not None or args.N is not None):
        raise UsageError("--baseline conflicts with --r/--N")
    if not args.baseline and (args.r is None or args.N is None):
        raise UsageError("simulate needs --r and --N (or --baseline)")
    scaling, k_explicit = _parse_scaling(args.scaling)
    try:
        cfg = EstimationConfig(
            shots=args.shots, seed=args.seed, r=args.r, N=args.N, N2=args.N2,
            q0=args.q0, p0=args.p0, prior_delta=args.prior_delta,
            scaling=scaling, K=k_explicit,
            jitter=_parse_jitter(args.jitter) if args.jitter else None,
            workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    runner = run_baseline_heterodyne if args.baseline else run_scheme
    result = runner(cfg, record_shots=args.dump_shots is not None)

    if args.baseline:
        bound = 2.0 if cfg.prior_delta is None else \
            2.0 * cfg.prior_delta ** 2 / (1.0 + cfg.prior_delta ** 2)
    else:
        query = BoundQuery(kind="tmst" if cfg.N2 is None else "tmst_asym",
                           r=cfg.r, N=cfg.N, N2=cfg.N2, delta=cfg.prior_delta)
        bound = bound_most_informative(query).b_mi

    config = {
        "baseline": args.baseline, "r": cfg.r, "N": cfg.N, "N2": cfg.N2,
        "shots": cfg.shots, "seed": cfg.seed, "q0": cfg.q0, "p0": cfg.p0,
        "prior_delta": cfg.prior_delta, "scaling": args.scaling,
        "jitter": list(cfg.jitter) if cfg.jitter else None,
        "workers": cfg.workers,
    }
    results = {
        "k_used": result.k_used,
        "mean_q": result.mean_q, "mean_p": result.mean_p,
        "bias_q": result.bias_q, "bias_p": result.bias_p,
        "mse_q": result.mse_q, "mse_p": result.mse_p,
        "mse_sum": result.mse_sum,
        "se_mse_q": result.se_mse_q, "se_mse_p": result.se_mse_p,
        "se_mse_sum": result.se_mse_sum,
        "target_mse_sum": result.target_mse_sum,
        "z_vs_target": (result.mse_sum - result.target_mse_sum) / result.se_mse_sum
        if result.se_mse_sum > 0 else 0.0,
        "bound_mi": bound,
    }
    if args.dump_shots:
        shots = result.per_shot
        rows = zip(range(result.shots), shots["q0"], shots["p0"],
                   shots["outcome_q"], shots["outcome_p"],
                   shots["estimate_q"], shots["estimate_p"])
        _write_csv(args.dump_shots,
                   ["shot", "q0", "p0", "outcome_q", "outcome_p",
                    "estimate_q", "estimate_p"],
                   rows, "simulate", config)
    print(json.dumps(_emit_record("simulate", config, results, started), indent=2))
    return 0


def _grid(args) -> np.ndarray:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.r_max <= args.r_min:
        raise UsageError("--r-max must exceed --r-min")
    return np.linspace(args.r_min, args.r_max, args.steps)


def _out_dir(args) -> str:
    out = args.out or os.environ.get("DISPEST_OUTPUT_DIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


def cmd_figure(args) -> int:
    grid = _grid(args)
    out = _out_dir(args)
    if args.name == "fig2":
        ns = (0.0, 0.5, 2.0)
        config = {"name": "fig2", "r_min": args.r_min, "r_max": args.r_max,
                  "steps": args.steps, "N_values": list(ns)}
        rows = [[r] + [gap_D(r, n) for n in ns] for r in grid]
        _write_csv(os.path.join(out, "fig2.csv"),
                   ["r", "D_N0", "D_N0.5", "D_N2"], rows, "figure", config)
        print(os.path.join(out, "fig2.csv"))
        return 0

    deltas = tuple(float(x) for x in args.deltas.split(",")) if args.deltas \
        else FIG3_DELTAS
    n_th = args.N if args.N is not None else 1.0
    for delta in deltas:
        config = {"name": "fig3", "delta": delta, "N": n_th,
                  "r_min": args.r_min, "r_max": args.r_max, "steps": args.steps}
        b_sql = 2.0 * delta ** 2 / (1.0 + delta ** 2)
        rows = []
        for r in grid:
            var0 = scheme_variance_sum(r, n_th) / 2.0
            factors = scaling_factors(var0, delta)
            b_mi = bound_most_informative(
                BoundQuery(kind="tmst", r=r, N=n_th, delta=delta)).b_mi
            rows.append([r, factors.mse_min, factors.mse_kc, b_mi, b_sql])
        name = f"fig3_{delta:g}.csv"
        _write_csv(os.path.join(out, name),
                   ["r", "mse_Kmin", "mse_Kc", "B_MI", "B_SQL"],
                   rows, "figure", config)
        print(os.path.join(out, name))
    return 0


_SWEEP_TMST_ONLY = ("scheme_variance", "gap", "duan_lhs")


def cmd_sweep(args) -> int:
    grid = _grid(args)
    quantity = args.quantity
    if quantity in _SWEEP_TMST_ONLY and args.probe != "tmst":
        raise UsageError(f"quantity '{quantity}' is defined for --probe tmst")

    def evaluate(r: float) -> float:
        if quantity == "scheme_variance":
            return scheme_variance_sum(r, args.N or 0.0)
        if quantity == "gap":
            return gap_D(r, args.N or 0.0)
        if quantity == "duan_lhs":
            return duan_check(make_tmst(r, args.N or 0.0), 1.0).lhs
        ns = argparse.Namespace(probe=args.probe, r=r, N=args.N, N1=args.N1,
                                N2=args.N2, delta=args.delta, G=None, M=1)
        report = bound_most_informative(_probe_query(ns))
        return {"b_sld": report.b_sld, "b_rld": report.b_rld,
                "b_mi": report.b_mi}[quantity]

    config = {"quantity": quantity, "probe": args.probe, "N": args.N,
              "N1": args.N1, "N2": args.N2, "delta": args.delta,
              "r_min": args.r_min, "r_max": args.r_max, "steps": args.steps}
    rows = [[r, evaluate(r)] for r in grid]
    path = args.out if args.out else None
    _write_csv(path, ["r", quantity], rows, "sweep", config)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="dispest",
                     description="Bounds and simulations for joint estimation "
                                 "of phase-space displacements")
    sub = parser.add_subparsers(dest="cmd", required=True)

    pb = sub.add_parser("bounds", help="evaluate Cramer-Rao bounds for a probe")
    pb.add_argument("--probe", required=True,
                    choices=["coherent", "single", "tmst", "tmst-asym"])
    pb.add_argument("--r", type=float, default=None)
    pb.add_argument("--N", type=float, default=None)
    pb.add_argument("--N1", type=float, default=None)
    pb.add_argument("--N2", type=float, default=None)
    pb.add_argument("--delta", type=float, default=None,
                    help="Gaussian prior standard deviation")
    pb.add_argument("--M", type=int, default=1, help="number of repetitions")
    pb.add_argument("--G", type=str, default=None,
                    help="weight matrix g11,g12,g22")
    pb.add_argument("--format", choices=["json", "csv"], default="json")
    pb.set_defaults(func=cmd_bounds)

    ps = sub.add_parser("simulate", help="Monte Carlo estimation run")
    ps.add_argument("--baseline", action="store_true",
                    help="coherent probe with heterodyne instead of the scheme")
    ps.add_argument("--r", type=float, default=None)
    ps.add_argument("--N", type=float, default=None)
    ps.add_argument("--N2", type=float, default=None)
    ps.add_argument("--shots", type=int, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--q0", type=float, default=None)
    ps.add_argument("--p0", type=float, default=None)
    ps.add_argument("--prior-delta", type=float, default=None)
    ps.add_argument("--scaling", type=str, default="none",
                    help="none | coherent | optimal | K=<value>")
    ps.add_argument("--jitter", type=str, default=None, help="dq2,dp2")
    ps.add_argument("--workers", type=int, default=1)
    ps.add_argument("--dump-shots", type=str, default=None,
                    help="write per-shot CSV to this path")
    ps.set_defaults(func=cmd_simulate)

    pf = sub.add_parser("figure", help="emit figure-reproduction CSV data")
    pf.add_argument("name", choices=["fig2", "fig3"])
    pf.add_argument("--out", type=str, default=None,
                    help="output directory (default $DISPEST_OUTPUT_DIR or .)")
    pf.add_argument("--r-min", type=float, default=0.0)
    pf.add_argument("--r-max", type=float, default=3.0)
    pf.add_argument("--steps", type=int, default=200)
    pf.add_argument("--N", type=float, default=None,
                    help="thermal photons for fig3 (default 1)")
    pf.add_argument("--deltas", type=str, default=None,
                    help="comma-separated prior widths for fig3")
    pf.set_defaults(func=cmd_figure)

    pw = sub.add_parser("sweep", help="evaluate one quantity over an r grid")
    pw.add_argument("--quantity", required=True,
                    choices=["b_sld", "b_rld", "b_mi", "scheme_variance",
                             "gap", "duan_lhs"])
    pw.add_argument("--probe", default="tmst",
                    choices=["coherent", "single", "tmst", "tmst-asym"])
    pw.add_argument("--N", type=float, default=None)
    pw.add_argument("--N1", type=float, default=None)
    pw.add_argument("--N2", type=float, default=None)
    pw.add_argument("--delta", type=float, default=None)
    pw.add_argument("--r-min", type=float, default=0.0)
    pw.add_argument("--r-max", type=float, default=3.0)
    pw.add_argument("--steps", type=int, default=200)
    pw.add_argument("--out", type=str, default=None,
                    help="output CSV path (default stdout)")
    pw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PureStateError, RLDUnavailableError, TruncationError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def entry_point():
    sys.exit(main())
