"""``daqc`` command-line interface.

Exit codes: 0 success, 1 usage error, 2 unsimulable input, 3 singular system,
4 optimization or solve failed to meet its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import optimizer as opt
from . import signmatrix as sm
from .exceptions import NegativeTimeError, ResidualError, SingularSystemError, UnsimulableError
from .hamiltonian import cross_resonance_chain, load_hamiltonian, xy_chain
from .scheduler import (
    analog_time_diagnostics,
    build_exact_schedule,
    error_bound,
    load_schedule,
    save_schedule,
    solve_positive_times,
)
from .simulator import EXACT, MODES, PAIRWISE_TROTTER, evolve, frobenius_distance, run_schedule

EXIT_OK, EXIT_USAGE, EXIT_UNSIMULABLE, EXIT_SINGULAR, EXIT_FAILED = 0, 1, 2, 3, 4
INHOMOGENEOUS_SIGMA = 0.175


class UsageError(Exception):
    pass


def _f(x) -> str:
    return "" if x is None else f"{float(x):.17g}"


def _write_csv(path, echo: str, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# {echo}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_f(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _echo(args, *names) -> str:
    return "daqc " + " ".join(f"{k}={getattr(args, k)}" for k in names)


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _int_list(text):
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("Trotter step counts must be positive")
    return out


def _workers(value):
    return (os.cpu_count() or 1) if value == 0 else value


# ---------------------------------------------------------------------------
# commands

def cmd_compile(args) -> int:
    source, target = load_hamiltonian(args.source), load_hamiltonian(args.target)
    if source.n != target.n:
        raise UsageError(f"source has {source.n} qubits, target has {target.n}")
    if args.positive:
        schedule, report = solve_positive_times(source, target, args.T, protocol=args.protocol,
                                                trotter_steps=args.trotter_steps)
    else:
        schedule = build_exact_schedule(source, target, args.T, args.protocol, args.trotter_steps)
        report = analog_time_diagnostics(schedule, target)
    save_schedule(schedule, args.out)
    print(f"blocks                   {len(schedule.blocks)}")
    for name in ("residual", "negative_time_count", "total_analog_time", "analog_time_lower_bound",
                 "error_bound", "coupling_ratio", "min_block_time", "nonzero_blocks"):
        v = getattr(report, name)
        print(f"{name:<24} {v if isinstance(v, int) or v is None else _f(v)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    source, target = load_hamiltonian(args.source), load_hamiltonian(args.target)
    schedule = load_schedule(args.schedule, source)
    if schedule.n != target.n:
        raise UsageError(f"schedule has {schedule.n} qubits, target has {target.n}")
    reference = evolve(target, schedule.T)
    steps = args.trotter_steps_sweep or [schedule.trotter_steps]
    rows = []
    for n_T in steps:
        s = replace(schedule, trotter_steps=n_T)
        dist = frobenius_distance(run_schedule(s, args.mode), reference)
        rows.append((n_T, dist, error_bound(s)))
    report = analog_time_diagnostics(schedule, target)
    print(f"T                    {_f(schedule.T)}")
    print(f"total_analog_time    {_f(report.total_analog_time)}")
    print(f"analog_time_lower    {_f(report.analog_time_lower_bound)}")
    print(f"{'n_T':>5} {'distance':>24} {'bound':>24}")
    for n_T, d, b in rows:
        print(f"{n_T:>5} {_f(d):>24} {_f(b):>24}")
    if args.csv:
        _write_csv(args.csv, _echo(args, "schedule", "target", "source", "mode"),
                   ["n_T", "distance", "bound"], rows)
    return EXIT_OK


def _config(args, time_mode=None, cost_mode=None) -> opt.OptimizationConfig:
    return opt.OptimizationConfig(
        bayes_steps=args.bayes_steps, runs=args.runs, seed=args.seed,
        cost_mode=cost_mode or args.mode, time_mode=time_mode or args.time_mode,
        gd_max_iters=args.gd_max_iters, workers=_workers(args.workers),
    )


def _summary(result: opt.OptimizationResult) -> str:
    costs = result.run_costs
    q25, q50, q75 = np.percentile(costs, [25, 50, 75])
    lines = [
        f"best_cost            {_f(result.best_cost)}",
        f"best_exact_cost      {_f(result.exact_cost)}",
        f"median_cost          {_f(q50)}",
        f"iqr                  {_f(q25)} .. {_f(q75)}",
        f"baseline_cost        {_f(result.baseline_cost) or 'n/a'}",
    ]
    if result.improvement is not None:
        lines.append(f"improvement          {100 * result.improvement:.2f}%")
    return "\n".join(lines)


def cmd_optimize(args) -> int:
    source, target = load_hamiltonian(args.source), load_hamiltonian(args.target)
    if source.n != target.n:
        raise UsageError(f"source has {source.n} qubits, target has {target.n}")
    cfg = _config(args)
    result = opt.optimize(source, target, args.T, args.K, cfg, analog_time=args.analog_time)
    problem = {"source": str(args.source), "target": str(args.target), "T": args.T, "K": args.K,
               "analog_time": args.analog_time}
    Path(args.out).write_text(opt.format_result(result, cfg, problem))
    print(_summary(result))
    if args.max_cost is not None and result.exact_cost > args.max_cost:
        print(f"error: best exact cost {_f(result.exact_cost)} exceeds {_f(args.max_cost)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_baseline(args) -> int:
    source = load_hamiltonian(args.source) if args.source else cross_resonance_chain(args.n, args.g)
    target = xy_chain(source.n, args.g)
    ref = opt.target_unitary(target, args.T)
    rows = []
    for n_T in range(1, args.n_T_max + 1):
        c = opt.baseline_circuit(source.n, args.T, n_T)
        rows.append((n_T, 4 * n_T, opt.cost(c, source, ref)))
    print(f"{'n_T':>4} {'blocks':>6} {'distance':>24}")
    for n_T, k, d in rows:
        print(f"{n_T:>4} {k:>6} {_f(d):>24}")
    if args.csv:
        _write_csv(args.csv, _echo(args, "n", "g", "T", "source"), ["n_T", "blocks", "distance"], rows)
    return EXIT_OK


def _series_rows(name, result, K):
    costs = result.run_costs
    exact = np.array([r.exact_final_cost for r in result.runs])
    q25, q50, q75 = np.percentile(exact, [25, 50, 75])
    return (name, K, float(np.min(exact)), float(q50), float(q25), float(q75),
            float(np.median(costs)), result.baseline_cost)


def cmd_repro(args) -> int:
    if args.figure != "fig3":
        raise UsageError(f"unknown figure {args.figure!r}")
    n, g, T = args.n, 1.0, args.T
    out = Path(args.out_dir)
    homogeneous = cross_resonance_chain(n, g)
    inhomogeneous = opt.sample_inhomogeneous_source(g, INHOMOGENEOUS_SIGMA, n,
                                                    np.random.SeedSequence(args.seed).spawn(1)[0])
    target = xy_chain(n, g)
    echo = _echo(args, "figure", "n", "T", "seed", "runs", "bayes_steps", "gd_max_iters")

    ref = opt.target_unitary(target, T)
    base_rows = []
    for n_T in range(1, args.n_T_max + 1):
        c = opt.baseline_circuit(n, T, n_T)
        base_rows.append((n_T, 4 * n_T, opt.cost(c, homogeneous, ref), opt.cost(c, inhomogeneous, ref)))
    _write_csv(out / "fig3_baseline.csv", echo,
               ["n_T", "blocks", "distance_homogeneous", "distance_inhomogeneous"], base_rows)

    series = [
        ("homogeneous_fixed", homogeneous, opt.FIXED, EXACT),
        ("homogeneous_free", homogeneous, opt.FREE, EXACT),
        ("inhomogeneous_fixed", inhomogeneous, opt.FIXED, EXACT),
        ("inhomogeneous_free", inhomogeneous, opt.FREE, EXACT),
        ("homogeneous_fixed_pairwise", homogeneous, opt.FIXED, PAIRWISE_TROTTER),
    ]
    header = ["series", "K", "best", "median", "q25", "q75", "median_search_cost", "baseline"]
    rows = []
    for name, source, time_mode, cost_mode in series:
        for K in range(1, args.k_max + 1):
            r = opt.optimize(source, target, T, K, _config(args, time_mode, cost_mode))
            rows.append(_series_rows(name, r, K))
            print(f"{name:<28} K={K}  best={_f(rows[-1][2])}  median={_f(rows[-1][3])}", flush=True)
    _write_csv(out / "fig3_optimized.csv", echo, header, [r for r in rows if not r[0].endswith("pairwise")])
    _write_csv(out / "fig3_pairwise.csv", echo, header, [r for r in rows if r[0].endswith("pairwise")])
    return EXIT_OK


def cmd_matrix(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("n must be >= 2")
    if args.protocol == "general":
        M = sm.build_protocol_matrix(n).entries
    else:
        M = sm.zz_matrix(n)
    rows = [[int(v) for v in row] for row in M]
    if args.out:
        _write_csv(args.out, _echo(args, "n", "protocol"), [f"c{k + 1}" for k in range(M.shape[1])], rows)
    else:
        for row in rows:
            print(",".join(str(v) for v in row))
    if not args.check:
        return EXIT_OK
    checks = []
    if args.protocol == "general":
        if n <= 6:
            checks.append(("recursive == column generator",
                           bool(np.array_equal(sm.build_protocol_matrix_recursive(n), M))))
        checks += [(f"sub-block {k}", bool(ok)) for k, ok in sm.subblock_identities().items()]
        if n <= 3:
            cols = sm.selection_columns(list(sm.iter_pool(n)), n)
            checks.append(("barycenter", bool(not cols.astype(np.int64).sum(axis=1).any())))
    rank = sm.exact_rank(M)
    singular = rank < M.shape[0]
    print(f"dimension {M.shape[0]}  rank {rank}  {'singular' if singular else 'non-singular'}")
    for name, ok in checks:
        print(f"{name:<32} {'ok' if ok else 'FAILED'}")
    if not all(ok for _, ok in checks):
        return EXIT_FAILED
    return EXIT_SINGULAR if singular else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="daqc", description="Digital-analog schedule compiler, verifier and optimizer.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="solve block times for a source/target pair")
    c.add_argument("source")
    c.add_argument("target")
    c.add_argument("--T", type=_positive, required=True)
    c.add_argument("--positive", action="store_true", help="non-negative times by NNLS over the full pool")
    c.add_argument("--protocol", choices=("general", "zz"), default="general")
    c.add_argument("--trotter-steps", type=int, default=1)
    c.add_argument("-o", "--out", required=True)
    c.set_defaults(func=cmd_compile)

    v = sub.add_parser("verify", help="simulate a schedule against the exact target evolution")
    v.add_argument("schedule")
    v.add_argument("target")
    v.add_argument("--source", required=True, help="source Hamiltonian the schedule was compiled for")
    v.add_argument("--mode", choices=MODES, default=EXACT)
    v.add_argument("--trotter-steps-sweep", type=_int_list, help="comma-separated n_T values")
    v.add_argument("--csv")
    v.set_defaults(func=cmd_verify)

    def search_flags(q):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--runs", type=int, default=20)
        q.add_argument("--bayes-steps", type=int, default=10)
        q.add_argument("--gd-max-iters", type=int, default=1000)
        q.add_argument("--workers", type=int, default=0, help="processes for independent runs (0: all cores)")

    o = sub.add_parser("optimize", help="optimize a K-block layered circuit")
    o.add_argument("source")
    o.add_argument("target")
    o.add_argument("--T", type=_positive, required=True)
    o.add_argument("--K", type=int, required=True)
    g = o.add_mutually_exclusive_group()
    g.add_argument("--fixed-time", dest="time_mode", action="store_const", const=opt.FIXED)
    g.add_argument("--free-time", dest="time_mode", action="store_const", const=opt.FREE)
    o.set_defaults(time_mode=opt.FIXED)
    o.add_argument("--mode", choices=MODES, default=EXACT, help="cost simulation mode")
    o.add_argument("--analog-time", default="auto",
                   type=lambda s: s if s == "auto" else _positive(s),
                   help="total analog time of the K fixed blocks ('auto': 2T for the XY chain, else T)")
    o.add_argument("--max-cost", type=float, help="exit 4 if the best exact cost exceeds this")
    search_flags(o)
    o.add_argument("-o", "--out", required=True)
    o.set_defaults(func=cmd_optimize)

    b = sub.add_parser("baseline", help="Trotter baseline distances for the XY chain")
    b.add_argument("--n", type=int, default=6)
    b.add_argument("--g", type=float, default=1.0)
    b.add_argument("--T", type=_positive, required=True)
    b.add_argument("--n-T-max", type=int, default=19)
    b.add_argument("--source", help="source Hamiltonian file (default: homogeneous chain)")
    b.add_argument("--csv")
    b.set_defaults(func=cmd_baseline)

    r = sub.add_parser("repro", help="regenerate figure data as CSV")
    r.add_argument("figure", choices=("fig3",))
    r.add_argument("--T", type=_positive, required=True)
    r.add_argument("--n", type=int, default=6)
    r.add_argument("--k-max", type=int, default=8)
    r.add_argument("--n-T-max", type=int, default=19)
    r.add_argument("--out-dir", required=True)
    search_flags(r)
    r.set_defaults(func=cmd_repro)

    m = sub.add_parser("matrix", help="print a protocol sign matrix")
    m.add_argument("n", type=int)
    m.add_argument("--protocol", choices=("general", "zz"), default="general")
    m.add_argument("--check", action="store_true")
    m.add_argument("--out")
    m.set_defaults(func=cmd_matrix)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UnsimulableError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSIMULABLE
    except SingularSystemError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SINGULAR
    except (NegativeTimeError, ResidualError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
