"""Command-line front end: reproducible experiments with CSV artifacts.

Exit codes: 0 success, 1 numerical failure (CFL violation, vacuum, oracle
divergence), 2 usage error.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import analysis, csvio
from .direct import advance_direct, init_direct
from .errors import SolverError
from .grid import SnapshotSeries, make_grid, sample_field
from .homogenized import advance, derive_params, split_initial
from .kernels import BACKEND
from .reconstruction import ReconstructionQuery, fast_phase, reconstruct_field

OUTDIR_ENV = "TWOSCALE_EULER_OUTDIR"


def default_initial_data(grid):
    """Built-in smooth initial data: u0 = 1 + cos(x)/2, rho0 = 1 + sin(x)/2."""
    u0 = sample_field(grid, lambda x: 1.0 + np.cos(x) / 2.0)
    rho0 = sample_field(grid, lambda x: 1.0 + np.sin(x) / 2.0)
    return u0, rho0


def _load_table(path):
    pairs = []
    with open(path, "r") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            x, _, v = line.partition(",")
            pairs.append((float(x), float(v)))
    return pairs


def load_initial_data(args, grid):
    if (args.u0_file is None) != (args.rho0_file is None):
        raise ValueError("--u0-file and --rho0-file must be given together")
    if args.u0_file is None:
        return default_initial_data(grid)
    u0 = sample_field(grid, _load_table(args.u0_file))
    rho0 = sample_field(grid, _load_table(args.rho0_file))
    return u0, rho0


def _outdir(args):
    out = args.out_dir or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(out, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise ValueError(f"output directory {out!r} is not writable")
    return out


def _parse_epsilons(text):
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values or any(v <= 0.0 for v in values):
        raise ValueError(f"invalid epsilon list {text!r}")
    return values


def _write_meta(path, args, params, steps, final_t):
    csvio.write_key_values(path, {
        "gamma": params.gamma,
        "u_bar": params.u_mean,
        "rho_bar": params.rho_mean,
        "courant": args.courant,
        "n_cells": args.n_cells,
        "steps_taken": steps,
        "final_t": final_t,
    })


def cmd_two_scale(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    params = derive_params(u0, rho0, args.gamma)
    state = split_initial(u0, rho0, params)
    series, final, steps = advance(state, args.t_final, args.courant,
                                   args.record_every)
    out = _outdir(args)
    csvio.write_snapshot_series(os.path.join(out, "profiles.csv"), series)

    recon = SnapshotSeries()
    for t, (fwd, bwd) in series:
        snap = type(state)(fwd, bwd, t, params)
        query = ReconstructionQuery.from_time(t, args.epsilon)
        recon.append(t, reconstruct_field(snap, query))
    csvio.write_snapshot_series(
        os.path.join(out, "reconstructed.csv"), recon,
        extras={"epsilon": args.epsilon},
        extras_fn=lambda t: {"tau": fast_phase(t, args.epsilon)},
    )
    _write_meta(os.path.join(out, "meta.txt"), args, params, steps, final.t)
    return 0


def cmd_direct(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    params = derive_params(u0, rho0, args.gamma)
    state = init_direct(u0, rho0, args.epsilon, args.gamma)
    series, final, steps = advance_direct(state, args.t_final, args.courant,
                                          args.record_every)
    out = _outdir(args)
    csvio.write_snapshot_series(
        os.path.join(out, "snapshots.csv"), series,
        extras={"epsilon": args.epsilon, "gamma": args.gamma,
                "form": "primitive"},
    )
    _write_meta(os.path.join(out, "meta.txt"), args, params, steps, final.t)
    return 0


def cmd_compare(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    report = analysis.compare_runs(
        args.epsilon, args.gamma, u0, rho0, grid, args.t_final, args.courant,
        direct_courant=args.direct_courant,
    )
    out = _outdir(args)
    csvio.write_error_table(os.path.join(out, "errors.csv"), [report])
    print(f"epsilon={report.epsilon:g}: "
          f"u L1={report.u_l1:.7g} L2={report.u_l2:.7g} Linf={report.u_linf:.7g}  "
          f"rho L1={report.rho_l1:.7g} L2={report.rho_l2:.7g} "
          f"Linf={report.rho_linf:.7g}")
    return 0


def cmd_sweep(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    result = analysis.sweep_epsilons(
        args.epsilons, args.gamma, u0, rho0, grid, args.t_final, args.courant,
        direct_courant=args.direct_courant,
    )
    out = _outdir(args)
    csvio.write_error_table(os.path.join(out, "errors.csv"), result.reports)
    summary = {}
    for key in sorted(result.slopes):
        summary[f"K_{key}"] = result.slopes[key]
        summary[f"residual_{key}"] = result.residuals[key]
    csvio.write_key_values(os.path.join(out, "summary.txt"), summary)
    for r in result.reports:
        print(f"epsilon={r.epsilon:g}: u_l1={r.u_l1:.7g} rho_l1={r.rho_l1:.7g}")
    print(f"K_u_l1={result.slopes['u_l1']:.7g} "
          f"residual={result.residuals['u_l1']:.3%}")
    return 0


def cmd_truncation(args):
    # refinement study on the built-in forward profile (amplitude <= 0.5)
    q0 = lambda y: (math.cos(y) + math.sin(y)) / 4.0  # noqa: E731
    alpha = (args.gamma + 1.0) / 4.0
    beta = 1.0
    rows = []
    n = args.n_cells
    for _ in range(args.levels):
        grid = make_grid(n)
        h = grid.spacing
        speed_bound = 2.0 * alpha * 0.5 + abs(beta)  # loose, keeps k ~ h
        k = args.courant * h / speed_bound
        rep = analysis.truncation_error(q0, (alpha, beta), h, k, args.time)
        rows.append(rep)
        n *= 2
    out = _outdir(args)
    with csvio.atomic_write(os.path.join(out, "truncation.csv")) as handle:
        handle.write("h,k,max_error,l1_error,case_pp,case_mm,case_pm,case_mp\n")
        for r in rows:
            handle.write(",".join(
                [f"{r.h:.17g}", f"{r.k:.17g}", f"{r.max_error:.17g}",
                 f"{r.l1_error:.17g}"]
                + [str(c) for c in r.case_counts]) + "\n")
    for prev, cur in zip(rows, rows[1:]):
        print(f"h={prev.h:.4e} -> {cur.h:.4e}: "
              f"max|e| ratio {prev.max_error / cur.max_error:.3f}")
    return 0


def cmd_shock(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    params = derive_params(u0, rho0, args.gamma)
    state = split_initial(u0, rho0, params)
    series, _, _ = advance(state, args.t_final, args.courant,
                           args.record_every)
    if args.epsilon is not None:
        watched = SnapshotSeries()
        for t, (fwd, bwd) in series:
            snap = type(state)(fwd, bwd, t, params)
            query = ReconstructionQuery.from_time(t, args.epsilon)
            vel, _ = reconstruct_field(snap, query)
            watched.append(t, vel)
        label = "reconstructed velocity"
    else:
        watched = series
        label = "forward profile"
    detected = analysis.detect_shock_time(watched, args.threshold_factor)
    out = _outdir(args)
    csvio.write_key_values(os.path.join(out, "shock.txt"), {
        "field": label.replace(" ", "_"),
        "n_cells": args.n_cells,
        "threshold_factor": args.threshold_factor,
        "detected_time": "none" if detected is None else detected,
    })
    print(f"shock on {label}: "
          + ("not detected" if detected is None else f"t = {detected:.6g}"))
    return 0


def cmd_bench(args):
    grid = make_grid(args.n_cells)
    u0, rho0 = load_initial_data(args, grid)
    rows = analysis.benchmark_steps(
        args.epsilons, args.gamma, u0, rho0, grid, args.t_final, args.courant,
        direct_courant=args.direct_courant,
    )
    out = _outdir(args)
    csvio.write_benchmark_table(os.path.join(out, "bench.csv"), rows)
    print(f"kernel backend: {BACKEND}")
    for r in rows:
        print(f"epsilon={r.epsilon:g}: steps homog={r.steps_homog} "
              f"direct={r.steps_direct} "
              f"({r.seconds_homog:.3f}s / {r.seconds_direct:.3f}s)")
    return 0


def _add_common(parser, epsilon="none"):
    parser.add_argument("--n-cells", type=int, default=1024)
    parser.add_argument("--gamma", type=float, default=1.0)
    parser.add_argument("--T", dest="t_final", type=float, default=2.5)
    parser.add_argument("--courant", type=float, default=0.9)
    parser.add_argument("--record-every", type=int, default=50)
    parser.add_argument("--out-dir", default=None,
                        help=f"output directory (default ${OUTDIR_ENV} or .)")
    parser.add_argument("--u0-file", default=None,
                        help="tabulated initial velocity (rows x,value)")
    parser.add_argument("--rho0-file", default=None,
                        help="tabulated initial density (rows x,value)")
    if epsilon == "required":
        parser.add_argument("--epsilon", type=float, required=True)
    elif epsilon == "optional":
        parser.add_argument("--epsilon", type=float, default=None)
    elif epsilon == "list":
        parser.add_argument("--epsilons", type=_parse_epsilons, required=True,
                            help="comma-separated Mach numbers")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="twoscale-euler",
        description="Two-scale and direct solvers for the weakly "
                    "compressible 1D isentropic Euler equations on the "
                    "2*pi torus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("two-scale",
                       help="advance the profile pair and reconstruct")
    _add_common(p, epsilon="required")
    p.set_defaults(func=cmd_two_scale)

    p = sub.add_parser("direct", help="advance the stiff reference solver")
    _add_common(p, epsilon="required")
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("compare",
                       help="error norms between the two solvers")
    _add_common(p, epsilon="required")
    p.add_argument("--direct-courant", type=float, default=1.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="compare over a list of Mach numbers")
    _add_common(p, epsilon="list")
    p.add_argument("--direct-courant", type=float, default=1.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("truncation",
                       help="local truncation error refinement study")
    _add_common(p)
    p.add_argument("--time", type=float, default=0.5,
                   help="pre-shock evaluation time")
    p.add_argument("--levels", type=int, default=2)
    p.set_defaults(func=cmd_truncation, n_cells=256)

    p = sub.add_parser("shock", help="detect gradient blow-up time")
    _add_common(p, epsilon="optional")
    p.add_argument("--threshold-factor", type=float, default=18.0)
    # detection reads the slope at every recorded time; keep full cadence
    p.set_defaults(func=cmd_shock, t_final=3.2, record_every=1)

    p = sub.add_parser("bench", help="step counts and wall time per Mach")
    _add_common(p, epsilon="list")
    p.add_argument("--direct-courant", type=float, default=0.9)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
