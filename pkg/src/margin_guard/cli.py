"""Command-line front end.

Subcommands map one-to-one onto the analysis operations: analyze (margin and
radius report), sweep (distance vs. noise radius table), preset (input file
generation), trajectory (time-series report), montecarlo (random-noise
estimates vs. analytic bounds), and construct (instability fixture emitter).

Exit codes: 0 success, 2 input or usage error, 3 internal invariant violation.
The default seed is 0, overridden by the MARGIN_GUARD_SEED environment
variable, which is in turn overridden by --seed.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path

from .counterexamples import (
    many_point_instability,
    near_boundary_instability,
    single_point_instability,
)
from .dynamics import persistence_certificate, snapshot_partitions, step_sizes, stepwise_stability_check
from .errors import InvariantViolation
from .formats import (
    SCHEMA_VERSION,
    centers_to_csv,
    centers_to_json_dict,
    dump_json,
    format_float,
    points_to_csv,
    points_to_json_dict,
    read_centers,
    read_points,
    read_trajectory_file,
)
from .partitions import partition_distance
from .presets import PRESET_NAMES, make_preset
from .stability import analyze_stability, no_switch_certificate, switch_candidates
from .stochastic import PerturbationModel, monte_carlo, sweep_table

__all__ = ["main", "entry"]


def _add_common_flags(p: argparse.ArgumentParser, *, inputs: bool = True) -> None:
    if inputs:
        p.add_argument("--points", metavar="PATH", help="points file (.csv or .json)")
        p.add_argument("--centers", metavar="PATH", help="centers file (.csv or .json)")
        p.add_argument("--preset", choices=PRESET_NAMES, help="generate input instead of reading files")
        p.add_argument("--n", type=int, default=200, help="point count for the two_gaussians preset")
        p.add_argument("--sigma0", type=float, default=0.2, help="spread for the two_gaussians preset")
        p.add_argument("--m", type=int, default=1, help="switching-point count for the many_point preset")
        p.add_argument("--delta", type=float, default=0.1, help="boundary offset for the near_boundary preset")
    p.add_argument("--seed", type=int, default=None, help="master RNG seed (default: MARGIN_GUARD_SEED or 0)")
    p.add_argument("--out", metavar="PATH", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="margin-guard",
        description="Stability analysis for nearest-center clustering partitions under perturbation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="margins, certified lower bound, and empirical radius upper bound")
    _add_common_flags(p)
    p.add_argument("--epsilon", type=float, default=None,
                   help="also report the no-switch certificate and switch candidates at this size")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="partition distance vs. bounded-noise radius over an epsilon grid")
    _add_common_flags(p)
    p.add_argument("--epsilon", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument("--grid", required=True, metavar="F,F,...", help="comma-separated epsilon grid (>= 2 values)")
    p.add_argument("--trials", type=int, default=100, help="perturbation trials per grid point")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("preset", help="emit a generated (points, centers) input")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--sigma0", type=float, default=0.2)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", metavar="PATH",
                   help="json: one combined file; csv: writes PATH.points.csv and PATH.centers.csv")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("trajectory", help="step sizes, persistence certificates, and instability time")
    p.add_argument("--points", required=True, metavar="PATH",
                   help="trajectory file (.json self-contained, or .csv with a t column)")
    p.add_argument("--centers", metavar="PATH", help="centers file (required for CSV trajectories)")
    p.add_argument("--eta", type=float, default=None, help="partition-distance threshold in (0, 1]")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("montecarlo", help="empirical switching estimates next to analytic bounds")
    _add_common_flags(p)
    p.add_argument("--epsilon", type=float, default=None, help=argparse.SUPPRESS)
    p.add_argument("--rho", type=float, default=None, help="bounded-noise radius")
    p.add_argument("--sigma", type=float, default=None, help="gaussian noise scale")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("construct", help="emit an instability fixture with frozen expected partitions")
    p.add_argument("name", choices=("single_point", "many_point", "near_boundary"))
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_construct)

    return parser


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("MARGIN_GUARD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"MARGIN_GUARD_SEED must be an integer, got {env!r}") from None
    return 0


def _resolve_inputs(args, seed: int):
    has_files = args.points is not None or args.centers is not None
    if args.preset is not None and has_files:
        raise ValueError("give either --points/--centers or --preset, not both")
    if args.preset is not None:
        epsilon = getattr(args, "epsilon", None)
        return make_preset(
            args.preset,
            n=args.n,
            sigma0=args.sigma0,
            seed=seed,
            epsilon=1.0 if epsilon is None else epsilon,
            m=args.m,
            delta=args.delta,
        )
    if args.points is None or args.centers is None:
        raise ValueError("need both --points and --centers, or a --preset")
    return read_points(args.points), read_centers(args.centers)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_analyze(args) -> int:
    seed = _resolve_seed(args)
    config, centers = _resolve_inputs(args, seed)
    report = analyze_stability(config, centers)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write(f"# min_margin={format_float(report.min_margin)}\n")
        buf.write(f"# margin_lower_bound_radius={format_float(report.margin_lower_bound_radius)}\n")
        buf.write(f"# assignment_radius={format_float(report.assignment_radius)}\n")
        buf.write("index,label,margin,switch_radius\n")
        for i in range(report.labels.size):
            buf.write(
                f"{i + 1},{int(report.labels[i])},{format_float(report.margins[i])},"
                f"{format_float(report.per_point_switch_radius[i])}\n"
            )
        _emit(buf.getvalue(), args.out)
        return 0
    payload = report.to_json_dict()
    if args.epsilon is not None:
        from .geometry import assign_nearest

        assignment = assign_nearest(config, centers)
        payload["epsilon"] = args.epsilon
        payload["certified_no_switch"] = no_switch_certificate(assignment, args.epsilon)
        payload["switch_candidates"] = sorted(switch_candidates(assignment, args.epsilon))
    _emit(dump_json(payload), args.out)
    return 0


def _parse_grid(text: str) -> list[float]:
    try:
        grid = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--grid must be comma-separated numbers, got {text!r}") from None
    return grid


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    config, centers = _resolve_inputs(args, seed)
    result = sweep_table(config, centers, _parse_grid(args.grid), trials=args.trials, seed=seed)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write(f"# threshold={format_float(result.threshold)}\n")
        buf.write("epsilon,mean_S,max_S,threshold_flag\n")
        for row in result.rows:
            buf.write(
                f"{format_float(row.epsilon)},{format_float(row.mean_distance)},"
                f"{format_float(row.max_distance)},{int(row.below_threshold)}\n"
            )
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dump_json(result.to_json_dict()), args.out)
    return 0


def cmd_preset(args) -> int:
    seed = _resolve_seed(args)
    config, centers = make_preset(
        args.name, n=args.n, sigma0=args.sigma0, seed=seed,
        epsilon=args.epsilon, m=args.m, delta=args.delta,
    )
    if args.format == "csv":
        if args.out is None:
            raise ValueError("csv preset output needs --out (two files are written)")
        points_path = Path(f"{args.out}.points.csv")
        centers_path = Path(f"{args.out}.centers.csv")
        points_path.write_text(points_to_csv(config))
        centers_path.write_text(centers_to_csv(centers))
        sys.stdout.write(f"wrote {points_path} and {centers_path}\n")
        return 0
    payload = {**points_to_json_dict(config), **centers_to_json_dict(centers), "preset": args.name}
    _emit(dump_json(payload), args.out)
    return 0


def cmd_trajectory(args) -> int:
    traj = read_trajectory_file(args.points, args.centers)
    if traj.horizon < 1:
        raise ValueError("trajectory needs at least two snapshots")
    if args.eta is not None and not 0.0 < args.eta <= 1.0:
        raise ValueError("--eta must lie in (0, 1]")
    deltas = step_sizes(traj)
    budgets = deltas.cumsum()
    certs = [persistence_certificate(traj, t) for t in range(1, traj.horizon + 1)]
    stepwise = stepwise_stability_check(traj)
    parts = snapshot_partitions(traj)
    distances = [partition_distance(parts[0], parts[t]) for t in range(traj.horizon + 1)]

    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write("step,delta,cumulative_budget,persistence_certified,stepwise_pass,distance_from_initial\n")
        for t in range(traj.horizon):
            buf.write(
                f"{t},{format_float(deltas[t])},{format_float(budgets[t])},"
                f"{int(certs[t].certified)},{int(stepwise[t])},{format_float(distances[t + 1])}\n"
            )
        _emit(buf.getvalue(), args.out)
        return 0

    payload = {
        "snapshots": traj.horizon + 1,
        "n": traj.n,
        "d": traj.d,
        "centers_fixed_over_time": True,
        "initial_min_margin": certs[0].initial_radius_lower_bound * 2.0,
        "initial_radius_lower_bound": certs[0].initial_radius_lower_bound,
        "step_sizes": [float(v) for v in deltas],
        "cumulative_budget": [float(v) for v in budgets],
        "persistence": [
            {
                "horizon": c.horizon,
                "cumulative_budget": c.cumulative_budget,
                "certified": c.certified,
            }
            for c in certs
        ],
        "stepwise_pass": stepwise,
        "distance_from_initial": distances,
    }
    if args.eta is not None:
        from .dynamics import instability_time

        tau = instability_time(traj, args.eta)
        payload["eta"] = args.eta
        payload["instability_time"] = tau
        if tau is None:
            payload["instability_time_note"] = "not observed within horizon"
    _emit(dump_json(payload), args.out)
    return 0


def cmd_montecarlo(args) -> int:
    seed = _resolve_seed(args)
    config, centers = _resolve_inputs(args, seed)
    if (args.rho is None) == (args.sigma is None):
        raise ValueError("choose exactly one noise model: --rho (bounded) or --sigma (gaussian)")
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    if args.rho is not None:
        model = PerturbationModel.bounded_disk(args.rho, dim=config.d)
    else:
        model = PerturbationModel.gaussian(args.sigma, dim=config.d)
    report = monte_carlo(config, centers, model, trials=args.trials, seed=seed)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write("trial,n_switched,partition_distance\n")
        for t in range(report.trials):
            buf.write(
                f"{t},{int(report.trial_switch_counts[t])},{format_float(report.trial_distances[t])}\n"
            )
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dump_json(report.to_json_dict()), args.out)
    return 0


def cmd_construct(args) -> int:
    if args.format != "json":
        raise ValueError("construct emits JSON fixtures only")
    if args.name == "single_point":
        fx = single_point_instability(args.epsilon)
    elif args.name == "many_point":
        fx = many_point_instability(args.epsilon, args.m)
    else:
        fx = near_boundary_instability(args.delta)
    _emit(dump_json(fx.to_json_dict()), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())
