"""raman-ctrl command line.

Parameter precedence: built-in defaults < --config JSON file < explicit flags.
Exit codes: 0 success, 2 usage or configuration error, 3 numerical invariant
violation.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis.robustness import SchemeSpec, default_axis, robustness_grid
from .analysis.stirap import optimize_stirap
from .config import ConfigError, RunConfig, build_config, load_config_file
from .core import NumericalInvariantError
from .reproduce import FIGURES, reproduce
from .runner import coupling_for, delta_sweep, run_evolution, schedule_for, sweep_to_csv
from .two_qubit import CavityQubitParams, synthesize_two_qubit_gate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_D = RunConfig()


def _run_options() -> argparse.ArgumentParser:
    """Flags mirroring RunConfig. Unset flags stay out of the namespace so file values survive."""
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    g.add_argument("--scheme", choices=("ae", "ps", "stirap"), help=f"control scheme (default {_D.scheme})")
    g.add_argument("--delta-ratio", type=float, dest="delta_ratio", help=f"detuning in units of omega (default {_D.delta_ratio:g})")
    g.add_argument("--omega", type=float, help="total coupling omega (default 2*pi)")
    g.add_argument("--theta", help="rotation angle, float or pi multiple such as pi/2 (default pi)")
    g.add_argument("--xi", help="relative coupling phase (default 0)")
    g.add_argument("--gamma", type=float, help="decay rate of |e> into each qubit state (default 0)")
    g.add_argument("--d-omega", type=float, dest="d_omega", help="static amplitude error in units of omega (default 0)")
    g.add_argument("--d-delta", type=float, dest="d_delta", help="static detuning error in units of omega (default 0)")
    g.add_argument("--convention", choices=("additive", "follows_sign"), help="detuning error convention (default additive)")
    g.add_argument("--initial", choices=("0", "1", "b", "d"), help="initial state (default 0)")
    g.add_argument("--sigma", type=float, help="STIRAP pulse width")
    g.add_argument("--tm", type=float, dest="t_m", help="STIRAP half separation of the pulse centres")
    g.add_argument("--total-time", type=float, dest="total_time", help="STIRAP duration")
    g.add_argument("--n-samples", type=int, dest="n_samples", help=f"STIRAP envelope samples (default {_D.n_samples})")
    g.add_argument("--dt", type=float, help="integrator step (default: 200 steps per Rabi period)")
    g.add_argument("--record-stride", type=int, dest="record_stride", help="keep every n-th sample (default 1)")
    g.add_argument("--seed", type=int, help=f"random seed (default {_D.seed:#x})")
    g.add_argument("--out-dir", dest="out_dir", help="output directory (default .)")
    return p


def _config(args) -> RunConfig:
    values = vars(args)
    file_values = load_config_file(values["config"]) if "config" in values else None
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    return build_config(file_values, {k: v for k, v in values.items() if k in fields})


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    return out


def _report(path: Path) -> None:
    print(f"wrote {path}")


def cmd_evolve(args) -> int:
    cfg = _config(args)
    out = _out_dir(cfg)
    rec, summary = run_evolution(cfg)
    summary["schedule"] = io.schedule_to_dict(schedule_for(cfg)) if cfg.scheme != "stirap" else None
    _report(io.write_record_csv(out / "trajectory.csv", rec))
    _report(io.write_json(out / "summary.json", summary))
    lk = summary["leakage"]
    print(f"average_pe={lk['average_pe']:.6e} final_pe={lk['final_pe']:.6e}")
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = _config(args)
    if args.points < 1 or not args.stop >= args.start:
        raise ConfigError("scan needs points >= 1 and stop >= start")
    out = _out_dir(cfg)
    ratios = np.linspace(args.start, args.stop, args.points)
    rows = delta_sweep(cfg, ratios)
    (out / "scan.csv").write_text(sweep_to_csv(rows))
    _report(out / "scan.csv")
    doc = {"config": cfg.to_dict(), "axis": {"name": "delta_ratio", "values": ratios}, "seed": cfg.seed, "rows": rows}
    _report(io.write_json(out / "scan.json", doc))
    return EXIT_OK


def cmd_robustness(args) -> int:
    cfg = _config(args)
    if cfg.scheme == "stirap":
        raise ConfigError("robustness grids apply to the ae and ps schemes")
    if args.points < 1 or not args.limit > 0:
        raise ConfigError("robustness needs points >= 1 and limit > 0")
    out = _out_dir(cfg)
    spec = SchemeSpec(cfg.scheme, cfg.delta_ratio, cfg.omega, cfg.xi, cfg.convention)
    axis = default_axis(cfg.omega, args.limit, args.points)
    grid = robustness_grid(
        spec,
        theta=None if args.theta_average else cfg.theta,
        axis_delta_omega=axis,
        axis_delta_delta=axis,
        n_states=args.n_states,
        n_theta=args.n_theta,
        seed=cfg.seed,
    )
    (out / "grid.csv").write_text(io.grid_to_csv(grid))
    _report(out / "grid.csv")
    doc = dict(io.grid_to_dict(grid), config=cfg.to_dict(), limit=args.limit, points=args.points)
    _report(io.write_json(out / "grid.json", doc))
    print(f"center fidelity={grid.center():.12f}")
    return EXIT_OK


def cmd_stirap_optimize(args) -> int:
    cfg = _config(args)
    T = cfg.total_time
    if T is None:
        # match the ps gate time at the configured detuning
        T = schedule_for(dataclasses.replace(cfg, scheme="ps")).duration
    if not T > 0:
        raise ConfigError("total_time must be positive")
    out = _out_dir(cfg)
    guess = tuple(args.initial_guess) if args.initial_guess else None
    opt = optimize_stirap(
        T, coupling_for(cfg), n_restarts=args.restarts, seed=cfg.seed, n_samples=cfg.n_samples, initial_guess=guess
    )
    doc = {
        "config": cfg.to_dict(),
        "total_time": T,
        "sigma": opt.sigma,
        "t_m": opt.t_m,
        "final_fidelity": opt.final_fidelity,
        "average_pe": opt.average_pe,
        "seed": opt.seed,
        "restarts": args.restarts,
        "initial_guess": guess,
        "log": opt.log,
    }
    _report(io.write_json(out / "stirap_optimum.json", doc))
    print(f"sigma={opt.sigma:.6g} t_m={opt.t_m:.6g} fidelity={opt.final_fidelity:.12f} average_pe={opt.average_pe:.6e}")
    return EXIT_OK


def cmd_two_qubit(args) -> int:
    cfg = _config(args)
    if cfg.scheme == "stirap":
        raise ConfigError("two-qubit synthesis uses the ae or ps scheme")
    out = _out_dir(cfg)
    params = CavityQubitParams.from_ratio(cfg.delta_ratio, args.g1, args.g2)
    gate = synthesize_two_qubit_gate(params, cfg.theta, cfg.scheme)
    doc = dict(gate.as_dict(), config=cfg.to_dict(), g1=params.g1, g2=params.g2, delta=params.delta)
    _report(io.write_json(out / "gate.json", doc))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.figure not in FIGURES:
        raise ConfigError(f"unknown figure {args.figure!r}; expected one of {', '.join(FIGURES)}")
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from None
    path = reproduce(args.figure, out, plots=not args.no_plots)
    _report(path / "MANIFEST.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raman-ctrl",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_run_options()]

    p = sub.add_parser("evolve", parents=common, help="single trajectory: trajectory.csv + summary.json")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("scan", parents=common, help="sweep delta/omega: scan.csv + scan.json")
    p.add_argument("--start", type=float, default=1.0, help="first delta/omega (default 1)")
    p.add_argument("--stop", type=float, default=10.0, help="last delta/omega (default 10)")
    p.add_argument("--points", type=int, default=20, help="number of points (default 20)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("robustness", parents=common, help="(delta_omega, delta_delta) fidelity grid")
    p.add_argument("--limit", type=float, default=0.1, help="axis half-range in units of omega (default 0.1)")
    p.add_argument("--points", type=int, default=41, help="points per axis (default 41)")
    p.add_argument("--n-states", type=int, default=2000, dest="n_states", help="Haar states per cell (default 2000)")
    p.add_argument("--theta-average", action="store_true", dest="theta_average", help="average over theta in (0, 2pi]")
    p.add_argument("--n-theta", type=int, default=10_000, dest="n_theta", help="theta samples per cell (default 10000)")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("stirap-optimize", parents=common, help="optimize STIRAP sigma and t_m")
    p.add_argument("--restarts", type=int, default=3, help="Nelder-Mead restarts (default 3)")
    p.add_argument("--initial-guess", type=float, nargs=2, metavar=("SIGMA", "TM"), dest="initial_guess")
    p.set_defaults(func=cmd_stirap_optimize)

    p = sub.add_parser("two-qubit", parents=common, help="cavity-mediated two-qubit gate: gate.json")
    default_g = 2 * math.pi / (2 * math.sqrt(2))
    p.add_argument("--g1", type=float, default=default_g, help="qubit 1 cavity coupling (default pi/sqrt(2))")
    p.add_argument("--g2", type=float, default=default_g, help="qubit 2 cavity coupling (default pi/sqrt(2))")
    p.set_defaults(func=cmd_two_qubit)

    p = sub.add_parser("reproduce", help="figure datasets with MANIFEST.json")
    p.add_argument("figure", help=f"one of {', '.join(FIGURES)}")
    p.add_argument("--out-dir", dest="out_dir", default=".", help="parent directory (default .)")
    p.add_argument("--no-plots", action="store_true", dest="no_plots", help="skip PNG rendering")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalInvariantError as exc:
        print(f"raman-ctrl: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError, OSError) as exc:
        print(f"raman-ctrl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
