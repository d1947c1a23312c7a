"""Figure datasets: CSV/JSON data, gnuplot stubs, PNG renderings and a manifest.

Each figure directory holds a MANIFEST.json mapping every file to its panel
and recording every parameter used. Parameters chosen here because the
source figure does not state them carry `"assumed": true`.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import Callable, Dict, Optional

import numpy as np

from . import io
from .analysis.robustness import SchemeSpec, default_axis, robustness_grid
from .analysis.stirap import optimize_stirap
from .config import RunConfig
from .core import TWO_PI, CouplingConfig
from .runner import SWEEP_COLUMNS, delta_sweep, run_evolution, sweep_to_csv

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")

# reference values, kept for side-by-side comparison in the manifests
FIG2_REFERENCE_PE = {"ae": (1.20e-1, 4.95e-2, 1.56e-4), "ps": (6.86e-2, 2.58e-2, 7.81e-5)}
FIG3_REFERENCE_PE = {"stirap": (5.39e-2, 4.89e-3, 5.32e-4), "ps": (2.58e-2, 3.12e-4, 7.81e-5)}
FIG3_REPORTED_STIRAP = ((0.75, 0.175), (1.02, 0.4), (15.6, 13.4))


def _param(value, assumed: bool = False, note: str = "") -> dict:
    doc = {"value": value, "assumed": assumed}
    if note:
        doc["note"] = note
    return doc


class _Figure:
    """Collects files and manifest entries for one figure directory."""

    def __init__(self, fig_id: str, out_dir, plots: bool, parameters: dict, opts: dict):
        self.id = fig_id
        self.dir = Path(out_dir) / fig_id
        self.dir.mkdir(parents=True, exist_ok=True)
        self.plots = plots
        self.manifest = {"figure": fig_id, "parameters": parameters, "files": {}}
        if opts:
            self.manifest["overrides"] = dict(opts)

    def add(self, name: str, text: str, panel: str, kind: str, **info) -> str:
        (self.dir / name).write_text(text)
        self.manifest["files"][name] = {"panel": panel, "kind": kind, **info}
        return name

    def plot(self, name: str, panel: str, render: Callable[[Path], object], source: str):
        if not self.plots:
            return
        render(self.dir / name)
        self.manifest["files"][name] = {"panel": panel, "kind": "png", "source": source}

    def trajectory(self, stem: str, panel: str, cfg: RunConfig, title: str = "", **info) -> dict:
        rec, summary = run_evolution(cfg)
        csv = self.add(f"{stem}.csv", io.record_to_csv(rec), panel, "trajectory", summary=summary, **info)
        self.add(f"{stem}.gp", _gnuplot_trajectory(csv), panel, "gnuplot", source=csv)
        p = rec.populations
        self.plot(
            f"{stem}.png",
            panel,
            lambda path: _plotting().plot_populations(path, rec.times, p[:, 0], p[:, 1], p[:, 2], title),
            csv,
        )
        return summary

    def finish(self) -> Path:
        io.write_json(self.dir / "MANIFEST.json", self.manifest)
        return self.dir


def _plotting():
    from . import plotting

    return plotting


def _gnuplot_trajectory(csv: str) -> str:
    return (
        "set datafile separator ','\n"
        "set xlabel 't'\n"
        "set ylabel 'population'\n"
        "set y2label 'P_e' textcolor rgb 'red'\n"
        "set ytics nomirror\n"
        "set y2tics textcolor rgb 'red'\n"
        f"plot '{csv}' every ::1 using 1:2 with lines dt 4 title 'P_0', \\\n"
        "     '' every ::1 using 1:3 with lines dt 2 title 'P_1', \\\n"
        "     '' every ::1 using 1:4 axes x1y2 with lines lc rgb 'red' title 'P_e'\n"
    )


def _gnuplot_columns(csv: str, xcol: int, ycols: Dict[str, int], ylabel: str, logy: bool = False) -> str:
    lines = ["set datafile separator ','", "set xlabel 'Delta/Omega'", f"set ylabel '{ylabel}'"]
    if logy:
        lines.append("set logscale y")
    parts = [f"'{csv}' every ::1 using {xcol}:{c} with linespoints title '{t}'" for t, c in ycols.items()]
    lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"


def _gnuplot_grid(csv: str, title: str) -> str:
    return (
        "set datafile separator ','\n"
        "set xlabel 'delta Delta / Omega'\n"
        "set ylabel 'delta Omega / Omega'\n"
        f"set title '{title}'\n"
        "set cbrange [*:1]\n"
        f"plot '{csv}' matrix nonuniform with image notitle\n"
    )


def _base(**kw) -> RunConfig:
    return RunConfig(**kw).validate()


def _fig2(out_dir, plots, opts) -> Path:
    ratios = (1.0, 2.0, 40.0)
    fig = _Figure(
        "fig2",
        out_dir,
        plots,
        {
            "omega": _param(TWO_PI),
            "coupling": _param("omega1 = omega2"),
            "theta": _param(math.pi, note="gate time 2*pi/(omega - delta) implies a pi rotation"),
            "initial": _param("0", assumed=True, note="populations start in |0>"),
            "delta_ratio": _param(
                list(ratios),
                assumed=True,
                note="not stated; inferred by inverting the AE average leakage (1/4)(omega/sqrt(delta^2+omega^2))^2",
            ),
        },
        opts,
    )
    for k, ratio in enumerate(ratios):
        for scheme, panels in (("ae", "ace"), ("ps", "bdf")):
            cfg = _base(scheme=scheme, delta_ratio=ratio, theta=math.pi, initial="0")
            fig.trajectory(
                f"{scheme}_delta{ratio:g}",
                panels[k],
                cfg,
                title=f"{scheme.upper()}  $\\Delta/\\Omega={ratio:g}$",
                reference_average_pe=FIG2_REFERENCE_PE[scheme][k],
            )
    return fig.finish()


def _fig3(out_dir, plots, opts) -> Path:
    ratios = (2.0, 20.0, 40.0)
    coupling = CouplingConfig.symmetric()
    restarts = opts.get("n_restarts", 3)
    fig = _Figure(
        "fig3",
        out_dir,
        plots,
        {
            "omega": _param(TWO_PI),
            "coupling": _param("omega1 = omega2"),
            "theta": _param(math.pi),
            "initial": _param("0", assumed=True),
            "delta_ratio": _param(list(ratios)),
            "stirap_peak_per_field": _param(
                TWO_PI / math.sqrt(2), assumed=True, note="each Gaussian peaks at omega/sqrt(2), the scheme's amplitude"
            ),
            "stirap_n_samples": _param(4000, assumed=True),
            "stirap_optimizer": _param(
                {"grid_points": 20, "n_restarts": restarts, "method": "Nelder-Mead"}, assumed=True
            ),
        },
        opts,
    )
    for k, ratio in enumerate(ratios):
        panel_s, panel_p = "ace"[k], "bdf"[k]
        ps = fig.trajectory(
            f"ps_delta{ratio:g}",
            panel_p,
            _base(scheme="ps", delta_ratio=ratio, theta=math.pi),
            title=f"PS  $\\Delta/\\Omega={ratio:g}$",
            reference_average_pe=FIG3_REFERENCE_PE["ps"][k],
        )
        T = ps["total_time"]
        opt = optimize_stirap(T, coupling, n_restarts=restarts)
        reported = FIG3_REPORTED_STIRAP[k]
        refined = optimize_stirap(T, coupling, initial_guess=reported)
        log = {
            "total_time": T,
            "search": opt.log,
            "optimum": {"sigma": opt.sigma, "t_m": opt.t_m, "fidelity": opt.final_fidelity, "average_pe": opt.average_pe},
            "refined_from_reported": {
                "start": list(reported),
                "sigma": refined.sigma,
                "t_m": refined.t_m,
                "fidelity": refined.final_fidelity,
                "average_pe": refined.average_pe,
            },
        }
        fig.add(f"stirap_T{k}_optimization.json", io.dumps(log), panel_s, "optimization_log")
        fig.trajectory(
            f"stirap_T{k}",
            panel_s,
            _base(scheme="stirap", sigma=opt.sigma, t_m=opt.t_m, total_time=T),
            title=f"STIRAP  T = {T:.4g} (optimizer)",
            reference_average_pe=FIG3_REFERENCE_PE["stirap"][k],
            reported_parameters=list(reported),
        )
        fig.trajectory(
            f"stirap_T{k}_reported",
            panel_s,
            _base(scheme="stirap", sigma=reported[0], t_m=reported[1], total_time=T),
            title=f"STIRAP  T = {T:.4g} (reported $\\sigma, t_m$)",
            note="supplementary: evaluated at the reference approximate parameters",
        )
    return fig.finish()


def _fig4(out_dir, plots, opts) -> Path:
    ratios = np.linspace(1.0, 10.0, opts.get("sweep_points", 20))
    gamma = 0.5
    fig = _Figure(
        "fig4",
        out_dir,
        plots,
        {
            "omega": _param(TWO_PI),
            "coupling": _param("omega1 = omega2"),
            "theta": _param(math.pi / 2),
            "initial": _param("0"),
            "delta_ratio_trajectories": _param(2.0),
            "gamma_panel_d": _param(gamma),
            "gamma_panels_abc": _param(0.0),
            "sweep_delta_ratio": _param(
                [float(r) for r in ratios], assumed=True, note="range and spacing not stated"
            ),
        },
        opts,
    )
    for scheme, panel in (("ae", "a"), ("ps", "b")):
        fig.trajectory(
            f"{scheme}_rx_half_pi",
            panel,
            _base(scheme=scheme, delta_ratio=2.0, theta=math.pi / 2),
            title=f"{scheme.upper()}  $R_x(\\pi/2)$",
        )
    for panel, g, metric, label in (("c", 0.0, "gate_fidelity", "F_g"), ("d", gamma, "state_fidelity", "F")):
        curves = {}
        for scheme in ("ae", "ps"):
            rows = delta_sweep(_base(scheme=scheme, theta=math.pi / 2, gamma=g), ratios)
            name = fig.add(
                f"sweep_{panel}_{scheme}.csv",
                sweep_to_csv(rows),
                panel,
                "sweep",
                config=_base(scheme=scheme, theta=math.pi / 2, gamma=g).to_dict(),
                metric=metric,
            )
            col = SWEEP_COLUMNS.index(metric) + 1
            gp = _gnuplot_columns(name, 1, {label: col}, label)
            fig.add(f"sweep_{panel}_{scheme}.gp", gp, panel, "gnuplot", source=name)
            curves[scheme.upper()] = [r[metric] for r in rows]
        fig.plot(
            f"sweep_{panel}.png",
            panel,
            lambda path, curves=curves, label=label: _plotting().plot_curves(path, ratios, curves, r"$\Delta/\Omega$", label),
            f"sweep_{panel}_ae.csv,sweep_{panel}_ps.csv",
        )
    return fig.finish()


def _robustness_figure(fig_id, out_dir, plots, opts, theta_averaged: bool) -> Path:
    points = opts.get("grid_points", 41)
    limit = 0.1
    n_states = opts.get("n_states", 2000)
    n_theta = opts.get("n_theta", 10_000)
    axis = default_axis(TWO_PI, limit, points)
    params = {
        "omega": _param(TWO_PI),
        "coupling": _param("omega1 = omega2"),
        "delta_ratio": _param([3.0, 7.0]),
        "axis_limit_over_omega": _param(limit, assumed=True, note="error range not stated"),
        "grid_points": _param(points, assumed=True),
        "detuning_error_convention": _param(
            "additive", assumed=True, note="offset added to every programmed detuning, including the reversed segment"
        ),
        "fidelity": _param("average over Haar-random initial qubit states"),
    }
    if theta_averaged:
        params["theta"] = _param("uniform on (0, 2*pi]")
        params["n_theta"] = _param(n_theta)
        params["states_per_theta"] = _param(1, assumed=True, note="one Haar state per sampled angle")
    else:
        params["theta"] = _param(math.pi)
        params["n_states"] = _param(n_states, assumed=True)
    fig = _Figure(fig_id, out_dir, plots, params, opts)
    grids = {}
    for scheme, panels in (("ae", "ab"), ("ps", "cd")):
        for panel, ratio in zip(panels, (3.0, 7.0)):
            g = robustness_grid(
                SchemeSpec(scheme, ratio),
                theta=None if theta_averaged else math.pi,
                axis_delta_omega=axis,
                axis_delta_delta=axis,
                n_states=n_states,
                n_theta=n_theta,
            )
            stem = f"{scheme}_delta{ratio:g}"
            csv = fig.add(f"{stem}.csv", io.grid_to_csv(g), panel, "grid", metadata=g.metadata, center=g.center())
            fig.add(f"{stem}.gp", _gnuplot_grid(csv, f"{scheme.upper()} delta/omega={ratio:g}"), panel, "gnuplot", source=csv)
            grids[(scheme, ratio, panel)] = g
    if plots:
        floor = _plotting().common_floor(*(g.fidelity for g in grids.values()))
        for (scheme, ratio, panel), g in grids.items():
            stem = f"{scheme}_delta{ratio:g}"
            fig.plot(
                f"{stem}.png",
                panel,
                lambda path, g=g, scheme=scheme, ratio=ratio: _plotting().plot_heatmap(
                    path,
                    g.axis_delta_delta / g.omega,
                    g.axis_delta_omega / g.omega,
                    g.fidelity,
                    r"$\delta\Delta/\Omega$",
                    r"$\delta\Omega/\Omega$",
                    f"{scheme.upper()}  $\\Delta/\\Omega={ratio:g}$",
                    vmin=floor,
                ),
                f"{stem}.csv",
            )
    return fig.finish()


def _fig5(out_dir, plots, opts) -> Path:
    return _robustness_figure("fig5", out_dir, plots, opts, theta_averaged=False)


def _fig6(out_dir, plots, opts) -> Path:
    return _robustness_figure("fig6", out_dir, plots, opts, theta_averaged=True)


_BUILDERS = {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "fig6": _fig6}


def reproduce(figure_id: str, out_dir=".", plots: bool = True, options: Optional[dict] = None) -> Path:
    """Write the datasets for `figure_id` under `out_dir/figure_id` and return that directory.

    `options` shrinks the workload for quick checks (grid_points, n_states,
    n_theta, sweep_points, n_restarts); overrides are recorded in the manifest.
    """
    if figure_id not in _BUILDERS:
        raise KeyError(f"unknown figure {figure_id!r}; expected one of {FIGURES}")
    return _BUILDERS[figure_id](out_dir, plots, dict(options or {}))
