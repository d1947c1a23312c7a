"""Matplotlib renderings of the emitted datasets.

Only the report path imports this module; the numerical modules never touch
matplotlib. Every function takes plain arrays and writes one image file.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

CM = 1 / 2.54
DPI = 150

plt.rcParams.update(
    {
        "font.size": 8,
        "axes.labelsize": 8,
        "legend.fontsize": 7,
        "xtick.direction": "in",
        "ytick.direction": "in",
        "figure.dpi": DPI,
        "savefig.bbox": "tight",
        "pdf.fonttype": 42,
        # keep PNG bytes stable across runs
        "svg.hashsalt": "raman-ctrl",
    }
)

_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def plot_populations(path, t, p0, p1, pe, title: str = "") -> Path:
    """Qubit populations on the left axis, |e> population in red on the right."""
    fig, ax = plt.subplots(figsize=(8.6 * CM, 5.5 * CM))
    ax.plot(t, p0, "-.", color="tab:blue", label=r"$P_0$")
    ax.plot(t, p1, "--", color="tab:orange", label=r"$P_1$")
    ax.set_xlabel("t")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlim(t[0], t[-1])
    ax2 = ax.twinx()
    ax2.plot(t, pe, "-", color="tab:red", lw=0.6)
    ax2.set_ylabel(r"$P_e$", color="tab:red")
    ax2.tick_params(axis="y", colors="tab:red")
    ax.legend(loc="center right", frameon=False)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_curves(path, x, curves: dict, xlabel: str, ylabel: str, logy: bool = False) -> Path:
    fig, ax = plt.subplots(figsize=(8.6 * CM, 5.5 * CM))
    styles = ["--", "-", ":", "-."]
    for k, (label, y) in enumerate(curves.items()):
        ax.plot(x, y, styles[k % len(styles)], marker="o", ms=2, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_heatmap(path, axis_x, axis_y, values, xlabel: str, ylabel: str, title: str = "", vmin=None) -> Path:
    """`values[i, j]` is drawn at (axis_x[j], axis_y[i])."""
    fig, ax = plt.subplots(figsize=(7 * CM, 6 * CM))
    mesh = ax.pcolormesh(axis_x, axis_y, values, shading="nearest", cmap="viridis", vmin=vmin, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="fidelity")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def common_floor(*grids) -> float:
    return float(min(np.min(g) for g in grids))
