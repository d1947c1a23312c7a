"""File formats: schedule JSON, trajectory CSV, report JSON, grid CSV and gate JSON."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .core import CouplingConfig
from .schemes import ControlSchedule, ControlSegment, SampledEnvelope

TRAJECTORY_HEADER = "t,p0,p1,pe,re_c01,im_c01"


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(p) -> complex:
    return complex(p[0], p[1])


def _clean(obj):
    """Make `obj` JSON-ready: numpy scalars/arrays to Python, complex to [re, im]."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text; Python floats print with round-trip precision."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def schedule_to_dict(schedule: ControlSchedule) -> dict:
    c = schedule.coupling
    doc = {
        "coupling": {"omega1": _pair(c.omega1), "omega2": _pair(c.omega2)},
        "kind": schedule.kind,
        "label": schedule.label,
    }
    if schedule.segments:
        doc["segments"] = [
            {"duration": s.duration, "delta": s.delta, "phi": s.phi, "amp_scale": s.amp_scale}
            for s in schedule.segments
        ]
    else:
        e = schedule.envelope
        doc["samples"] = {
            "dt": e.dt,
            "omega1": [_pair(z) for z in e.omega1],
            "omega2": [_pair(z) for z in e.omega2],
            "delta": [float(x) for x in e.delta],
            "phi": [float(x) for x in e.phi],
        }
    return doc


def schedule_from_dict(doc: dict) -> ControlSchedule:
    c = doc["coupling"]
    coupling = CouplingConfig(_unpair(c["omega1"]), _unpair(c["omega2"]))
    label = doc.get("label", "")
    if doc["kind"] == "piecewise":
        segs = tuple(ControlSegment(**s) for s in doc["segments"])
        return ControlSchedule(coupling, segments=segs, label=label)
    if doc["kind"] == "sampled":
        s = doc["samples"]
        env = SampledEnvelope(
            dt=s["dt"],
            omega1=np.array([_unpair(p) for p in s["omega1"]]),
            omega2=np.array([_unpair(p) for p in s["omega2"]]),
            delta=np.array(s["delta"], dtype=float),
            phi=np.array(s["phi"], dtype=float),
        )
        return ControlSchedule(coupling, envelope=env, label=label)
    raise ValueError(f"unknown schedule kind {doc['kind']!r}")


def schedule_to_json(schedule: ControlSchedule) -> str:
    return json.dumps(schedule_to_dict(schedule), indent=2) + "\n"


def schedule_from_json(text: str) -> ControlSchedule:
    return schedule_from_dict(json.loads(text))


def _g12(x: float) -> str:
    return f"{x:.12g}"


def record_to_csv(record) -> str:
    lines = [TRAJECTORY_HEADER]
    for t, (p0, p1, pe), c in zip(record.times, record.populations, record.coherence_01):
        lines.append(",".join(_g12(v) for v in (t, p0, p1, pe, c.real, c.imag)))
    return "\n".join(lines) + "\n"


def write_record_csv(path, record) -> Path:
    path = Path(path)
    path.write_text(record_to_csv(record))
    return path


def read_record_csv(path) -> dict:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(TRAJECTORY_HEADER.split(","))}


def grid_to_csv(grid, relative: bool = True) -> str:
    """Matrix CSV: first row holds the delta_delta axis, first column the delta_omega axis.

    Axes are printed in units of omega when `relative` is set.
    """
    scale = grid.omega if relative else 1.0
    unit = "/omega" if relative else ""
    cols = [f"d_omega{unit}\\d_delta{unit}"] + [_g12(x / scale) for x in grid.axis_delta_delta]
    lines = [",".join(cols)]
    for x, row in zip(grid.axis_delta_omega, grid.fidelity):
        lines.append(",".join([_g12(x / scale)] + [_g12(v) for v in row]))
    return "\n".join(lines) + "\n"


def read_grid_csv(path):
    """Return (axis_delta_omega, axis_delta_delta, fidelity) as written by `grid_to_csv`."""
    rows = [line.split(",") for line in Path(path).read_text().strip().splitlines()]
    axis_d = np.array([float(x) for x in rows[0][1:]])
    axis_o = np.array([float(r[0]) for r in rows[1:]])
    fid = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
    return axis_o, axis_d, fid


def grid_to_dict(grid) -> dict:
    return {
        "axis_delta_omega": grid.axis_delta_omega,
        "axis_delta_delta": grid.axis_delta_delta,
        "omega": grid.omega,
        "fidelity": grid.fidelity,
        "metadata": grid.metadata,
    }


def gate_from_dict(doc: dict) -> np.ndarray:
    return np.array([[_unpair(p) for p in row] for row in doc["matrix"]])
