"""Run configuration shared by the CLI subcommands."""
from __future__ import annotations

import dataclasses
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .analysis.fidelity import DEFAULT_SEED
from .core import TWO_PI
from .schemes import DETUNING_ERROR_CONVENTIONS

SCHEMES = ("ae", "ps", "stirap")
INITIAL_STATES = ("0", "1", "b", "d")

_ANGLE = re.compile(r"^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""


def parse_angle(value) -> float:
    """Float, or a multiple of pi such as 'pi', 'pi/2', '2pi', '3*pi/4'."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    m = _ANGLE.match(text)
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            k = 1.0
        elif coeff == "-":
            k = -1.0
        else:
            k = float(coeff)
        div = float(m.group(2)) if m.group(2) else 1.0
        return k * math.pi / div
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {value!r}") from None


@dataclass
class RunConfig:
    """All parameters of a run. Error offsets and detuning are in units of omega."""

    scheme: str = "ps"
    delta_ratio: float = 2.0
    omega: float = TWO_PI
    theta: float = math.pi
    xi: float = 0.0
    gamma: float = 0.0
    d_omega: float = 0.0
    d_delta: float = 0.0
    convention: str = "additive"
    initial: str = "0"
    sigma: Optional[float] = None
    t_m: Optional[float] = None
    total_time: Optional[float] = None
    n_samples: int = 4000
    dt: Optional[float] = None
    record_stride: int = 1
    seed: int = DEFAULT_SEED
    out_dir: str = "."

    def validate(self) -> "RunConfig":
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.initial not in INITIAL_STATES:
            raise ConfigError(f"initial must be one of {INITIAL_STATES}, got {self.initial!r}")
        if self.convention not in DETUNING_ERROR_CONVENTIONS:
            raise ConfigError(f"convention must be one of {DETUNING_ERROR_CONVENTIONS}")
        for name in ("delta_ratio", "omega", "theta", "xi", "gamma", "d_omega", "d_delta"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if not self.omega > 0:
            raise ConfigError("omega must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be non-negative")
        if self.scheme in ("ae", "ps"):
            if not self.theta > 0:
                raise ConfigError("theta must be positive")
            if self.delta_ratio < 0:
                raise ConfigError("delta_ratio must be non-negative")
        else:
            missing = [k for k in ("sigma", "t_m", "total_time") if getattr(self, k) is None]
            if missing:
                raise ConfigError(f"stirap needs {', '.join(missing)}")
            if not self.sigma > 0 or not self.total_time > 0:
                raise ConfigError("sigma and total_time must be positive")
            if self.n_samples < 100:
                raise ConfigError("n_samples must be at least 100")
        if 1.0 + self.d_omega <= 0:
            raise ConfigError("d_omega must keep the coupling positive")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.record_stride < 1:
            raise ConfigError("record_stride must be >= 1")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def load_config_file(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(doc) - {f.name for f in dataclasses.fields(RunConfig)}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return doc


def build_config(file_values: Optional[dict] = None, overrides: Optional[dict] = None) -> RunConfig:
    """Defaults, then file values, then explicit overrides (None means not given)."""
    values = {}
    values.update(file_values or {})
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    for key in ("theta", "xi"):
        if key in values:
            values[key] = parse_angle(values[key])
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()
