"""Run configuration shared by the CLI subcommands.

A RunConfig is a plain serializable record of everything that determines a
run's output; two runs with equal configs produce byte-identical files.  A
JSON config file given on the command line overrides the corresponding
flags.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .errors import ConfigError


@dataclass
class RunConfig:
    command: str = ""
    family: str = "V"
    alpha: float | None = None
    beta: float | None = None
    p_het: float | None = None
    tensor_in: str | None = None

    start: tuple | None = None
    steps: int | None = None
    burn_in: int = 100_000
    samples: int | None = 100_000
    horizon: int = 10_000
    order: int = 1
    pairs: int = 50
    lattice: int = 15
    max_iter: int = 60
    tol: float = 1e-12
    window: int | None = None
    tol_conv: float = 1e-9
    p_max: int = 12
    epsilon: float | None = None
    epsilon_multiplier: float = 3.0
    delta_low: float = 1e-3
    delta_high: float = 0.1
    lyap_steps: int = 100_000
    grid: str | None = None
    rng_seed: int = 20240901

    lyapunov: str | None = None
    out: str | None = None
    out_svg: str | None = None
    out_report: str | None = None
    out_prefix: str | None = None
    lyapunov_out: str | None = None
    cycle_out: str | None = None
    verdict_out: str | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if d["start"] is not None:
            d["start"] = list(d["start"])
        return json.dumps(d, indent=2, sort_keys=True)


def apply_config_file(cfg: RunConfig, path: str) -> RunConfig:
    """Overwrite config fields with values from a JSON file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        if key == "start" and value is not None:
            value = tuple(float(v) for v in value)
        setattr(cfg, key, value)
    return cfg


def parse_start(text: str) -> tuple:
    try:
        parts = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad start point {text!r}") from exc
    if len(parts) not in (2, 3):
        raise ConfigError(f"start point needs 2 or 3 coordinates, got {len(parts)}")
    return parts


def parse_grid(text: str) -> list:
    """Comma list ('0.1,0.2,0.3') or range 'start:stop:step' (inclusive
    endpoints up to rounding)."""
    if ":" in text:
        try:
            lo, hi, step = (float(v) for v in text.split(":"))
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}") from exc
        if step <= 0 or hi < lo:
            raise ConfigError(f"bad grid range {text!r}")
        n = int(round((hi - lo) / step))
        values = [lo + k * step for k in range(n + 1)]
        return [v for v in values if v <= hi + 1e-12]
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}") from exc
