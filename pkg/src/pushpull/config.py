"""Experiment configuration shared by the CLI commands and scripts.

A config file holds ``key = value`` lines (``#`` starts a comment).  Keys are
the long flag names with or without the leading dashes; ``-`` and ``_`` are
interchangeable.  Values given on the command line override the file.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ParameterError
from .monitoring import DEFAULT_PANEL_SIZES


def parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def parse_panel_sizes(text: str) -> list:
    out: list = []
    for tok in text.replace(",", " ").split():
        out.append("all" if tok.lower() == "all" else int(tok))
    return out


def parse_bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ParameterError(f"not a boolean: {text!r}")


@dataclass
class ExperimentConfig:
    edges: str | None = None
    generate: str | None = None
    directed: bool = False
    seed: int = 1
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    steps: int = 200
    runs: int = 100
    initial_fraction: float = 0.2
    t0: int = 10
    t1: int | None = None
    panel_sizes: list = field(default_factory=lambda: list(DEFAULT_PANEL_SIZES))
    running_x: int = 32
    seeds: int = 1
    engine: str = "mc"
    tol: float = 1e-10
    max_iter: int = 10_000
    eq_tol: float = 1e-10
    eq_max_iter: int = 100_000
    burn_in: int | None = None
    sweep: str | None = None
    sweep_values: list[float] | None = None
    smallness: float = 0.1
    workers: int = 1
    out: str | None = None
    format: str = "csv"

    def window(self) -> tuple[int, int]:
        t1 = self.t1 if self.t1 is not None else max(self.t0, self.steps - 10)
        return self.t0, t1

    def burn(self) -> int:
        return self.burn_in if self.burn_in is not None else self.steps // 2

    def validate(self, need_params: bool = False, need_window: bool = False) -> "ExperimentConfig":
        if (self.edges is None) == (self.generate is None):
            raise ParameterError("give exactly one of --edges or --generate")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if v is None:
                if need_params:
                    raise ParameterError(f"--{name} is required")
                continue
            if not 0.0 <= v <= 1.0:
                raise ParameterError(f"--{name}={v} is not a probability in [0, 1]")
        if not 0.0 <= self.initial_fraction <= 1.0:
            raise ParameterError("--initial-fraction must be in [0, 1]")
        if self.steps < 1:
            raise ParameterError("--steps must be at least 1")
        if self.runs < 0:
            raise ParameterError("--runs must be nonnegative")
        if self.seeds < 1:
            raise ParameterError("--seeds must be at least 1")
        if self.tol <= 0 or self.eq_tol <= 0:
            raise ParameterError("tolerances must be positive")
        if self.workers < 1:
            raise ParameterError("--workers must be at least 1")
        if self.format not in ("csv", "json"):
            raise ParameterError("--format must be csv or json")
        if self.engine not in ("mc", "model"):
            raise ParameterError("--engine must be mc or model")
        if self.sweep is not None and self.sweep not in ("alpha", "beta", "gamma"):
            raise ParameterError("--sweep must be alpha, beta or gamma")
        t0, t1 = self.window()
        if need_window and not 0 <= t0 <= t1 <= self.steps:
            raise ParameterError(f"window [{t0}, {t1}] must lie within [0, {self.steps}]")
        for x in self.panel_sizes:
            if x != "all" and (not isinstance(x, int) or x < 1):
                raise ParameterError(f"bad panel size {x!r}")
        return self


_CONVERTERS = {
    "directed": parse_bool,
    "panel_sizes": parse_panel_sizes,
    "sweep_values": parse_float_list,
}


def _convert(name: str, raw: str):
    if name in _CONVERTERS:
        return _CONVERTERS[name](raw)
    default = next(f for f in fields(ExperimentConfig) if f.name == name)
    kind = str(default.type)
    if raw.strip().lower() in ("none", ""):
        return None
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError:
        raise ParameterError(f"bad value for {name}: {raw!r}") from None
    return raw.strip()


def read_config_file(path) -> dict:
    """Parse a ``key = value`` file into typed config entries."""
    names = {f.name for f in fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key == "undirected":
            key, value = "directed", str(not parse_bool(value))
        if key not in names:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def build_config(file_values: dict, cli_values: dict) -> ExperimentConfig:
    """Defaults, then file values, then explicitly given command-line values."""
    cfg = ExperimentConfig()
    merged = {**file_values, **{k: v for k, v in cli_values.items() if v is not None}}
    return dataclasses.replace(cfg, **merged)
