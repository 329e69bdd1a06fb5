"""Run configuration: defaults, key=value config files, and CLI overrides."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError
from .problem import NeumannMode


@dataclass
class RunConfig:
    """Every knob of the end-to-end pipeline, with the benchmark defaults."""

    center_x: float = 0.0
    center_y: float = 0.0
    radius: float = 1.0
    h: float = 0.0101
    seed: int = 1
    alpha: float = 1000.0
    source_x: float = 0.5
    source_y: float = 0.5
    m_lo: int = 2
    m_hi: int = 4
    phs_exponent: int = 3
    tol: float = 1e-10
    max_iter: int = 0
    neumann_mode: str = "gradient"
    sample_count: int = 400
    sample_neighbors: int = 9
    sample_power: float = 2.0

    def validate(self) -> "RunConfig":
        if self.m_hi <= self.m_lo:
            raise ConfigurationError(
                f"m_hi={self.m_hi} must be strictly greater than m_lo={self.m_lo}"
            )
        if self.m_lo < 0:
            raise ConfigurationError(f"m_lo must be nonnegative, got {self.m_lo}")
        if not self.radius > 0:
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        if not self.h > 0:
            raise ConfigurationError(f"h must be positive, got {self.h}")
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}")
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 0:
            raise ConfigurationError(f"max_iter must be nonnegative, got {self.max_iter}")
        if self.sample_count < 2:
            raise ConfigurationError(f"sample_count must be at least 2, got {self.sample_count}")
        if self.sample_neighbors < 1:
            raise ConfigurationError(
                f"sample_neighbors must be at least 1, got {self.sample_neighbors}"
            )
        try:
            NeumannMode(self.neumann_mode)
        except ValueError:
            raise ConfigurationError(
                f"neumann_mode must be 'gradient' or 'literal', got {self.neumann_mode!r}"
            ) from None
        return self


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _parse_value(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigurationError(f"config key {key!r}: cannot parse {raw!r} as {kind}") from None


def read_config_file(path) -> dict:
    """Parse a flat key=value file; '#' starts a comment, blank lines are ignored."""
    overrides = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
        overrides[key] = _parse_value(key, raw.strip())
    return overrides


def make_config(config_file=None, **overrides) -> RunConfig:
    """Defaults, then the config file, then explicit overrides; validated."""
    values = {}
    if config_file is not None:
        values.update(read_config_file(config_file))
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"unknown config key {key!r}")
        values[key] = value
    return RunConfig(**values).validate()
