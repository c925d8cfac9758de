"""Run configuration loaded from TOML.

Example::

    seed = 7
    phantom = "aircraft"      # built-in name or path to a PGM
    size = 64
    m_values = [100, 150, 200]

    [sensing]
    density = 0.5

    [filter]
    radius = 2
    epsilon = 1e-3

Every section is optional; unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field

from .core import ParameterError
from .guided_filter import DEFAULT_EPSILON, DEFAULT_RADIUS, GuidedFilterParams
from .jigi import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE, JigiConfig, PlirSettings
from .metrics import DEFAULT_EDGE_THRESHOLD
from .plir import DEFAULT_OMEGA, DEFAULT_RANK_CUTOFF
from .sensing import DEFAULT_DENSITY

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ParameterError):
    """Configuration file is malformed or has unknown keys."""


@dataclass
class SensingSection:
    density: float = DEFAULT_DENSITY
    noise_sigma: float = 0.0


@dataclass
class PlirSection:
    omega: float = DEFAULT_OMEGA
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
    clamp: bool = True


@dataclass
class FilterSection:
    radius: int = DEFAULT_RADIUS
    epsilon: float = DEFAULT_EPSILON


@dataclass
class LoopSection:
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tolerance: float = DEFAULT_TOLERANCE


@dataclass
class MetricsSection:
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD
    max_val: float = 1.0


@dataclass
class RunConfig:
    seed: int = 0
    phantom: str = "aircraft"
    size: int = 64
    m_values: list[int] = field(default_factory=lambda: [100, 150, 200])
    out_dir: str | None = None
    sensing: SensingSection = field(default_factory=SensingSection)
    plir: PlirSection = field(default_factory=PlirSection)
    filter: FilterSection = field(default_factory=FilterSection)
    loop: LoopSection = field(default_factory=LoopSection)
    metrics: MetricsSection = field(default_factory=MetricsSection)

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        return _build(cls, data, "")

    @classmethod
    def from_toml(cls, path) -> RunConfig:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict(data)

    def jigi_config(self) -> JigiConfig:
        return JigiConfig(
            max_iterations=self.loop.max_iterations,
            tolerance=self.loop.tolerance,
            plir=PlirSettings(self.plir.omega, self.plir.rank_cutoff, self.plir.clamp),
            filter=GuidedFilterParams(self.filter.radius, self.filter.epsilon),
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _build(cls, data: dict, prefix: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section {prefix.rstrip('.') or '<root>'} must be a table")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(prefix + k for k in unknown)}")
    kwargs = {}
    for name, value in data.items():
        default = getattr(cls(), name)
        if dataclasses.is_dataclass(default):
            kwargs[name] = _build(type(default), value, f"{prefix}{name}.")
        else:
            kwargs[name] = _check_type(prefix + name, value, default)
    return cls(**kwargs)


def _check_type(key: str, value, default):
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        value = float(value) if ok else value
    elif isinstance(default, list):
        ok = isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    else:
        ok = isinstance(value, str)
    if not ok:
        raise ConfigError(f"configuration key {key} has invalid value {value!r}")
    return value
