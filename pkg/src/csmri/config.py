"""Experiment configuration: YAML loading and upfront validation."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Malformed or unparsable experiment configuration."""


@dataclass
class DensityConfig:
    degree: int = 8
    center_radius: float = 0.02
    p_min: float = 1e-3


@dataclass
class AlgorithmConfig:
    n_iters: int = 30
    # fista only: either a fixed threshold or a log grid to tune over
    lam: float | None = None
    lambda_grid: list[float] = field(default_factory=list)
    tune_budget: int | None = None


@dataclass
class ExperimentConfig:
    phantom_size: int = 64
    scales: int = 4
    snr_db: float | None = 40.0
    undersampling: list[float] = field(default_factory=lambda: [4.0])
    density: DensityConfig = field(default_factory=DensityConfig)
    algorithms: dict[str, AlgorithmConfig] = field(
        default_factory=lambda: {"vdamp": AlgorithmConfig()}
    )
    seed: int = 0
    output_dir: str = "runs"

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> list[str]:
        """All constraint violations, empty when the config is runnable."""
        problems = []
        if self.phantom_size < 16:
            problems.append(f"phantom_size {self.phantom_size} below minimum 16")
        if self.scales < 1:
            problems.append(f"scales must be >= 1, got {self.scales}")
        elif self.phantom_size % (2**self.scales):
            problems.append(
                f"phantom_size {self.phantom_size} not divisible by 2^{self.scales}"
            )
        if not self.undersampling:
            problems.append("no undersampling factors given")
        for r in self.undersampling:
            if r < 1:
                problems.append(f"undersampling factor {r} < 1")
        d = self.density
        if d.degree < 1:
            problems.append(f"density degree must be >= 1, got {d.degree}")
        if not 0 <= d.center_radius < 1:
            problems.append(f"center_radius {d.center_radius} outside [0, 1)")
        if not 0 < d.p_min <= 1:
            problems.append(f"p_min {d.p_min} outside (0, 1]")
        if not self.algorithms:
            problems.append("no algorithms selected")
        for name, alg in self.algorithms.items():
            if name not in ("vdamp", "fista", "sure_it"):
                problems.append(f"unknown algorithm {name!r}")
                continue
            if alg.n_iters < 1:
                problems.append(f"{name}: n_iters must be >= 1")
            if name == "fista":
                if alg.lam is None and not alg.lambda_grid:
                    problems.append("fista: needs lam or lambda_grid")
                if alg.lam is not None and alg.lam <= 0:
                    problems.append(f"fista: lam must be > 0, got {alg.lam}")
                if any(g <= 0 for g in alg.lambda_grid):
                    problems.append("fista: lambda_grid entries must be > 0")
        if self.snr_db is not None and self.snr_db <= 0:
            problems.append(f"snr_db must be > 0 or null (noiseless), got {self.snr_db}")
        return problems


def _coerce(raw: dict) -> ExperimentConfig:
    try:
        density = DensityConfig(**raw.pop("density", {}))
        algorithms = {
            name: AlgorithmConfig(**(params or {}))
            for name, params in raw.pop("algorithms", {"vdamp": {}}).items()
        }
        return ExperimentConfig(density=density, algorithms=algorithms, **raw)
    except TypeError as exc:
        raise ConfigError(f"unrecognized config field: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return _coerce(raw)


def validate_config(path) -> list[str]:
    """Violations of a config file, without running anything."""
    try:
        config = load_config(path)
    except ConfigError as exc:
        return [str(exc)]
    return config.validate()


def config_from_dict(raw: dict) -> ExperimentConfig:
    return _coerce(dict(raw))
