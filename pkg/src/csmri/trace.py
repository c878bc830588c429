"""Per-iteration run records shared by all reconstruction algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class IterationRecord:
    k: int
    wall_time: float
    tau: np.ndarray | None = None
    thresholds: np.ndarray | None = None
    lambdas: np.ndarray | None = None
    alphas: np.ndarray | None = None
    nmse_db: float | None = None
    subband_nmse_db: np.ndarray | None = None
    alpha_clamped: bool = False


@dataclass
class RunTrace:
    algorithm: str
    records: list[IterationRecord] = field(default_factory=list)
    precompute_time: float = 0.0
    # optional snapshots of the pre-denoising estimate, keyed by iteration
    r_snapshots: dict = field(default_factory=dict)

    def append(self, record: IterationRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def nmse_curve(self) -> np.ndarray:
        return np.array([r.nmse_db for r in self.records], dtype=float)

    def mean_iteration_time(self) -> float:
        return float(np.mean([r.wall_time for r in self.records]))
