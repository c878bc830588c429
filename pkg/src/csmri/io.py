"""File exports: flat binary arrays with JSON sidecars and long-format CSVs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .diagnostics import QQData
from .trace import RunTrace

TRACE_COLUMNS = ("run_id", "iter", "metric", "subband", "component", "value")
QQ_COLUMNS = ("run_id", "iter", "subband", "component", "q_theory", "q_emp")


def save_array(path, arr: np.ndarray, metadata: dict | None = None) -> None:
    """Write a raw little-endian binary dump plus a .json metadata sidecar."""
    path = Path(path)
    arr = np.ascontiguousarray(arr)
    arr.tofile(path)
    sidecar = {
        "dtype": str(arr.dtype),
        "shape": list(arr.shape),
        "order": "C",
    }
    if metadata:
        sidecar["metadata"] = metadata
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )


def load_array(path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    arr = np.fromfile(path, dtype=np.dtype(sidecar["dtype"]))
    arr = arr.reshape(sidecar["shape"])
    return arr, sidecar.get("metadata", {})


def _fmt(value: float) -> str:
    return repr(float(value))


def write_trace_csv(path, run_id: str, trace: RunTrace) -> None:
    """One row per iteration per metric per subband (subband -1 = whole image)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            rows: list[tuple] = [(rec.k, "wall_time", -1, "", _fmt(rec.wall_time))]
            if rec.nmse_db is not None:
                rows.append((rec.k, "nmse_db", -1, "", _fmt(rec.nmse_db)))
            per_subband = (
                ("subband_nmse_db", rec.subband_nmse_db),
                ("tau", rec.tau),
                ("threshold", rec.thresholds),
                ("lambda", rec.lambdas),
                ("alpha", rec.alphas),
            )
            for metric, values in per_subband:
                if values is None:
                    continue
                for j, value in enumerate(values):
                    rows.append((rec.k, metric, j, "", _fmt(value)))
            for k, metric, subband, component, value in rows:
                writer.writerow((run_id, k, metric, subband, component, value))


def write_qq_csv(path, run_id: str, entries: list[tuple[int, int, QQData]]) -> None:
    """entries: (iteration, subband index, QQData) triples."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(QQ_COLUMNS)
        for k, subband, qq in entries:
            for qt, qe in zip(qq.q_theory, qq.q_empirical):
                writer.writerow((run_id, k, subband, qq.component, _fmt(qt), _fmt(qe)))
