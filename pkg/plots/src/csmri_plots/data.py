"""Readers for run-directory artifacts: long-format CSVs and raw binaries.

Every reader validates the file's schema up front and raises SchemaError
with an actionable message, so a truncated or foreign file fails loudly
rather than producing an empty figure.
"""

from __future__ import annotations

import csv
import json
import re
from collections import defaultdict
from pathlib import Path

import numpy as np

TRACE_COLUMNS = ("run_id", "iter", "metric", "subband", "component", "value")
QQ_COLUMNS = ("run_id", "iter", "subband", "component", "q_theory", "q_emp")
SUBBAND_COLUMNS = ("subband", "scale", "orientation", "length", "w0_energy")

_RUN_ID = re.compile(r"^(?P<algorithm>.+)_R(?P<r>[0-9.]+)$")


class SchemaError(ValueError):
    """A run-directory file does not match its expected schema."""


def parse_run_id(run_id: str) -> tuple[str, str]:
    match = _RUN_ID.match(run_id)
    if not match:
        raise SchemaError(f"run id {run_id!r} does not look like '<algorithm>_R<factor>'")
    return match.group("algorithm"), match.group("r")


def _read_rows(path: Path, expected: tuple[str, ...]) -> list[dict]:
    if not path.exists():
        raise SchemaError(f"missing input file {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, expected header {expected}")
        missing = set(expected) - set(reader.fieldnames)
        if missing:
            raise SchemaError(
                f"{path}: missing columns {sorted(missing)} "
                f"(found {reader.fieldnames})"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows below the header")
    return rows


def load_traces(run_dir: Path) -> dict[str, dict]:
    """All trace_*.csv files, keyed by run id.

    Each value maps metric -> {(iter, subband): float}; scalar metrics use
    subband -1.
    """
    run_dir = Path(run_dir)
    paths = sorted(run_dir.glob("trace_*.csv"))
    if not paths:
        raise SchemaError(f"no trace_*.csv files in {run_dir}")
    traces: dict[str, dict] = {}
    for path in paths:
        metrics: dict = defaultdict(dict)
        for row in _read_rows(path, TRACE_COLUMNS):
            try:
                key = (int(row["iter"]), int(row["subband"]))
                value = float(row["value"])
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{path}: malformed row {row}: {exc}") from exc
            metrics[row["metric"]][key] = value
            run_id = row["run_id"]
        parse_run_id(run_id)
        traces[run_id] = dict(metrics)
    return traces


def metric_curve(trace: dict, metric: str) -> tuple[np.ndarray, np.ndarray]:
    """Iteration-indexed values of a scalar (subband = -1) metric."""
    if metric not in trace:
        raise SchemaError(f"trace has no {metric!r} rows "
                          f"(available: {sorted(trace)})")
    pairs = sorted((k, v) for (k, j), v in trace[metric].items() if j == -1)
    if not pairs:
        raise SchemaError(f"metric {metric!r} has no whole-image (subband -1) rows")
    iters, values = zip(*pairs)
    return np.array(iters), np.array(values)


def subband_series(trace: dict, metric: str) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Per-subband iteration series of a metric."""
    if metric not in trace:
        raise SchemaError(f"trace has no {metric!r} rows")
    by_band: dict[int, list] = defaultdict(list)
    for (k, j), v in trace[metric].items():
        if j >= 0:
            by_band[j].append((k, v))
    return {
        j: tuple(np.array(t) for t in zip(*sorted(pairs)))
        for j, pairs in by_band.items()
    }


def load_qq(path: Path) -> dict[tuple[int, int, str], tuple[np.ndarray, np.ndarray]]:
    """QQ pairs keyed by (iteration, subband, component)."""
    grouped: dict = defaultdict(lambda: ([], []))
    for row in _read_rows(Path(path), QQ_COLUMNS):
        try:
            key = (int(row["iter"]), int(row["subband"]), row["component"])
            grouped[key][0].append(float(row["q_theory"]))
            grouped[key][1].append(float(row["q_emp"]))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: malformed row {row}: {exc}") from exc
    return {k: (np.array(t), np.array(e)) for k, (t, e) in grouped.items()}


def load_subbands(path: Path) -> list[dict]:
    """Subband table: index, scale, orientation, length, reference energy."""
    table = []
    for row in _read_rows(Path(path), SUBBAND_COLUMNS):
        try:
            table.append({
                "subband": int(row["subband"]),
                "scale": int(row["scale"]),
                "orientation": row["orientation"],
                "length": int(row["length"]),
                "w0_energy": float(row["w0_energy"]),
            })
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: malformed row {row}: {exc}") from exc
    return sorted(table, key=lambda r: r["subband"])


def load_array(path: Path) -> np.ndarray:
    """Flat binary array described by its .json sidecar."""
    path = Path(path)
    sidecar_path = path.with_suffix(path.suffix + ".json")
    if not path.exists() or not sidecar_path.exists():
        raise SchemaError(f"missing binary {path} or its sidecar {sidecar_path}")
    try:
        sidecar = json.loads(sidecar_path.read_text())
        dtype = np.dtype(sidecar["dtype"])
        shape = tuple(sidecar["shape"])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SchemaError(f"{sidecar_path}: malformed sidecar: {exc}") from exc
    data = np.fromfile(path, dtype=dtype)
    expected = int(np.prod(shape)) if shape else 1
    if data.size != expected:
        raise SchemaError(
            f"{path}: has {data.size} elements, sidecar shape {shape} needs {expected}"
        )
    return data.reshape(shape)
