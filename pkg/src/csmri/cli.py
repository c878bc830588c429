"""Experiment runner: orchestrates reconstructions and persists artifacts.

One invocation reproduces the benchmark protocol for every configured
undersampling factor: build the density map, draw a mask, synthesize noisy
measurements, run each selected algorithm, and write traces, images, QQ data
and a reproducibility manifest. All randomness flows from the master seed
through named substreams, so reruns are deterministic.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import baselines, diagnostics, io, vdamp
from .config import ExperimentConfig, load_config, validate_config, ConfigError
from .sampling import draw_mask, polynomial_pmap, shepp_logan, synthesize
from .wavelet import SubbandLayout, coeff_mosaic, dwt

QQ_ITERS = (0, 1, 2)


def _substream(master: int, r_index: int, role: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master, spawn_key=(r_index, role))


def _rtag(r: float) -> str:
    return f"{r:g}"


def _run_cell(config: ExperimentConfig, out: Path, r_index: int, r: float, data: dict,
              algorithm: str) -> dict:
    """Run one (undersampling factor, algorithm) cell and write its files."""
    x0, w0, y, mask, pmap, noise_var = (
        data["x0"], data["w0"], data["y"], data["mask"], data["pmap"], data["noise_var"],
    )
    alg_cfg = config.algorithms[algorithm]
    tag = _rtag(r)
    run_id = f"{algorithm}_R{tag}"
    info: dict = {"algorithm": algorithm, "undersampling": r, "n_iters": alg_cfg.n_iters}

    if algorithm == "vdamp":
        x_hat, trace = vdamp.run(
            y, mask, pmap, noise_var, config.scales, alg_cfg.n_iters,
            ground_truth=x0, keep_r_iters=QQ_ITERS,
        )
        qq_entries = []
        for k, r_snap in sorted(trace.r_snapshots.items()):
            for j, band in enumerate(r_snap.layout.subbands):
                residual = r_snap.subband(j) - w0.subband(j)
                if residual.size < 16:
                    continue
                n_q = min(100, residual.size)
                for qq in diagnostics.qq_data(residual, n_q):
                    qq_entries.append((k, j, qq))
            mosaic = np.abs(coeff_mosaic(r_snap) - coeff_mosaic(w0))
            io.save_array(out / f"resid_vdamp_R{tag}_k{k}.bin", mosaic,
                          {"undersampling": r, "iteration": k})
        io.write_qq_csv(out / f"qq_vdamp_R{tag}.csv", run_id, qq_entries)
        info["precompute_time"] = trace.precompute_time
    elif algorithm == "fista":
        lam = alg_cfg.lam
        if lam is None:
            budget = alg_cfg.tune_budget or alg_cfg.n_iters
            lam = baselines.tune_lambda(y, mask, x0, budget, np.array(alg_cfg.lambda_grid),
                                        config.scales)
        x_hat, trace = baselines.fista(y, mask, lam, alg_cfg.n_iters, config.scales,
                                       ground_truth=x0)
        info["lam"] = lam
    elif algorithm == "sure_it":
        x_hat, trace = baselines.sure_it(y, mask, w0, alg_cfg.n_iters, config.scales,
                                         ground_truth=x0)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")

    io.write_trace_csv(out / f"trace_{run_id}.csv", run_id, trace)
    io.save_array(out / f"xhat_{run_id}.bin", x_hat,
                  {"algorithm": algorithm, "undersampling": r})
    info["final_nmse_db"] = trace.records[-1].nmse_db
    info["mean_iteration_time"] = trace.mean_iteration_time()
    return info


def _write_subband_csv(path: Path, layout: SubbandLayout, w0) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("subband", "scale", "orientation", "length", "w0_energy"))
        for j, band in enumerate(layout.subbands):
            seg = w0.subband(j)
            energy = float(np.vdot(seg, seg).real)
            writer.writerow((j, band.scale, band.orientation, band.length, repr(energy)))


def run_experiment(config: ExperimentConfig, out_dir: Path | None = None,
                   threads: int = 1) -> Path:
    problems = config.validate()
    if problems:
        raise ConfigError("; ".join(problems))
    out = Path(out_dir if out_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    size = config.phantom_size
    x0 = shepp_logan(size, size)
    w0 = dwt(x0, config.scales)
    layout = w0.layout
    io.save_array(out / "phantom.bin", x0, {"size": size})

    cells = []
    for r_index, r in enumerate(config.undersampling):
        d = config.density
        pmap = polynomial_pmap(size, size, d.degree, d.center_radius, r, d.p_min)
        mask = draw_mask(pmap, _substream(config.seed, r_index, 0))
        kdata = synthesize(x0, mask, config.snr_db, _substream(config.seed, r_index, 1))
        tag = _rtag(r)
        io.save_array(out / f"pmap_R{tag}.bin", pmap.probs,
                      {"undersampling": r, "degree": d.degree,
                       "center_radius": d.center_radius, "p_min": d.p_min,
                       "seed": config.seed})
        io.save_array(out / f"mask_R{tag}.bin", mask.sampled.astype(np.uint8),
                      {"undersampling": r, "n": mask.n, "seed": config.seed})
        _write_subband_csv(out / f"subbands_R{tag}.csv", layout, w0)
        data = {"x0": x0, "w0": w0, "y": kdata.values, "mask": mask,
                "pmap": pmap, "noise_var": kdata.noise_var}
        for algorithm in config.algorithms:
            cells.append((r_index, r, data, algorithm))

    results = []
    started = time.time()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_cell, config, out, ri, r, d, a)
                       for ri, r, d, a in cells]
            results = [f.result() for f in futures]
    else:
        results = [_run_cell(config, out, ri, r, d, a) for ri, r, d, a in cells]

    config_dict = config.to_dict()
    config_blob = json.dumps(config_dict, sort_keys=True).encode()
    manifest = {
        "config": config_dict,
        "config_sha256": hashlib.sha256(config_blob).hexdigest(),
        "seed": config.seed,
        "substreams": {
            _rtag(r): {"mask": [config.seed, i, 0], "noise": [config.seed, i, 1]}
            for i, r in enumerate(config.undersampling)
        },
        "cells": results,
        "elapsed_seconds": time.time() - started,
    }
    # Written last: acts as the commit marker for a completed run.
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out


def list_outputs(root: Path) -> list[dict]:
    found = []
    for manifest_path in sorted(root.rglob("manifest.json")):
        try:
            manifest = json.loads(manifest_path.read_text())
        except (OSError, json.JSONDecodeError):
            continue
        found.append({
            "directory": str(manifest_path.parent),
            "seed": manifest.get("seed"),
            "cells": [
                f"{c['algorithm']} R={c['undersampling']:g} "
                f"NMSE={c.get('final_nmse_db') or float('nan'):.1f}dB"
                for c in manifest.get("cells", [])
            ],
        })
    return found


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csmri",
                                     description="Compressed-sensing MRI experiment runner")
    sub = parser.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="run the configured experiment")
    run_p.add_argument("--config", required=True, type=Path)
    run_p.add_argument("--seed", type=int, default=None, help="override the master seed")
    run_p.add_argument("--out", type=Path, default=None, help="override the output directory")
    run_p.add_argument("--threads", type=int, default=1)

    val_p = sub.add_parser("validate", help="check a config without running")
    val_p.add_argument("--config", required=True, type=Path)

    ls_p = sub.add_parser("list-outputs", help="summarize completed runs")
    ls_p.add_argument("--out", type=Path, default=Path("runs"))
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.verb == "validate":
        try:
            problems = validate_config(args.config)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        for problem in problems:
            print(f"violation: {problem}")
        return 2 if problems else 0

    if args.verb == "list-outputs":
        for entry in list_outputs(args.out):
            print(entry["directory"])
            for cell in entry["cells"]:
                print(f"  {cell}")
        return 0

    # run
    try:
        config = load_config(args.config)
        problems = config.validate()
        if problems:
            for problem in problems:
                print(f"invalid config: {problem}", file=sys.stderr)
            return 2
        if args.seed is not None:
            config.seed = args.seed
        out = run_experiment(config, args.out, threads=args.threads)
    except (ConfigError, OSError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
