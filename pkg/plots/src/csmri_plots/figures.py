"""The five figure layouts rendered from a completed run directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import (
    SchemaError,
    load_array,
    load_qq,
    load_subbands,
    load_traces,
    metric_curve,
    parse_run_id,
    subband_series,
)

ALGORITHM_STYLE = {
    "vdamp": dict(color="tab:red", label="VDAMP"),
    "fista": dict(color="tab:blue", label="FISTA"),
    "sure_it": dict(color="tab:green", label="SURE-IT"),
}


@dataclass
class FigureSpec:
    figure: str  # fig1 .. fig5
    run_dir: Path
    out_path: Path
    log_x: bool = False
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.run_dir = Path(self.run_dir)
        self.out_path = Path(self.out_path)
        if self.figure not in FIGURES:
            raise ValueError(
                f"unknown figure {self.figure!r}; choose one of {sorted(FIGURES)}"
            )


def _grouped_runs(run_dir: Path) -> dict[str, dict[str, dict]]:
    """trace data regrouped as {undersampling tag: {algorithm: trace}}."""
    by_r: dict[str, dict[str, dict]] = {}
    for run_id, trace in load_traces(run_dir).items():
        algorithm, r_tag = parse_run_id(run_id)
        by_r.setdefault(r_tag, {})[algorithm] = trace
    return by_r


def _style(algorithm: str) -> dict:
    return dict(ALGORITHM_STYLE.get(algorithm, dict(color="gray", label=algorithm)))


def fig1_convergence(spec: FigureSpec) -> plt.Figure:
    """NMSE versus iteration, one panel per undersampling factor."""
    by_r = _grouped_runs(spec.run_dir)
    tags = sorted(by_r, key=float)
    fig, axes = plt.subplots(1, len(tags), figsize=(4.2 * len(tags), 3.4),
                             sharey=True, squeeze=False)
    for ax, tag in zip(axes[0], tags):
        for algorithm, trace in sorted(by_r[tag].items()):
            iters, nmse = metric_curve(trace, "nmse_db")
            ax.plot(iters, nmse, marker=".", markersize=3, **_style(algorithm))
        ax.set_title(f"R = {tag}")
        ax.set_xlabel("iteration")
        if spec.log_x:
            ax.set_xscale("symlog")
        ax.grid(alpha=0.3)
    axes[0][0].set_ylabel("NMSE (dB)")
    axes[0][-1].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def fig2_reconstructions(spec: FigureSpec) -> plt.Figure:
    """Phantom plus the final image magnitude of every run."""
    phantom = load_array(spec.run_dir / "phantom.bin")
    panels = [("ground truth", np.abs(phantom))]
    by_r = _grouped_runs(spec.run_dir)
    for tag in sorted(by_r, key=float):
        for algorithm, trace in sorted(by_r[tag].items()):
            path = spec.run_dir / f"xhat_{algorithm}_R{tag}.bin"
            image = np.abs(load_array(path))
            _, nmse = metric_curve(trace, "nmse_db")
            label = f"{_style(algorithm)['label']} R={tag}\n{nmse[-1]:.1f} dB"
            panels.append((label, image))
    cols = min(4, len(panels))
    rows = int(np.ceil(len(panels) / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(3.0 * cols, 3.2 * rows),
                             squeeze=False)
    for ax in axes.ravel():
        ax.axis("off")
    vmax = max(image.max() for _, image in panels)
    for ax, (label, image) in zip(axes.ravel(), panels):
        ax.imshow(image, cmap="gray", vmin=0, vmax=vmax)
        ax.set_title(label, fontsize=8)
        ax.axis("off")
    fig.tight_layout()
    return fig


def fig3_residuals(spec: FigureSpec) -> plt.Figure:
    """Wavelet-domain residual magnitude mosaics across early iterations."""
    paths = sorted(spec.run_dir.glob("resid_vdamp_R*_k*.bin"))
    if not paths:
        raise SchemaError(f"no resid_vdamp_R*_k*.bin files in {spec.run_dir}")
    fig, axes = plt.subplots(1, len(paths), figsize=(3.2 * len(paths), 3.4),
                             squeeze=False)
    for ax, path in zip(axes[0], paths):
        mosaic = np.abs(load_array(path))
        ax.imshow(np.log10(mosaic + 1e-8), cmap="viridis")
        ax.set_title(path.stem.replace("resid_vdamp_", ""), fontsize=9)
        ax.axis("off")
    fig.tight_layout()
    return fig


def fig4_qq(spec: FigureSpec) -> plt.Figure:
    """QQ panels, subbands as rows and iterations as columns."""
    paths = sorted(spec.run_dir.glob("qq_vdamp_R*.csv"))
    if not paths:
        raise SchemaError(f"no qq_vdamp_R*.csv files in {spec.run_dir}")
    qq = load_qq(paths[-1])  # highest undersampling factor
    iters = sorted({k for k, _, _ in qq})
    subbands = sorted({j for _, j, _ in qq})
    max_rows = int(spec.options.get("max_subbands", 6))
    subbands = subbands[-max_rows:]
    fig, axes = plt.subplots(len(subbands), len(iters),
                             figsize=(2.4 * len(iters), 2.2 * len(subbands)),
                             squeeze=False)
    for row, j in enumerate(subbands):
        for col, k in enumerate(iters):
            ax = axes[row][col]
            for component, color in (("real", "tab:blue"), ("imag", "tab:orange")):
                if (k, j, component) in qq:
                    theory, empirical = qq[(k, j, component)]
                    ax.plot(theory, empirical, ".", markersize=2, color=color)
            lim = 3.5
            ax.plot([-lim, lim], [-lim, lim], "k-", linewidth=0.6)
            ax.set_xlim(-lim, lim)
            ax.set_ylim(-lim, lim)
            ax.set_xticks([])
            ax.set_yticks([])
            if row == 0:
                ax.set_title(f"k = {k}", fontsize=9)
            if col == 0:
                ax.set_ylabel(f"subband {j}", fontsize=8)
    fig.suptitle(paths[-1].stem, fontsize=10)
    fig.tight_layout()
    return fig


def fig5_subband_tracking(spec: FigureSpec) -> plt.Figure:
    """Per-subband NMSE lines with variance-predicted crosses."""
    by_r = _grouped_runs(spec.run_dir)
    tags = sorted(by_r, key=float)
    tag = tags[-1]
    if "vdamp" not in by_r[tag]:
        raise SchemaError(f"no vdamp trace for R={tag} in {spec.run_dir}")
    trace = by_r[tag]["vdamp"]
    table = load_subbands(spec.run_dir / f"subbands_R{tag}.csv")
    actual = subband_series(trace, "subband_nmse_db")
    tau = subband_series(trace, "tau")

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    cmap = plt.get_cmap("viridis")
    for row in table:
        j = row["subband"]
        if j not in actual or row["w0_energy"] <= 0:
            continue
        color = cmap(j / max(len(table) - 1, 1))
        iters, nmse = actual[j]
        ax.plot(iters, nmse, color=color, linewidth=1.0,
                label=f"{j}: s{row['scale']} {row['orientation'][:4]}")
        if j in tau:
            t_iters, t_vals = tau[j]
            predicted = 10 * np.log10(t_vals * row["length"] / row["w0_energy"])
            ax.plot(t_iters, predicted, "x", color=color, markersize=4)
    ax.set_xlabel("iteration")
    ax.set_ylabel("subband NMSE (dB)")
    ax.set_title(f"R = {tag}: lines = actual, crosses = predicted")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=6, ncol=2, frameon=False)
    fig.tight_layout()
    return fig


FIGURES = {
    "fig1": fig1_convergence,
    "fig2": fig2_reconstructions,
    "fig3": fig3_residuals,
    "fig4": fig4_qq,
    "fig5": fig5_subband_tracking,
}


def render(spec: FigureSpec) -> Path:
    """Render the requested figure and write it to spec.out_path."""
    fig = FIGURES[spec.figure](spec)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=int(spec.options.get("dpi", 150)))
    plt.close(fig)
    return spec.out_path
