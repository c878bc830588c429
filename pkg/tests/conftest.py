"""Shared fixtures: expensive Monte Carlo studies and benchmark-scale runs.

The large-scale experiments are computed once per session and shared between
the module tests and the acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pytest

from csmri import vdamp
from csmri.fourier import SamplingMask
from csmri.sampling import draw_mask, polynomial_pmap, shepp_logan, synthesize
from csmri.wavelet import SubbandLayout, dwt

# Fixed seeds for the deterministic large-scale checks. The statistical
# tolerances below are tight relative to their sampling noise (the kurtosis
# bound sits near 2.6 sigma for the smallest qualifying subband), so the
# checks run at a pinned, reproducible configuration.
MC_SEED = 20240801
PAPER_MASK_SEED = 3
PAPER_NOISE_SEED = 103


@dataclass
class MonteCarloStudy:
    """300-mask study of the first three iterations on a 128^2 phantom."""

    layout: SubbandLayout
    w0_values: np.ndarray
    mean_r: list[np.ndarray] = field(default_factory=list)  # per k
    mean_tau: list[np.ndarray] = field(default_factory=list)  # per k
    mean_sq_err: list[np.ndarray] = field(default_factory=list)  # per k
    n_draws: int = 0
    elapsed: float = 0.0


@pytest.fixture(scope="session")
def mc_study() -> MonteCarloStudy:
    """Monte Carlo over 300 masks: bias of r_k and accuracy of tau_k."""
    import time

    size, scales, r_factor, n_draws, n_iters = 128, 4, 8.0, 300, 3
    x0 = shepp_logan(size, size)
    w0 = dwt(x0, scales)
    layout = w0.layout
    pmap = polynomial_pmap(size, size, 8, 0.02, r_factor)
    spectra = vdamp.compute_spectra(layout)
    lengths = layout.subband_lengths()
    offsets = np.concatenate(([0], np.cumsum(lengths)))

    study = MonteCarloStudy(layout, w0.values.copy())
    sum_r = [np.zeros(layout.size, dtype=np.complex128) for _ in range(n_iters)]
    sum_tau = [np.zeros(layout.n_subbands) for _ in range(n_iters)]
    sum_sq = [np.zeros(layout.n_subbands) for _ in range(n_iters)]

    t0 = time.perf_counter()
    root = np.random.SeedSequence(MC_SEED)
    for draw, (mask_ss, noise_ss) in enumerate(zip(*[iter(root.spawn(2 * n_draws))] * 2)):
        mask = draw_mask(pmap, mask_ss)
        kdata = synthesize(x0, mask, 40.0, noise_ss)
        masked = vdamp._masked_profiles(spectra, mask)
        state = vdamp.initial_state(layout)
        for k in range(n_iters):
            state = vdamp.iterate(
                state, kdata.values, mask, pmap, kdata.noise_var, spectra, masked
            )
            err = state.r.values - w0.values
            sq = np.abs(err) ** 2
            sum_r[k] += state.r.values
            sum_tau[k] += state.tau.values
            sum_sq[k] += np.add.reduceat(sq, offsets[:-1]) / lengths
    study.elapsed = time.perf_counter() - t0
    study.n_draws = n_draws
    study.mean_r = [s / n_draws for s in sum_r]
    study.mean_tau = [s / n_draws for s in sum_tau]
    study.mean_sq_err = [s / n_draws for s in sum_sq]
    return study


@dataclass
class BenchmarkRun:
    """512^2, R = 8, 40 dB benchmark shared across acceptance checks."""

    x0: np.ndarray
    w0_values: np.ndarray
    layout: SubbandLayout
    mask: SamplingMask
    noise_var: float
    x_hat: np.ndarray
    y: np.ndarray
    trace: object
    fista_lam: float
    fista_trace: object
    sure_it_trace: object


@pytest.fixture(scope="session")
def benchmark_run() -> BenchmarkRun:
    from csmri import baselines

    size, scales, r_factor = 512, 4, 8.0
    x0 = shepp_logan(size, size)
    w0 = dwt(x0, scales)
    pmap = polynomial_pmap(size, size, 8, 0.02, r_factor)
    mask = draw_mask(pmap, PAPER_MASK_SEED)
    kdata = synthesize(x0, mask, 40.0, PAPER_NOISE_SEED)

    x_hat, trace = vdamp.run(
        kdata.values, mask, pmap, kdata.noise_var, scales, 30,
        ground_truth=x0, keep_r_iters=(0, 1, 2),
    )
    grid = np.geomspace(1e-4, 1e-1, 10)
    lam = baselines.tune_lambda(kdata.values, mask, x0, 30, grid, scales)
    _, fista_trace = baselines.fista(kdata.values, mask, lam, 50, scales, ground_truth=x0)
    _, sure_trace = baselines.sure_it(kdata.values, mask, w0, 30, scales, ground_truth=x0)
    return BenchmarkRun(
        x0=x0,
        w0_values=w0.values.copy(),
        layout=w0.layout,
        mask=mask,
        noise_var=kdata.noise_var,
        x_hat=x_hat,
        y=kdata.values,
        trace=trace,
        fista_lam=lam,
        fista_trace=fista_trace,
        sure_it_trace=sure_trace,
    )
