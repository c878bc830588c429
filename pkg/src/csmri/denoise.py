"""Complex soft thresholding with SURE-automatic per-subband thresholds.

The risk estimate treats each complex entry as two real coordinates of
variance tau / 2, which gives, for threshold t on a subband of N entries:

    SURE(t) = ||g(r; t) - r||^2 - N * tau + tau * sum_{|r_i| > t} (2 - t / |r_i|)

The average denoiser derivative alpha uses the same real-coordinate
convention, so alpha = 1 at t = 0 and the SURE divergence term equals
2 * N * tau * alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelet import WaveletCoeffs


@dataclass
class SubbandVector:
    """One real value per subband (variances, thresholds or derivatives)."""

    values: np.ndarray
    semantics: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("subband vector must be 1D")

    def __len__(self) -> int:
        return len(self.values)


def soft_threshold(r: np.ndarray, t: float) -> np.ndarray:
    """Entrywise complex soft threshold r * max(1 - t/|r|, 0)."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    mag = np.abs(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(mag > t, 1.0 - t / np.maximum(mag, 1e-300), 0.0)
    return r * shrink


def sure_risk(r: np.ndarray, tau: float, t: float) -> float:
    """Unbiased MSE estimate of soft thresholding at t under CN(0, tau) noise."""
    if tau <= 0:
        raise ValueError(f"noise variance must be > 0, got {tau}")
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    mag = np.abs(r)
    above = mag > t
    n = r.size
    fidelity = float(np.sum(np.minimum(mag, t) ** 2))
    divergence = float(np.sum(2.0 - t / mag[above]))
    return fidelity - n * tau + tau * divergence


def _threshold_scan(mag: np.ndarray, tau: float) -> tuple[float, float, float]:
    """Exact SURE scan over the candidates {0} + sorted magnitudes.

    Returns the minimizing threshold together with the count of entries
    strictly above it and the sum of their inverse magnitudes (enough to
    recover the average derivative without a second pass).
    """
    n = mag.size
    # At candidate t = mag[i], entries 0..i sit at or below t (shrunk to
    # zero) and entries past the tie run containing i are strictly above.
    sq = mag**2
    prefix_sq = np.concatenate(([0.0], np.cumsum(sq)))
    with np.errstate(divide="ignore"):
        inv = np.where(mag > 0, 1.0 / np.maximum(mag, 1e-300), 0.0)
    suffix_inv = np.concatenate((np.cumsum(inv[::-1])[::-1], [0.0]))

    cand = np.concatenate(([0.0], mag))
    # Entries with magnitude equal to a candidate are shrunk to zero (boundary
    # convention), so split at the first index strictly above each candidate:
    # the right edge of each run of tied magnitudes, expanded over the run.
    run_last = np.empty(n, dtype=bool)
    np.not_equal(mag[1:], mag[:-1], out=run_last[:-1])
    run_last[-1] = True
    ends = np.flatnonzero(run_last) + 1
    first_above = np.empty(n + 1, dtype=np.intp)
    first_above[0] = 0 if mag[0] > 0 else ends[0]
    first_above[1:] = np.repeat(ends, np.diff(np.concatenate(([0], ends))))
    counts = n - first_above
    zeroed = prefix_sq[first_above]
    inv_above = suffix_inv[first_above]

    fidelity = zeroed + cand**2 * counts
    risk = fidelity - n * tau + tau * (2.0 * counts - cand * inv_above)

    # Between consecutive candidates the active set is fixed and the risk is
    # quadratic in t with derivative 2 t c - tau * sum(1/|r_i|), so its
    # minimum can sit strictly inside the interval at t = tau * inv / (2 c).
    # Candidates alone would miss those interior minima.
    hi = np.concatenate((cand[1:], [np.inf]))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stat = tau * inv_above / (2.0 * counts)
    interior = (counts > 0) & (t_stat > cand) & (t_stat < hi)
    risk_stat = np.where(
        interior,
        zeroed + t_stat**2 * counts - n * tau
        + tau * (2.0 * counts - t_stat * inv_above),
        np.inf,
    )

    all_t = np.concatenate((cand, np.where(interior, t_stat, np.inf)))
    all_risk = np.concatenate((risk, risk_stat))
    all_counts = np.concatenate((counts, counts))
    all_inv = np.concatenate((inv_above, inv_above))
    min_risk = all_risk.min()
    # ties go to the smallest threshold
    best = int(np.flatnonzero(all_risk == min_risk)[np.argmin(all_t[all_risk == min_risk])])
    return float(all_t[best]), float(all_counts[best]), float(all_inv[best])


def select_threshold(r: np.ndarray, tau: float) -> float:
    """Threshold minimizing SURE over the candidate set {0} + {|r_i|}.

    The objective restricted to these candidates is evaluated exactly in
    O(N log N) with sorted magnitudes and suffix sums; ties go to the
    smaller threshold.
    """
    if tau <= 0:
        raise ValueError(f"noise variance must be > 0, got {tau}")
    if r.size == 0:
        raise ValueError("cannot select a threshold on an empty subband")
    t, _, _ = _threshold_scan(np.sort(np.abs(r)), tau)
    return t


def alpha(r: np.ndarray, t: float) -> float:
    """Average real-Jacobian diagonal of the soft threshold over a subband."""
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    mag = np.abs(r)
    above = mag > t
    if not np.any(above):
        return 0.0
    return float(np.sum(1.0 - t / (2.0 * mag[above])) / r.size)


def denoise_colored(
    r: WaveletCoeffs, tau: SubbandVector
) -> tuple[WaveletCoeffs, SubbandVector, SubbandVector]:
    """SURE-tuned soft thresholding with a separate threshold per subband.

    Returns the denoised coefficients, the per-subband average derivative,
    and the per-subband sparse weights lambda_j = t_j / tau_j.
    """
    layout = r.layout
    if len(tau) != layout.n_subbands:
        raise ValueError(
            f"tau has {len(tau)} entries for a layout with {layout.n_subbands} subbands"
        )
    if np.any(tau.values <= 0):
        raise ValueError("subband noise variances must be > 0")
    out = np.empty_like(r.values)
    alphas = np.empty(layout.n_subbands)
    lambdas = np.empty(layout.n_subbands)
    for j, band in enumerate(layout.subbands):
        seg = r.values[band.offset : band.offset + band.length]
        mag = np.abs(seg)
        t_j, count, inv_above = _threshold_scan(np.sort(mag), tau.values[j])
        with np.errstate(divide="ignore", invalid="ignore"):
            shrink = np.where(mag > t_j, 1.0 - t_j / np.maximum(mag, 1e-300), 0.0)
        out[band.offset : band.offset + band.length] = seg * shrink
        alphas[j] = (count - 0.5 * t_j * inv_above) / band.length
        lambdas[j] = t_j / tau.values[j]
    return (
        WaveletCoeffs(out, layout),
        SubbandVector(alphas, "derivative"),
        SubbandVector(lambdas, "weight"),
    )
