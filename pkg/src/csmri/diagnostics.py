"""Error metrics and Gaussianity diagnostics for reconstruction runs.

Everything here is read-only: value inputs, value outputs, no algorithm
state. Exact-equality NMSE cases are floored at -320 dB so CSV exports stay
free of infinities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .denoise import SubbandVector
from .wavelet import WaveletCoeffs

NMSE_FLOOR_DB = -320.0
SUBBAND_ZERO_SENTINEL = float("nan")


def nmse_db(x_hat: np.ndarray, x0: np.ndarray) -> float:
    """Normalized MSE ||x_hat - x0||^2 / ||x0||^2 in dB."""
    x_hat = np.asarray(x_hat)
    x0 = np.asarray(x0)
    if x_hat.shape != x0.shape:
        raise ValueError(f"shape mismatch {x_hat.shape} vs {x0.shape}")
    ref = float(np.vdot(x0, x0).real)
    if ref == 0.0:
        raise ValueError("reference signal is identically zero")
    err = x_hat - x0
    num = float(np.vdot(err, err).real)
    if num == 0.0:
        return NMSE_FLOOR_DB
    return max(10.0 * np.log10(num / ref), NMSE_FLOOR_DB)


def subband_nmse(r: WaveletCoeffs, w0: WaveletCoeffs) -> SubbandVector:
    """Per-subband NMSE in dB; zero-energy subbands get a NaN sentinel."""
    if r.layout != w0.layout:
        raise ValueError("coefficient vectors use different layouts")
    out = np.empty(r.layout.n_subbands)
    for j, band in enumerate(r.layout.subbands):
        sl = slice(band.offset, band.offset + band.length)
        ref = float(np.vdot(w0.values[sl], w0.values[sl]).real)
        if ref == 0.0:
            out[j] = SUBBAND_ZERO_SENTINEL
            continue
        err = r.values[sl] - w0.values[sl]
        num = float(np.vdot(err, err).real)
        out[j] = max(10.0 * np.log10(num / ref), NMSE_FLOOR_DB) if num else NMSE_FLOOR_DB
    return SubbandVector(out, "nmse_db")


# Rational approximation of the standard normal inverse CDF (P. Acklam's
# coefficients; relative error below 1.2e-9 over (0, 1)).
_ICDF_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_ICDF_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_ICDF_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_ICDF_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_ICDF_SPLIT = 0.02425


def normal_quantile(p: np.ndarray) -> np.ndarray:
    """Standard Gaussian inverse CDF, vectorized, accurate to ~1e-9."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0) or np.any(p >= 1):
        raise ValueError("quantile probabilities must lie in (0, 1)")
    out = np.empty_like(p)

    low = p < _ICDF_SPLIT
    high = p > 1.0 - _ICDF_SPLIT
    mid = ~(low | high)

    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        num = np.polyval(_ICDF_A, r) * q
        den = np.polyval(_ICDF_B + (1.0,), r)
        out[mid] = num / den
    for sel, sign, pp in ((low, 1.0, p), (high, -1.0, 1.0 - p)):
        if np.any(sel):
            q = np.sqrt(-2.0 * np.log(pp[sel]))
            num = np.polyval(_ICDF_C, q)
            den = np.polyval(_ICDF_D + (1.0,), q)
            out[sel] = sign * num / den
    return out


@dataclass
class QQData:
    """Quantile pairs of a standardized sample against a standard Gaussian."""

    component: str
    q_theory: np.ndarray
    q_empirical: np.ndarray
    correlation: float
    subband: int = -1


def _qq_one(data: np.ndarray, n_quantiles: int, component: str) -> QQData:
    std = float(np.std(data))
    if std == 0.0:
        raise ValueError(f"{component} part has zero variance")
    z = (data - float(np.mean(data))) / std
    positions = (np.arange(1, n_quantiles + 1) - 0.5) / n_quantiles
    q_emp = np.quantile(z, positions)
    q_th = normal_quantile(positions)
    correlation = float(np.corrcoef(q_th, q_emp)[0, 1])
    return QQData(component, q_th, q_emp, correlation)


def qq_data(residual: np.ndarray, n_quantiles: int = 100) -> tuple[QQData, QQData]:
    """QQ quantile pairs of the real and imaginary parts of a residual."""
    residual = np.asarray(residual).ravel()
    if n_quantiles < 10:
        raise ValueError(f"need at least 10 quantiles, got {n_quantiles}")
    if residual.size < n_quantiles:
        raise ValueError(
            f"sample of size {residual.size} too small for {n_quantiles} quantiles"
        )
    return (
        _qq_one(residual.real, n_quantiles, "real"),
        _qq_one(residual.imag, n_quantiles, "imag"),
    )


@dataclass
class GaussianityStats:
    excess_kurtosis_real: float
    excess_kurtosis_imag: float
    skew_real: float
    skew_imag: float
    real_imag_correlation: float


def _moments(x: np.ndarray) -> tuple[float, float]:
    x = x - x.mean()
    m2 = float(np.mean(x**2))
    if m2 == 0.0:
        raise ValueError("degenerate (zero-variance) sample")
    skew = float(np.mean(x**3)) / m2**1.5
    kurt = float(np.mean(x**4)) / m2**2 - 3.0
    return kurt, skew


def gaussianity_stats(residual: np.ndarray) -> GaussianityStats:
    """Moment-based Gaussianity summary of a complex residual."""
    residual = np.asarray(residual).ravel()
    if residual.size < 100:
        raise ValueError(f"need at least 100 samples, got {residual.size}")
    kr, sr = _moments(residual.real)
    ki, si = _moments(residual.imag)
    corr = float(np.corrcoef(residual.real, residual.imag)[0, 1])
    return GaussianityStats(kr, ki, sr, si, corr)
