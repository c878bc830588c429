"""Variable-density k-space sampling and measurement synthesis.

The sampling density is polynomial in the centered radius: outside a fully
sampled center disc, p(r) = clamp((1 - r)^d + c, p_min, 1) with the offset c
found by bisection so the expected number of samples hits N / R. The additive
offset keeps the high-frequency tail at a healthy floor, which the inverse-
probability weighting of the reconstruction needs; when the target is below
the mass of the bare polynomial the profile is shrunk multiplicatively
instead. Radii are normalized by the half-diagonal so r spans [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import KSpaceData, SamplingMask, fft2c, forward


class InfeasibleDensityError(ValueError):
    """No density scale can reach the requested expected sample count."""


@dataclass(frozen=True)
class DensityParams:
    degree: int = 8
    center_radius: float = 0.02
    undersampling: float = 4.0
    p_min: float = 1e-3


@dataclass
class ProbabilityMap:
    """Per-frequency Bernoulli sampling probabilities on the centered grid."""

    probs: np.ndarray
    params: DensityParams

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.ndim != 2:
            raise ValueError("probability map must be 2D")
        if np.any(self.probs <= 0) or np.any(self.probs > 1):
            raise ValueError("probabilities must lie in (0, 1]")

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def expected_samples(self) -> float:
        return float(self.probs.sum())


def _centered_radius(height: int, width: int) -> np.ndarray:
    # Distances from the DC position (fftshift convention), normalized by the
    # half-diagonal so the farthest corner sits at r = 1.
    ci, cj = height // 2, width // 2
    di = np.arange(height) - ci
    dj = np.arange(width) - cj
    rr = np.hypot(di[:, None], dj[None, :])
    rmax = math.hypot(max(ci, height - 1 - ci), max(cj, width - 1 - cj))
    return rr / rmax


def polynomial_pmap(
    height: int,
    width: int,
    degree: int = 8,
    center_radius: float = 0.02,
    undersampling: float = 4.0,
    p_min: float = 1e-3,
    tol: float = 1e-4,
) -> ProbabilityMap:
    """Build a polynomial variable-density map with sum(p) = N / undersampling.

    Calibration adds a constant offset to the (1 - r)^degree profile (or, for
    targets below the bare profile's mass, shrinks it multiplicatively).
    Raises InfeasibleDensityError when the target is outside the reachable
    range (e.g. the fully sampled center alone exceeds N / R).
    """
    if undersampling < 1:
        raise ValueError(f"undersampling factor must be >= 1, got {undersampling}")
    if degree < 1:
        raise ValueError(f"polynomial degree must be >= 1, got {degree}")
    if not 0 <= center_radius < 1:
        raise ValueError(f"center radius must lie in [0, 1), got {center_radius}")
    if not 0 < p_min <= 1:
        raise ValueError(f"p_min must lie in (0, 1], got {p_min}")

    params = DensityParams(degree, center_radius, undersampling, p_min)
    n_total = height * width
    if undersampling == 1.0:
        return ProbabilityMap(np.ones((height, width)), params)

    r = _centered_radius(height, width)
    profile = (1.0 - r) ** degree
    center = r <= center_radius
    target = n_total / undersampling

    def total(scale: float, offset: float) -> float:
        p = np.clip(scale * profile + offset, p_min, 1.0)
        return float(np.where(center, 1.0, p).sum())

    if total(1.0, 0.0) <= target:
        # Raise the tail with a constant offset (the usual regime).
        knob, build = "offset", lambda v: (1.0, v)
    else:
        knob, build = "scale", lambda v: (v, 0.0)

    lo, hi = 0.0, 1.0
    if total(*build(lo)) > target * (1 + tol) or total(*build(hi)) < target * (1 - tol):
        raise InfeasibleDensityError(
            f"cannot reach expected sample count {target:.1f}: reachable {knob} range "
            f"gives [{total(*build(lo)):.1f}, {total(*build(hi)):.1f}]"
        )
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if total(*build(mid)) < target:
            lo = mid
        else:
            hi = mid
    scale, offset = build(0.5 * (lo + hi))
    probs = np.where(center, 1.0, np.clip(scale * profile + offset, p_min, 1.0))
    return ProbabilityMap(probs, params)


def draw_mask(pmap: ProbabilityMap, seed) -> SamplingMask:
    """Draw each frequency independently with its map probability."""
    rng = np.random.default_rng(seed)
    sampled = rng.random(pmap.shape) < pmap.probs
    return SamplingMask(sampled)


def synthesize(
    x0: np.ndarray,
    mask: SamplingMask,
    snr_db: float | None,
    seed=None,
) -> KSpaceData:
    """Noisy measurements y = forward(x0) + CN(0, noise_var I).

    noise_var is set so that ||F x0||^2 / (N * noise_var) matches the
    requested SNR under the unitary FFT convention. snr_db of None or +inf
    gives noiseless data.
    """
    x0 = np.asarray(x0)
    clean = forward(x0, mask)
    if snr_db is None or (math.isinf(snr_db) and snr_db > 0):
        return KSpaceData(clean, 0.0)
    if not math.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite or +inf, got {snr_db}")
    n_total = x0.size
    k0 = fft2c(x0)
    noise_var = float(np.vdot(k0, k0).real) / (n_total * 10.0 ** (snr_db / 10.0))
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(noise_var / 2.0)
    noise = rng.normal(0.0, sigma, mask.n) + 1j * rng.normal(0.0, sigma, mask.n)
    return KSpaceData(clean + noise, noise_var)


# Modified Shepp-Logan ellipse table: (additive intensity, semi-axis a,
# semi-axis b, center x, center y, rotation in degrees).
SHEPP_LOGAN_ELLIPSES = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.605, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
)


def shepp_logan(height: int, width: int) -> np.ndarray:
    """Render the ten-ellipse Shepp-Logan phantom, real-valued in [0, 1]."""
    if height < 16 or width < 16:
        raise ValueError(f"phantom grid must be at least 16x16, got {height}x{width}")
    ys = np.linspace(-1.0, 1.0, height)[:, None]
    xs = np.linspace(-1.0, 1.0, width)[None, :]
    img = np.zeros((height, width))
    for value, a, b, x0, y0, phi_deg in SHEPP_LOGAN_ELLIPSES:
        phi = math.radians(phi_deg)
        xr = (xs - x0) * math.cos(phi) + (ys - y0) * math.sin(phi)
        yr = -(xs - x0) * math.sin(phi) + (ys - y0) * math.cos(phi)
        img += value * ((xr / a) ** 2 + (yr / b) ** 2 <= 1.0)
    return np.clip(img, 0.0, 1.0).astype(np.complex128)
