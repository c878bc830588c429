"""Unitary centered 2D Fourier sensing operator and its adjoint.

The forward operator applies a DC-centered unitary FFT (1/sqrt(N) scaling)
and keeps only the sampled frequencies, so its rows are orthonormal and the
composition forward(adjoint(y)) is the identity on measurement space. Sampled
positions are linearized row-major over the centered grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SamplingMask:
    """Boolean k-space sampling pattern with a fixed linearization order."""

    sampled: np.ndarray

    def __post_init__(self):
        self.sampled = np.asarray(self.sampled, dtype=bool)
        if self.sampled.ndim != 2:
            raise ValueError(f"mask must be 2D, got shape {self.sampled.shape}")
        self.indices = np.flatnonzero(self.sampled.ravel())
        if self.indices.size < 1:
            raise ValueError("mask selects no samples")

    @property
    def shape(self) -> tuple[int, int]:
        return self.sampled.shape

    @property
    def n(self) -> int:
        return int(self.indices.size)


@dataclass
class KSpaceData:
    """Sampled k-space values aligned with a mask's ordering."""

    values: np.ndarray
    noise_var: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.noise_var < 0:
            raise ValueError(f"noise variance must be >= 0, got {self.noise_var}")


def fft2c(x: np.ndarray) -> np.ndarray:
    """Centered unitary 2D FFT (DC at the array center)."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(x), norm="ortho"))


def ifft2c(k: np.ndarray) -> np.ndarray:
    """Inverse of :func:`fft2c`; also its adjoint (unitary)."""
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(k), norm="ortho"))


def forward(x: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Sampled unitary Fourier coefficients of ``x`` (length mask.n)."""
    x = np.asarray(x)
    if x.shape != mask.shape:
        raise ValueError(f"image shape {x.shape} != mask shape {mask.shape}")
    return fft2c(x).ravel()[mask.indices]


def adjoint(y: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Zero-filled adjoint: embed ``y`` at sampled positions, inverse FFT."""
    y = np.asarray(y)
    if y.shape != (mask.n,):
        raise ValueError(f"measurement length {y.shape} != mask count {mask.n}")
    k = np.zeros(mask.shape[0] * mask.shape[1], dtype=np.complex128)
    k[mask.indices] = y
    return ifft2c(k.reshape(mask.shape))
