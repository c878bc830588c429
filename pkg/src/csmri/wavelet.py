"""Orthonormal 2D Haar wavelet transform with explicit subband indexing.

Coefficients are stored in one flat complex vector. Ordering is scale-major:
the coarse approximation block first, then per scale (coarse to fine) the
horizontal, vertical and diagonal detail blocks, each flattened row-major.
This keeps every subband contiguous, which the variance-tracking code relies
on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SQRT2 = np.sqrt(2.0)

ORIENTATIONS = ("approx", "horizontal", "vertical", "diagonal")


class DimensionError(ValueError):
    """Image dimensions incompatible with the requested decomposition depth."""


@dataclass(frozen=True)
class Subband:
    scale: int
    orientation: str
    offset: int
    length: int
    shape: tuple[int, int]


@dataclass(frozen=True)
class SubbandLayout:
    """Index map from a flat coefficient vector into 1 + 3s subbands."""

    image_height: int
    image_width: int
    scales: int
    subbands: tuple[Subband, ...] = field(default=())

    @staticmethod
    def create(image_height: int, image_width: int, scales: int) -> "SubbandLayout":
        if scales < 1:
            raise ValueError(f"scales must be >= 1, got {scales}")
        div = 2**scales
        if image_height % div or image_width % div:
            raise DimensionError(
                f"image shape ({image_height}, {image_width}) not divisible by 2^{scales}"
            )
        subbands: list[Subband] = []
        offset = 0
        hs, ws = image_height // div, image_width // div
        subbands.append(Subband(scales, "approx", 0, hs * ws, (hs, ws)))
        offset = hs * ws
        for scale in range(scales, 0, -1):
            h, w = image_height >> scale, image_width >> scale
            for orientation in ("horizontal", "vertical", "diagonal"):
                subbands.append(Subband(scale, orientation, offset, h * w, (h, w)))
                offset += h * w
        assert offset == image_height * image_width
        return SubbandLayout(image_height, image_width, scales, tuple(subbands))

    @property
    def n_subbands(self) -> int:
        return len(self.subbands)

    @property
    def size(self) -> int:
        return self.image_height * self.image_width

    def subband_lengths(self) -> np.ndarray:
        return np.array([b.length for b in self.subbands])


@dataclass
class WaveletCoeffs:
    """Flat complex coefficient vector plus its subband index map."""

    values: np.ndarray
    layout: SubbandLayout

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.layout.size,):
            raise ValueError(
                f"coefficient vector of length {self.values.shape} does not match "
                f"layout size {self.layout.size}"
            )

    def subband(self, j: int) -> np.ndarray:
        """View (no copy) of the coefficients of subband ``j``."""
        return subband_view(self, j)

    def copy(self) -> "WaveletCoeffs":
        return WaveletCoeffs(self.values.copy(), self.layout)


def subband_view(coeffs: WaveletCoeffs, j: int) -> np.ndarray:
    if not 0 <= j < coeffs.layout.n_subbands:
        raise IndexError(f"subband index {j} out of range [0, {coeffs.layout.n_subbands})")
    band = coeffs.layout.subbands[j]
    return coeffs.values[band.offset : band.offset + band.length]


def _analysis_step(x: np.ndarray):
    # Row pass then column pass with 1/sqrt(2) taps; exactly orthonormal.
    lo = (x[0::2, :] + x[1::2, :]) / _SQRT2
    hi = (x[0::2, :] - x[1::2, :]) / _SQRT2
    ll = (lo[:, 0::2] + lo[:, 1::2]) / _SQRT2
    lh = (lo[:, 0::2] - lo[:, 1::2]) / _SQRT2
    hl = (hi[:, 0::2] + hi[:, 1::2]) / _SQRT2
    hh = (hi[:, 0::2] - hi[:, 1::2]) / _SQRT2
    return ll, lh, hl, hh


def _synthesis_step(ll, lh, hl, hh) -> np.ndarray:
    h2, w2 = ll.shape
    lo = np.empty((h2, 2 * w2), dtype=np.result_type(ll, lh))
    hi = np.empty_like(lo)
    lo[:, 0::2] = (ll + lh) / _SQRT2
    lo[:, 1::2] = (ll - lh) / _SQRT2
    hi[:, 0::2] = (hl + hh) / _SQRT2
    hi[:, 1::2] = (hl - hh) / _SQRT2
    x = np.empty((2 * h2, 2 * w2), dtype=lo.dtype)
    x[0::2, :] = (lo + hi) / _SQRT2
    x[1::2, :] = (lo - hi) / _SQRT2
    return x


def dwt(image: np.ndarray, scales: int) -> WaveletCoeffs:
    """Forward orthonormal Haar transform at ``scales`` decomposition levels."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise DimensionError(f"expected a 2D image, got shape {image.shape}")
    layout = SubbandLayout.create(image.shape[0], image.shape[1], scales)
    values = np.empty(layout.size, dtype=np.complex128)
    approx = image
    # Fine-to-coarse analysis; write detail blocks as they appear.
    for band_idx in range(layout.n_subbands - 1, 0, -3):
        ll, lh, hl, hh = _analysis_step(approx)
        for details, band in zip((lh, hl, hh), layout.subbands[band_idx - 2 : band_idx + 1]):
            values[band.offset : band.offset + band.length] = details.ravel()
        approx = ll
    top = layout.subbands[0]
    values[top.offset : top.offset + top.length] = approx.ravel()
    return WaveletCoeffs(values, layout)


def coeff_mosaic(coeffs: WaveletCoeffs) -> np.ndarray:
    """Arrange the flat coefficients into the classic nested 2D mosaic.

    The coarse approximation sits in the top-left corner; at each scale the
    horizontal, vertical and diagonal blocks occupy the top-right,
    bottom-left and bottom-right quadrants of their corner region.
    """
    layout = coeffs.layout
    out = np.empty((layout.image_height, layout.image_width), dtype=coeffs.values.dtype)
    quadrant = {"approx": (0, 0), "horizontal": (0, 1), "vertical": (1, 0), "diagonal": (1, 1)}
    for band in layout.subbands:
        h, w = band.shape
        qi, qj = quadrant[band.orientation]
        block = coeffs.values[band.offset : band.offset + band.length].reshape(h, w)
        out[qi * h : (qi + 1) * h, qj * w : (qj + 1) * w] = block
    return out


def idwt(coeffs: WaveletCoeffs) -> np.ndarray:
    """Inverse (synthesis) transform; exact inverse of :func:`dwt`."""
    layout = coeffs.layout
    approx = subband_view(coeffs, 0).reshape(layout.subbands[0].shape)
    band_idx = 1
    for _ in range(layout.scales):
        lh, hl, hh = (
            subband_view(coeffs, band_idx + i).reshape(layout.subbands[band_idx + i].shape)
            for i in range(3)
        )
        approx = _synthesis_step(approx, lh, hl, hh)
        band_idx += 3
    return approx
