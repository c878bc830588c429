"""Compressed-sensing MRI reconstruction toolkit.

Density-compensated message passing with per-subband variance tracking and
SURE-tuned complex soft thresholding, plus FISTA and SURE-IT baselines, an
experiment CLI, and Gaussianity diagnostics.
"""

from .denoise import SubbandVector, denoise_colored, select_threshold, soft_threshold, sure_risk
from .fourier import KSpaceData, SamplingMask, adjoint, fft2c, forward, ifft2c
from .sampling import ProbabilityMap, draw_mask, polynomial_pmap, shepp_logan, synthesize
from .wavelet import SubbandLayout, WaveletCoeffs, dwt, idwt, subband_view

__all__ = [
    "SubbandVector",
    "denoise_colored",
    "select_threshold",
    "soft_threshold",
    "sure_risk",
    "KSpaceData",
    "SamplingMask",
    "adjoint",
    "fft2c",
    "forward",
    "ifft2c",
    "ProbabilityMap",
    "draw_mask",
    "polynomial_pmap",
    "shepp_logan",
    "synthesize",
    "SubbandLayout",
    "WaveletCoeffs",
    "dwt",
    "idwt",
    "subband_view",
]

__version__ = "0.1.0"
