"""Shared 2-D filtering primitives.

Every convolution in the metric pipeline uses reflect-101 borders (the
edge sample is not repeated: ``d c b | a b c d | c b a``), so helpers here
pin that choice in one place. Large kernel banks go through a cached FFT
path; small separable windows use direct correlation.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np
from scipy import fft as sp_fft
from scipy.ndimage import correlate1d

__all__ = [
    "gaussian_kernel1d",
    "separable_window",
    "convolve_bank",
]

REFLECT_101 = "mirror"  # scipy.ndimage's name for reflect-101


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian samples on [-r, r], r = ceil(3 * sigma)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def separable_window(values: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlate rows then columns with a symmetric 1-D kernel, reflect-101."""
    out = correlate1d(values, kernel, axis=1, mode=REFLECT_101)
    return correlate1d(out, kernel, axis=0, mode=REFLECT_101)


_FFT_CACHE: dict[tuple, list[np.ndarray]] = {}
_FFT_CACHE_LIMIT = 32


def convolve_bank(values: np.ndarray, kernels) -> np.ndarray:
    """Same-size true convolution of one plane with a stack of 2-D kernels.

    Borders are reflect-101. All kernels must share one odd square size and
    be strictly smaller than the plane. Returns an (n, H, W) stack.

    The plane is transformed once and reused across kernels; kernel spectra
    are cached per (bank, plane shape) since metric pipelines apply the same
    bank to many planes.
    """
    h, w = values.shape
    size = kernels[0].shape[0]
    radius = size // 2

    padded = np.pad(values, radius, mode="reflect")
    shape = (
        sp_fft.next_fast_len(h + 4 * radius),
        sp_fft.next_fast_len(w + 4 * radius),
    )
    spectra = _kernel_spectra(kernels, shape)
    plane_f = sp_fft.rfft2(padded, s=shape)

    out = np.empty((len(kernels), h, w), dtype=np.float64)
    for i, kf in enumerate(spectra):
        full = sp_fft.irfft2(plane_f * kf, s=shape)
        out[i] = full[2 * radius : 2 * radius + h, 2 * radius : 2 * radius + w]
    return out


def _kernel_spectra(kernels, shape) -> list[np.ndarray]:
    digest = hashlib.sha1()
    for k in kernels:
        digest.update(k.tobytes())
    key = (digest.hexdigest(), shape)
    cached = _FFT_CACHE.get(key)
    if cached is None:
        cached = [sp_fft.rfft2(k, s=shape) for k in kernels]
        if len(_FFT_CACHE) >= _FFT_CACHE_LIMIT:
            _FFT_CACHE.clear()
        _FFT_CACHE[key] = cached
    return cached
