"""Canny edge extraction.

Classic four-stage pipeline: Gaussian blur, Sobel gradients, non-maximum
suppression along four quantized directions, then double-threshold
hysteresis. Decisions that vary between Canny implementations are pinned
here so results are reproducible bit-for-bit:

* blur kernel: normalized Gaussian samples on [-r, r], r = ceil(3 * sigma),
  applied separably with reflect-101 borders;
* Sobel via correlation with [[-1,0,1],[-2,0,2],[-1,0,1]] (x) and its
  transpose (y), reflect-101;
* gradient direction ``degrees(atan2(gy, gx)) mod 180`` binned at
  22.5/67.5/112.5/157.5; suppression keeps ties, with a 1e-9 relative
  slack (survive if magnitude >= neighbor * (1 - 1e-9)) so that exactly
  symmetric inputs do not lose the tie to floating-point rounding order;
* the one-pixel image border is never an edge;
* strong means magnitude >= high, weak means magnitude >= low; weak pixels
  survive only if 8-connected to a strong pixel through weak ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import binary_propagation, correlate

from ..errors import TooSmall
from ..image_core import ImagePlane
from .config import FsimConfig
from .convolution import REFLECT_101, gaussian_kernel1d, separable_window

__all__ = ["EdgeMap", "canny_edges"]

_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
_SOBEL_Y = _SOBEL_X.T

# relative slack for "at least as large as the neighbor" comparisons
_TIE_SLACK = 1e-9


@dataclass(frozen=True)
class EdgeMap:
    """Boolean edge mask with the dimensions of its source plane."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        if m.ndim != 2:
            raise ValueError(f"EdgeMap expects a 2-D mask, got shape {m.shape}")
        m = np.ascontiguousarray(m)
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]


def canny_edges(plane: ImagePlane, cfg: FsimConfig | None = None) -> EdgeMap:
    """Extract a binary edge map from an intensity plane."""
    cfg = cfg or FsimConfig()
    cfg.validate()
    h, w = plane.values.shape
    if h < 3 or w < 3:
        raise TooSmall(f"Canny needs at least a 3x3 plane, got {w}x{h}")
    low, high = cfg.resolved_canny_thresholds(plane.max_value)

    blurred = separable_window(plane.values, gaussian_kernel1d(cfg.canny_sigma))
    gx = correlate(blurred, _SOBEL_X, mode=REFLECT_101)
    gy = correlate(blurred, _SOBEL_Y, mode=REFLECT_101)
    magnitude = np.hypot(gx, gy)

    keep = _suppress_non_maxima(magnitude, gx, gy)
    strong = keep & (magnitude >= high)
    candidate = keep & (magnitude >= low)
    mask = binary_propagation(strong, structure=np.ones((3, 3), bool), mask=candidate)
    return EdgeMap(mask)


def _suppress_non_maxima(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep interior pixels that are >= both neighbors along the gradient."""
    degrees = np.degrees(np.arctan2(gy, gx)) % 180.0
    center = mag[1:-1, 1:-1]
    deg = degrees[1:-1, 1:-1]

    # (dy, dx) neighbor offsets per quantized direction bin
    bins = [
        ((deg < 22.5) | (deg >= 157.5), (0, 1)),
        ((deg >= 22.5) & (deg < 67.5), (1, 1)),
        ((deg >= 67.5) & (deg < 112.5), (1, 0)),
        ((deg >= 112.5) & (deg < 157.5), (1, -1)),
    ]
    keep_interior = np.zeros_like(center, dtype=bool)
    scale = 1.0 - _TIE_SLACK
    for in_bin, (dy, dx) in bins:
        fwd = mag[1 + dy : mag.shape[0] - 1 + dy, 1 + dx : mag.shape[1] - 1 + dx]
        bwd = mag[1 - dy : mag.shape[0] - 1 - dy, 1 - dx : mag.shape[1] - 1 - dx]
        keep_interior |= in_bin & (center >= fwd * scale) & (center >= bwd * scale)

    keep = np.zeros_like(mag, dtype=bool)
    keep[1:-1, 1:-1] = keep_interior
    return keep
