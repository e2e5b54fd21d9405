"""Pixelwise error metrics: mean squared error and peak signal-to-noise ratio."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionMismatch
from ..image_core import ImagePlane

__all__ = ["mse", "psnr"]


def _check_pair(o: ImagePlane, g: ImagePlane) -> None:
    if o.values.shape != g.values.shape:
        raise DimensionMismatch(
            f"plane shapes differ: {o.values.shape} vs {g.values.shape}"
        )
    if o.max_value != g.max_value:
        raise DimensionMismatch(
            f"plane dynamic ranges differ: {o.max_value} vs {g.max_value}"
        )


def mse(o: ImagePlane, g: ImagePlane) -> float:
    """Mean of squared per-pixel differences between two planes."""
    _check_pair(o, g)
    diff = o.values - g.values
    return float(np.mean(diff * diff))


def psnr(o: ImagePlane, g: ImagePlane) -> float:
    """Peak signal-to-noise ratio in dB: ``10 * log10(peak^2 / MSE)``.

    The peak is ``o.max_value``. Identical planes have zero MSE; the result
    is then ``math.inf``, which callers must treat as a sentinel rather
    than a dB value.
    """
    err = mse(o, g)
    if err == 0.0:
        return math.inf
    peak = o.max_value
    return 10.0 * math.log10(peak * peak / err)
