"""The atomic result row: one generated image scored against its reference."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..methods import Method

__all__ = ["MetricRecord"]


@dataclass(frozen=True)
class MetricRecord:
    """Scores of one (category, method, image) against its ground truth.

    ``psnr`` is ``math.inf`` exactly when ``mse`` is zero.
    """

    category: str
    method: Method
    image_id: str
    mse: float
    psnr: float
    fsim: float

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.mse < 0:
            raise ValueError(f"mse must be >= 0, got {self.mse}")
        if (self.mse == 0.0) != math.isinf(self.psnr):
            raise ValueError(
                f"psnr must be infinite iff mse is zero (mse={self.mse}, psnr={self.psnr})"
            )
        if not (0.0 <= self.fsim <= 1.0):
            raise ValueError(f"fsim must lie in [0, 1], got {self.fsim}")
