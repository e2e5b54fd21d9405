"""Free parameters of the feature-similarity pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidConfig

__all__ = ["FsimConfig", "DEFAULT_ORIENTATIONS", "DEFAULT_WAVELENGTHS"]

DEFAULT_ORIENTATIONS = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)
DEFAULT_WAVELENGTHS = (4.0, 8.0)


@dataclass(frozen=True)
class FsimConfig:
    """Every knob of the feature-similarity computation.

    Scale weights default to uniform ``1/scales`` so identical inputs score
    exactly 1. Stabilizers and edge thresholds default *relative* to the
    plane's declared dynamic range (resolved per call), which keeps the
    score invariant to whether intensities are declared as [0, 1] or
    [0, 255]:

    * luminance/contrast stabilizers: ``1e-4 * max_value ** 2``
    * structure stabilizer: half the contrast stabilizer
    * Canny thresholds: ``0.10 * max_value`` (low), ``0.30 * max_value`` (high)

    Set any of them to an absolute value to pin them.
    """

    scales: int = 3
    scale_weights: tuple[float, ...] | None = None
    luminance_stabilizer: float | None = None
    contrast_stabilizer: float | None = None
    structure_stabilizer: float | None = None
    canny_low: float | None = None
    canny_high: float | None = None
    canny_sigma: float = 1.4
    orientations: tuple[float, ...] = DEFAULT_ORIENTATIONS
    wavelengths: tuple[float, ...] = DEFAULT_WAVELENGTHS
    kernel_size: int = 15
    gabor_sigma: float = 3.0
    gabor_gamma: float = 0.5

    def __post_init__(self):
        if self.scale_weights is not None:
            object.__setattr__(self, "scale_weights", tuple(self.scale_weights))
        object.__setattr__(self, "orientations", tuple(self.orientations))
        object.__setattr__(self, "wavelengths", tuple(self.wavelengths))

    def validate(self) -> None:
        if self.scales < 1:
            raise InvalidConfig(f"scales must be >= 1, got {self.scales}")
        weights = self.resolved_scale_weights()
        if len(weights) != self.scales:
            raise InvalidConfig(
                f"need {self.scales} scale weights, got {len(weights)}"
            )
        if any(w <= 0 for w in weights):
            raise InvalidConfig("scale weights must be positive")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise InvalidConfig(f"scale weights must sum to 1, got {sum(weights)}")
        for name in ("luminance_stabilizer", "contrast_stabilizer", "structure_stabilizer"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InvalidConfig(f"{name} must be positive, got {value}")
        if (self.canny_low is None) != (self.canny_high is None):
            raise InvalidConfig("set both Canny thresholds or neither")
        if self.canny_low is not None:
            if not (0 < self.canny_low < self.canny_high):
                raise InvalidConfig(
                    f"need 0 < canny_low < canny_high, got "
                    f"{self.canny_low} / {self.canny_high}"
                )
        if self.canny_sigma <= 0:
            raise InvalidConfig("canny_sigma must be positive")
        if not self.orientations or not self.wavelengths:
            raise InvalidConfig("need at least one orientation and one wavelength")
        if any(w <= 0 for w in self.wavelengths):
            raise InvalidConfig("wavelengths must be positive")
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise InvalidConfig(
                f"kernel_size must be odd and >= 3, got {self.kernel_size}"
            )
        if self.gabor_sigma <= 0 or self.gabor_gamma <= 0:
            raise InvalidConfig("gabor_sigma and gabor_gamma must be positive")

    def resolved_scale_weights(self) -> tuple[float, ...]:
        if self.scale_weights is not None:
            return self.scale_weights
        return (1.0 / self.scales,) * self.scales

    def resolved_stabilizers(self, max_value: float) -> tuple[float, float, float]:
        """(luminance, contrast, structure) stabilizers for a given range."""
        contrast = self.contrast_stabilizer
        if contrast is None:
            contrast = 1e-4 * max_value * max_value
        luminance = self.luminance_stabilizer
        if luminance is None:
            luminance = 1e-4 * max_value * max_value
        structure = self.structure_stabilizer
        if structure is None:
            structure = contrast / 2.0
        return luminance, contrast, structure

    def resolved_canny_thresholds(self, max_value: float) -> tuple[float, float]:
        if self.canny_low is not None:
            return self.canny_low, self.canny_high
        return 0.10 * max_value, 0.30 * max_value
