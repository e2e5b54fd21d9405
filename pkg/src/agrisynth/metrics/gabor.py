"""Gabor filter bank construction and response extraction.

Kernels are real cosine-phase Gabors on an orientation x wavelength grid:

    g(x, y) = exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)) * cos(2 pi x' / lambda)
    x' =  x cos(theta) + y sin(theta)
    y' = -x sin(theta) + y cos(theta)

sampled on the integer grid [-r, r]^2 (r = kernel_size // 2), then
mean-subtracted (so flat regions give zero response) and L2-normalized.
Bank order is orientation-major: index = orientation_idx * n_wavelengths
+ wavelength_idx.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfig, TooSmall
from ..image_core import ImagePlane
from .canny import EdgeMap
from .config import FsimConfig
from .convolution import convolve_bank

__all__ = ["GaborBank", "FeatureStack", "build_gabor_bank", "gabor_responses"]


@dataclass(frozen=True)
class GaborBank:
    """An immutable stack of zero-mean, unit-norm Gabor kernels."""

    kernels: tuple
    orientations: tuple
    wavelengths: tuple
    kernel_size: int
    sigma: float
    gamma: float

    def __post_init__(self):
        for k in self.kernels:
            k.setflags(write=False)

    def __len__(self) -> int:
        return len(self.kernels)

    def params(self, index: int) -> tuple[float, float]:
        """(orientation, wavelength) of the kernel at ``index``."""
        n_wave = len(self.wavelengths)
        return self.orientations[index // n_wave], self.wavelengths[index % n_wave]


@dataclass(frozen=True)
class FeatureStack:
    """Per-kernel response magnitudes for one plane, plus its edge map.

    ``edge_map`` is attached by the similarity pipeline; response-only
    stacks carry ``None``.
    """

    responses: np.ndarray  # (n_kernels, H, W), absolute magnitudes
    edge_map: EdgeMap | None = None

    def __post_init__(self):
        r = np.asarray(self.responses, dtype=np.float64)
        if r.ndim != 3:
            raise ValueError(f"responses must be (n, H, W), got shape {r.shape}")
        if self.edge_map is not None and self.edge_map.mask.shape != r.shape[1:]:
            raise ValueError(
                f"edge map shape {self.edge_map.mask.shape} does not match "
                f"response planes {r.shape[1:]}"
            )
        r.setflags(write=False)
        object.__setattr__(self, "responses", r)

    @property
    def width(self) -> int:
        return self.responses.shape[2]

    @property
    def height(self) -> int:
        return self.responses.shape[1]


def build_gabor_bank(cfg: FsimConfig | None = None) -> GaborBank:
    """Construct the kernel bank described by a config."""
    cfg = cfg or FsimConfig()
    cfg.validate()

    radius = cfg.kernel_size // 2
    coords = np.arange(-radius, radius + 1, dtype=np.float64)
    x, y = np.meshgrid(coords, coords)  # x varies along columns

    kernels = []
    for theta in cfg.orientations:
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        x_rot = x * cos_t + y * sin_t
        y_rot = -x * sin_t + y * cos_t
        envelope = np.exp(
            -(x_rot**2 + (cfg.gabor_gamma**2) * y_rot**2) / (2.0 * cfg.gabor_sigma**2)
        )
        for lam in cfg.wavelengths:
            kernel = envelope * np.cos(2.0 * np.pi * x_rot / lam)
            kernel = kernel - kernel.mean()
            norm = np.sqrt(np.sum(kernel * kernel))
            if norm == 0.0:
                raise InvalidConfig(
                    f"degenerate Gabor kernel (theta={theta}, wavelength={lam})"
                )
            kernels.append(kernel / norm)

    return GaborBank(
        kernels=tuple(kernels),
        orientations=tuple(cfg.orientations),
        wavelengths=tuple(cfg.wavelengths),
        kernel_size=cfg.kernel_size,
        sigma=cfg.gabor_sigma,
        gamma=cfg.gabor_gamma,
    )


def gabor_responses(plane: ImagePlane, bank: GaborBank) -> FeatureStack:
    """Convolve a plane with every kernel and keep absolute magnitudes.

    Same-size convolution, reflect-101 borders. The plane must exceed the
    kernel in both dimensions.
    """
    h, w = plane.values.shape
    if h <= bank.kernel_size or w <= bank.kernel_size:
        raise TooSmall(
            f"plane {w}x{h} must exceed the {bank.kernel_size}x{bank.kernel_size} kernels"
        )
    stack = convolve_bank(plane.values, bank.kernels)
    return FeatureStack(responses=np.abs(stack))
