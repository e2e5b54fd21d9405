"""Feature-similarity score between two preprocessed intensity planes.

The score combines three bounded comparison functions, each of the form
``(2ab + C) / (a^2 + b^2 + C)`` (in (0, 1], equal to 1 iff a == b):

* luminance, on Gaussian-windowed local means of the grayscale planes;
* contrast, on Gaussian-windowed local standard deviations;
* structure, on combined Gabor response magnitudes (max over the bank).

Comparisons are pooled over the union of the two Canny edge maps, weighted
by feature salience (elementwise max of the two combined Gabor magnitude
planes), and the pooled components are multiplied across dyadic scales
with configurable exponents. Inputs must already be grayscale 256x256;
coarser scales come from 2x2 mean pooling of the grayscale planes, with
features re-extracted per scale.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, InvalidConfig
from ..image_core import ImagePlane
from .canny import canny_edges
from .config import FsimConfig
from .convolution import separable_window
from .gabor import FeatureStack, build_gabor_bank, gabor_responses

__all__ = ["fsim", "extract_features", "FSIM_INPUT_SIZE"]

FSIM_INPUT_SIZE = 256

# SSIM-style local statistics window
_WINDOW_SIZE = 11
_WINDOW_SIGMA = 1.5


def extract_features(plane: ImagePlane, cfg: FsimConfig, bank=None) -> FeatureStack:
    """Gabor response magnitudes plus the Canny edge map for one plane."""
    if bank is None:
        bank = build_gabor_bank(cfg)
    stack = gabor_responses(plane, bank)
    return FeatureStack(responses=stack.responses, edge_map=canny_edges(plane, cfg))


def fsim(o: ImagePlane, g: ImagePlane, cfg: FsimConfig | None = None) -> float:
    """Feature-similarity score in [0, 1]; 1 iff the planes are identical.

    Both planes must be 256x256 with equal ``max_value`` (run the standard
    grayscale + resize preprocessing first).
    """
    cfg = cfg or FsimConfig()
    cfg.validate()
    if o.values.shape != g.values.shape:
        raise DimensionMismatch(
            f"plane shapes differ: {o.values.shape} vs {g.values.shape}"
        )
    if o.values.shape != (FSIM_INPUT_SIZE, FSIM_INPUT_SIZE):
        raise DimensionMismatch(
            f"feature similarity expects {FSIM_INPUT_SIZE}x{FSIM_INPUT_SIZE} "
            f"inputs, got {o.values.shape[1]}x{o.values.shape[0]}"
        )
    if o.max_value != g.max_value:
        raise DimensionMismatch(
            f"plane dynamic ranges differ: {o.max_value} vs {g.max_value}"
        )

    coarsest = FSIM_INPUT_SIZE >> (cfg.scales - 1)
    if coarsest <= cfg.kernel_size or coarsest < 3:
        raise InvalidConfig(
            f"{cfg.scales} scales shrink {FSIM_INPUT_SIZE}px inputs to "
            f"{coarsest}px, too small for {cfg.kernel_size}px kernels"
        )

    max_value = o.max_value
    c_lum, c_con, c_str = cfg.resolved_stabilizers(max_value)
    weights = cfg.resolved_scale_weights()
    bank = build_gabor_bank(cfg)
    window = _statistics_window()

    score = 1.0
    plane_o, plane_g = o.values, g.values
    for k in range(cfg.scales):
        if k > 0:
            plane_o = _mean_pool_2x2(plane_o)
            plane_g = _mean_pool_2x2(plane_g)
        lum, con, struct = _scale_components(
            ImagePlane(plane_o, max_value=max_value),
            ImagePlane(plane_g, max_value=max_value),
            cfg,
            bank,
            window,
            (c_lum, c_con, c_str),
        )
        assert 0.0 < lum <= 1.0 + 1e-12, f"luminance component out of range: {lum}"
        assert 0.0 < con <= 1.0 + 1e-12, f"contrast component out of range: {con}"
        assert 0.0 < struct <= 1.0 + 1e-12, f"structure component out of range: {struct}"
        score *= (lum * con * struct) ** weights[k]

    return float(min(max(score, 0.0), 1.0))


def _scale_components(o, g, cfg, bank, window, stabilizers):
    c_lum, c_con, c_str = stabilizers

    feats_o = extract_features(o, cfg, bank)
    feats_g = extract_features(g, cfg, bank)
    combined_o = feats_o.responses.max(axis=0)
    combined_g = feats_g.responses.max(axis=0)
    pool_weight = np.maximum(combined_o, combined_g)

    support = feats_o.edge_map.mask | feats_g.edge_map.mask
    if not support.any():
        support = np.ones_like(support)

    mu_o = separable_window(o.values, window)
    mu_g = separable_window(g.values, window)
    var_o = np.maximum(separable_window(o.values * o.values, window) - mu_o * mu_o, 0.0)
    var_g = np.maximum(separable_window(g.values * g.values, window) - mu_g * mu_g, 0.0)
    sd_o = np.sqrt(var_o)
    sd_g = np.sqrt(var_g)

    lum_map = (2.0 * mu_o * mu_g + c_lum) / (mu_o * mu_o + mu_g * mu_g + c_lum)
    con_map = (2.0 * sd_o * sd_g + c_con) / (sd_o * sd_o + sd_g * sd_g + c_con)
    str_map = (2.0 * combined_o * combined_g + c_str) / (
        combined_o * combined_o + combined_g * combined_g + c_str
    )

    w = pool_weight[support]
    total = w.sum()
    if total <= 0.0:
        # featureless pair (e.g. both constant): fall back to uniform pooling
        w = np.ones_like(w)
        total = w.sum()
    lum = float((w * lum_map[support]).sum() / total)
    con = float((w * con_map[support]).sum() / total)
    struct = float((w * str_map[support]).sum() / total)
    return lum, con, struct


def _statistics_window() -> np.ndarray:
    """The 11-tap Gaussian used for local mean/variance windows."""
    radius = _WINDOW_SIZE // 2
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * _WINDOW_SIGMA * _WINDOW_SIGMA))
    return k / k.sum()


def _mean_pool_2x2(values: np.ndarray) -> np.ndarray:
    """Dyadic downsampling: mean of non-overlapping 2x2 blocks."""
    h, w = values.shape
    h2, w2 = h // 2, w // 2
    trimmed = values[: h2 * 2, : w2 * 2]
    return trimmed.reshape(h2, 2, w2, 2).mean(axis=(1, 3))
