"""Shared fixtures: deterministic synthetic imagery for metric tests.

Fixture content is generated with plain numpy (no package code) so that
frozen expected values never move when the package changes.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable


def textured_plane(seed: int, size: int = 256) -> np.ndarray:
    """A natural-ish test image: smooth waves, elliptical blobs, mild noise."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    img = 120.0 + 55.0 * np.sin(
        2 * np.pi * xx / (size / 3) + rng.uniform(0, 2 * np.pi)
    ) * np.cos(2 * np.pi * yy / (size / 4) + rng.uniform(0, 2 * np.pi))
    for _ in range(12):
        cx, cy = rng.uniform(0, size, 2)
        r1, r2 = rng.uniform(size / 40, size / 8, 2)
        level = rng.uniform(30, 225)
        d = ((xx - cx) / r1) ** 2 + ((yy - cy) / r2) ** 2
        img = np.where(d <= 1.0, level, img)
    img += rng.normal(0, 6.0, (size, size))
    return np.clip(img, 0.0, 255.0)


def textured_rgb(seed: int, size: int = 64) -> np.ndarray:
    """Small RGB raster with texture in every channel."""
    rng = np.random.default_rng(seed)
    channels = [
        np.clip(textured_plane(seed * 7 + c, size) + rng.normal(0, 3, (size, size)), 0, 255)
        for c in range(3)
    ]
    return np.stack(channels, axis=2).astype(np.uint8)


def fsim_oracle_pair(index: int, size: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """The i-th frozen comparison pair: a textured base against one of four
    deterministic degradations (noise, unrelated image, contrast shift,
    occlusion)."""
    o = textured_plane(1000 + index, size)
    rng = np.random.default_rng(3000 + index)
    kind = index % 4
    if kind == 0:
        g = o + rng.normal(0, 4.0 + index, (size, size))
    elif kind == 1:
        g = textured_plane(2000 + index, size)
    elif kind == 2:
        g = 0.8 * o + 20.0 + rng.normal(0, 2.0, (size, size))
    else:
        g = o.copy()
        y0, x0 = rng.integers(0, size // 2, 2)
        g[y0 : y0 + size // 4, x0 : x0 + size // 4] = rng.uniform(0, 255)
        g = g + rng.normal(0, 2.0, (size, size))
    return o, np.clip(g, 0.0, 255.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
