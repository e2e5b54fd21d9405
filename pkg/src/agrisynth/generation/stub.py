"""Deterministic offline generation backend.

Stands in for the remote image service during tests and dry runs. Output
is a pure function of (backend seed, job): text jobs get a layered
value-noise field with elliptical fruit primitives colored by the crop
keyword found in the prompt; variation jobs get a seeded affine resample
of the source (rotation 0.8-3 degrees, scale 0.97-1.03, shift 2 px to 2%
of the edge) plus a brightness offset of 2-6 gray levels.

Documented jitter bounds: every variation differs from its source in at
least 1% of pixels and keeps mean luminance within +-10 of the source.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..image_core import RgbImage
from .jobs import GenerationJob, cache_key

__all__ = ["StubBackend"]

# (fruit color, (background color A, background color B)) per crop keyword
_PALETTES = {
    "strawberr": ((214, 28, 58), ((86, 125, 52), (133, 98, 61))),
    "mango": ((255, 168, 38), ((74, 112, 48), (142, 106, 63))),
    "apple": ((188, 32, 38), ((78, 120, 50), (60, 92, 44))),
    "avocado": ((76, 96, 38), ((96, 128, 60), (120, 96, 56))),
    "rockmelon": ((226, 182, 120), ((130, 110, 70), (164, 140, 92))),
    "melon": ((226, 182, 120), ((130, 110, 70), (164, 140, 92))),
    "orange": ((244, 130, 26), ((70, 110, 46), (52, 84, 40))),
}
_DEFAULT_PALETTE = ((186, 74, 58), ((90, 116, 58), (120, 100, 64)))


class StubBackend:
    """Seeded procedural generator; see module docstring for the contract."""

    backend_id = "stub"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def text_to_image(self, job: GenerationJob) -> list[RgbImage]:
        return [
            _render_scene(self._rng(job, index), job.size, _palette_for(job.prompt))
            for index in range(job.count)
        ]

    def variations(self, job: GenerationJob) -> list[RgbImage]:
        source = job.source_image
        assert isinstance(source, RgbImage), "orchestration decodes sources first"
        return [
            _jittered_variation(self._rng(job, index), source, job.size)
            for index in range(job.count)
        ]

    def _rng(self, job: GenerationJob, index: int) -> np.random.Generator:
        digest = hashlib.sha256(cache_key(job).encode("ascii")).digest()
        words = [int.from_bytes(digest[i : i + 8], "big") for i in range(0, 32, 8)]
        return np.random.default_rng([self.seed, index, *words])


def _palette_for(prompt: str):
    lowered = prompt.lower()
    for keyword, palette in _PALETTES.items():
        if keyword in lowered:
            return palette
    return _DEFAULT_PALETTE


def _render_scene(rng: np.random.Generator, size: int, palette) -> RgbImage:
    fruit_color, (bg_a, bg_b) = palette
    mix = _value_noise(rng, size)
    img = np.empty((size, size, 3), dtype=np.float64)
    for c in range(3):
        img[:, :, c] = bg_a[c] + (bg_b[c] - bg_a[c]) * mix

    # soft vertical light falloff, brighter toward the top ("sky side")
    falloff = np.linspace(1.1, 0.85, size)[:, None]
    img *= falloff[:, :, None]

    for _ in range(int(rng.integers(6, 15))):
        cx, cy = rng.uniform(0.05 * size, 0.95 * size, 2)
        r1, r2 = rng.uniform(0.03 * size, 0.08 * size, 2)
        jitter = rng.uniform(-25, 25, 3)
        color = np.clip(np.array(fruit_color, dtype=np.float64) + jitter, 0, 255)
        _fill_ellipse(img, cx, cy, r1, r2, color)
        # dab of specular highlight
        _fill_ellipse(
            img,
            cx - 0.3 * r1,
            cy + 0.3 * r2,
            0.3 * r1,
            0.3 * r2,
            np.clip(color + 45, 0, 255),
        )

    img += rng.normal(0, 3.0, (size, size, 3))
    return RgbImage(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def _fill_ellipse(img: np.ndarray, cx, cy, r1, r2, color) -> None:
    size_y, size_x = img.shape[:2]
    x_lo = max(int(np.floor(cx - r1)), 0)
    x_hi = min(int(np.ceil(cx + r1)) + 1, size_x)
    y_lo = max(int(np.floor(cy - r2)), 0)
    y_hi = min(int(np.ceil(cy + r2)) + 1, size_y)
    if x_lo >= x_hi or y_lo >= y_hi:
        return
    yy, xx = np.mgrid[y_lo:y_hi, x_lo:x_hi].astype(np.float64)
    inside = ((xx - cx) / r1) ** 2 + ((yy - cy) / r2) ** 2 <= 1.0
    region = img[y_lo:y_hi, x_lo:x_hi]
    region[inside] = color


def _value_noise(rng: np.random.Generator, size: int) -> np.ndarray:
    acc = np.zeros((size, size))
    amplitude, total = 1.0, 0.0
    for cells in (4, 8, 16, 32):
        grid = rng.uniform(0.0, 1.0, (cells + 1, cells + 1))
        acc += amplitude * _upsample(grid, size)
        total += amplitude
        amplitude *= 0.55
    return acc / total


def _upsample(grid: np.ndarray, size: int) -> np.ndarray:
    cells = grid.shape[0] - 1
    coords = (np.arange(size) + 0.5) * cells / size
    i0 = np.floor(coords).astype(np.intp)
    i0 = np.minimum(i0, cells - 1)
    frac = coords - i0
    top = grid[i0[:, None], i0[None, :]] * (1 - frac[None, :]) + grid[
        i0[:, None], i0[None, :] + 1
    ] * frac[None, :]
    bottom = grid[i0[:, None] + 1, i0[None, :]] * (1 - frac[None, :]) + grid[
        i0[:, None] + 1, i0[None, :] + 1
    ] * frac[None, :]
    return top * (1 - frac[:, None]) + bottom * frac[:, None]


def _jittered_variation(rng: np.random.Generator, source: RgbImage, size: int) -> RgbImage:
    angle = np.deg2rad(rng.uniform(0.8, 3.0)) * rng.choice((-1.0, 1.0))
    scale = rng.uniform(0.97, 1.03)
    max_shift = max(2.0, 0.02 * size)
    shift = rng.uniform(2.0, max_shift, 2) * rng.choice((-1.0, 1.0), 2)

    src = source.pixels.astype(np.float64)
    src_h, src_w = src.shape[:2]

    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    # output grid -> source frame (fit to source size), then jitter about center
    sx = (xx + 0.5) * (src_w / size) - 0.5
    sy = (yy + 0.5) * (src_h / size) - 0.5
    cx, cy = (src_w - 1) / 2.0, (src_h - 1) / 2.0
    dx, dy = sx - cx, sy - cy
    cos_a, sin_a = np.cos(-angle), np.sin(-angle)
    ux = (dx * cos_a - dy * sin_a) / scale + cx - shift[0]
    uy = (dx * sin_a + dy * cos_a) / scale + cy - shift[1]
    ux = np.clip(ux, 0.0, src_w - 1.0)
    uy = np.clip(uy, 0.0, src_h - 1.0)

    x0 = np.floor(ux).astype(np.intp)
    y0 = np.floor(uy).astype(np.intp)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = (ux - x0)[:, :, None]
    fy = (uy - y0)[:, :, None]
    sampled = (
        src[y0, x0] * (1 - fx) * (1 - fy)
        + src[y0, x1] * fx * (1 - fy)
        + src[y1, x0] * (1 - fx) * fy
        + src[y1, x1] * fx * fy
    )

    luma = 0.299 * src[:, :, 0] + 0.587 * src[:, :, 1] + 0.114 * src[:, :, 2]
    mean_luma = luma.mean()
    magnitude = rng.uniform(2.0, 6.0)
    if mean_luma > 200.0:
        delta = -magnitude
    elif mean_luma < 55.0:
        delta = magnitude
    else:
        delta = magnitude * rng.choice((-1.0, 1.0))

    out = np.clip(np.floor(sampled + delta + 0.5), 0, 255).astype(np.uint8)
    return RgbImage(out)
