"""Independent reference implementations used to pin expected test values.

Everything here is written straight-line from the documented contracts,
deliberately sharing no code with the package under test: plain loops,
shifted-slice accumulation instead of library convolutions, breadth-first
search instead of morphology helpers. Slow is fine; these run on small
inputs or only when (re)freezing expected values.

This module must never import from ``agrisynth``.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

GRAY_WEIGHTS = (0.299, 0.587, 0.114)


# --- pixelwise metrics ------------------------------------------------------


def oracle_mse(a: np.ndarray, b: np.ndarray) -> float:
    total = 0.0
    h, w = a.shape
    for i in range(h):
        for j in range(w):
            d = float(a[i, j]) - float(b[i, j])
            total += d * d
    return total / (h * w)


def oracle_psnr(a: np.ndarray, b: np.ndarray, peak: float = 255.0) -> float:
    err = oracle_mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


# --- preprocessing ----------------------------------------------------------


def oracle_grayscale(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded half-up, one pixel at a time."""
    h, w, _ = rgb.shape
    out = np.zeros((h, w), dtype=np.float64)
    for i in range(h):
        for j in range(w):
            r, g, b = (float(rgb[i, j, c]) for c in range(3))
            value = GRAY_WEIGHTS[0] * r + GRAY_WEIGHTS[1] * g + GRAY_WEIGHTS[2] * b
            out[i, j] = math.floor(value + 0.5)
    return out


def oracle_bilinear(src: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Half-pixel-center bilinear resampling, evaluated per output pixel."""
    src_h, src_w = src.shape
    out = np.zeros((target_h, target_w), dtype=np.float64)
    for oy in range(target_h):
        sy = (oy + 0.5) * (src_h / target_h) - 0.5
        sy = min(max(sy, 0.0), src_h - 1.0)
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, src_h - 1)
        fy = sy - y0
        for ox in range(target_w):
            sx = (ox + 0.5) * (src_w / target_w) - 0.5
            sx = min(max(sx, 0.0), src_w - 1.0)
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, src_w - 1)
            fx = sx - x0
            top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
            bot = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
            out[oy, ox] = top * (1 - fy) + bot * fy
    return out


# --- reflect-101 filtering by shifted slices --------------------------------


def _conv2d_reflect(values: np.ndarray, kernel: np.ndarray, correlate: bool) -> np.ndarray:
    """Direct same-size 2-D filtering with reflect-101 padding."""
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    padded = np.pad(values, ((ry, ry), (rx, rx)), mode="reflect")
    h, w = values.shape
    out = np.zeros((h, w), dtype=np.float64)
    for a in range(kh):
        for b in range(kw):
            if correlate:
                weight = kernel[a, b]
            else:
                weight = kernel[kh - 1 - a, kw - 1 - b]
            out += weight * padded[a : a + h, b : b + w]
    return out


def oracle_gaussian_kernel1d(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return k / k.sum()


def oracle_blur(values: np.ndarray, sigma: float) -> np.ndarray:
    k1 = oracle_gaussian_kernel1d(sigma)
    return _conv2d_reflect(values, np.outer(k1, k1), correlate=True)


# --- Canny ------------------------------------------------------------------

_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])


def oracle_canny(
    values: np.ndarray, low: float, high: float, sigma: float = 1.4
) -> np.ndarray:
    """Reference Canny: blur, Sobel, per-pixel NMS (ties kept with 1e-9
    relative slack, border suppressed), then BFS hysteresis with
    8-connectivity."""
    blurred = oracle_blur(values, sigma)
    gx = _conv2d_reflect(blurred, _SOBEL_X, correlate=True)
    gy = _conv2d_reflect(blurred, _SOBEL_X.T, correlate=True)
    mag = np.sqrt(gx * gx + gy * gy)

    h, w = values.shape
    keep = np.zeros((h, w), dtype=bool)
    slack = 1.0 - 1e-9
    for i in range(1, h - 1):
        for j in range(1, w - 1):
            deg = math.degrees(math.atan2(gy[i, j], gx[i, j])) % 180.0
            if deg < 22.5 or deg >= 157.5:
                dy, dx = 0, 1
            elif deg < 67.5:
                dy, dx = 1, 1
            elif deg < 112.5:
                dy, dx = 1, 0
            else:
                dy, dx = 1, -1
            m = mag[i, j]
            if m >= mag[i + dy, j + dx] * slack and m >= mag[i - dy, j - dx] * slack:
                keep[i, j] = True

    strong = keep & (mag >= high)
    candidate = keep & (mag >= low)

    edges = strong.copy()
    queue = deque(zip(*np.nonzero(strong)))
    while queue:
        i, j = queue.popleft()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                ni, nj = i + di, j + dj
                if 0 <= ni < h and 0 <= nj < w and candidate[ni, nj] and not edges[ni, nj]:
                    edges[ni, nj] = True
                    queue.append((ni, nj))
    return edges


# --- Gabor bank -------------------------------------------------------------


def oracle_gabor_kernels(
    orientations=(0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4),
    wavelengths=(4.0, 8.0),
    size: int = 15,
    sigma: float = 3.0,
    gamma: float = 0.5,
) -> list:
    radius = size // 2
    kernels = []
    for theta in orientations:
        for lam in wavelengths:
            k = np.zeros((size, size), dtype=np.float64)
            for iy, y in enumerate(range(-radius, radius + 1)):
                for ix, x in enumerate(range(-radius, radius + 1)):
                    xr = x * math.cos(theta) + y * math.sin(theta)
                    yr = -x * math.sin(theta) + y * math.cos(theta)
                    env = math.exp(-(xr * xr + gamma * gamma * yr * yr) / (2 * sigma * sigma))
                    k[iy, ix] = env * math.cos(2 * math.pi * xr / lam)
            k = k - k.mean()
            kernels.append(k / math.sqrt(float((k * k).sum())))
    return kernels


def oracle_gabor_magnitudes(values: np.ndarray, kernels) -> np.ndarray:
    """True convolution (kernel flipped) per kernel, absolute magnitudes."""
    return np.stack(
        [np.abs(_conv2d_reflect(values, k, correlate=False)) for k in kernels]
    )


# --- feature similarity -----------------------------------------------------


def oracle_fsim(
    o: np.ndarray,
    g: np.ndarray,
    max_value: float = 255.0,
    scales: int = 3,
) -> float:
    """Straight-line transcription of the multi-scale similarity pipeline.

    Defaults mirror the package defaults: uniform scale exponents,
    stabilizers 1e-4 * max^2 (structure half of contrast), Canny thresholds
    at 0.10/0.30 of max, sigma 1.4, the 4x2 Gabor bank, and an 11-tap
    sigma-1.5 Gaussian statistics window.
    """
    c_lum = 1e-4 * max_value * max_value
    c_con = 1e-4 * max_value * max_value
    c_str = c_con / 2.0
    low, high = 0.10 * max_value, 0.30 * max_value
    kernels = oracle_gabor_kernels()

    win1 = np.exp(-(np.arange(-5, 6, dtype=np.float64) ** 2) / (2 * 1.5 * 1.5))
    win1 /= win1.sum()
    window = np.outer(win1, win1)

    po, pg = o.astype(np.float64), g.astype(np.float64)
    score = 1.0
    for k in range(scales):
        if k > 0:
            po = _halve(po)
            pg = _halve(pg)

        resp_o = oracle_gabor_magnitudes(po, kernels)
        resp_g = oracle_gabor_magnitudes(pg, kernels)
        comb_o = resp_o.max(axis=0)
        comb_g = resp_g.max(axis=0)
        weight = np.maximum(comb_o, comb_g)

        edges_o = oracle_canny(po, low, high)
        edges_g = oracle_canny(pg, low, high)
        support = edges_o | edges_g
        if not support.any():
            support = np.ones_like(support)

        mu_o = _conv2d_reflect(po, window, correlate=True)
        mu_g = _conv2d_reflect(pg, window, correlate=True)
        sd_o = np.sqrt(np.maximum(_conv2d_reflect(po * po, window, True) - mu_o * mu_o, 0.0))
        sd_g = np.sqrt(np.maximum(_conv2d_reflect(pg * pg, window, True) - mu_g * mu_g, 0.0))

        lum_map = (2 * mu_o * mu_g + c_lum) / (mu_o * mu_o + mu_g * mu_g + c_lum)
        con_map = (2 * sd_o * sd_g + c_con) / (sd_o * sd_o + sd_g * sd_g + c_con)
        str_map = (2 * comb_o * comb_g + c_str) / (comb_o * comb_o + comb_g * comb_g + c_str)

        w = weight[support]
        total = w.sum()
        if total <= 0.0:
            w = np.ones_like(w)
            total = w.sum()
        lum = float((w * lum_map[support]).sum() / total)
        con = float((w * con_map[support]).sum() / total)
        struct = float((w * str_map[support]).sum() / total)
        score *= (lum * con * struct) ** (1.0 / scales)

    return min(max(score, 0.0), 1.0)


def _halve(values: np.ndarray) -> np.ndarray:
    h2, w2 = values.shape[0] // 2, values.shape[1] // 2
    out = np.zeros((h2, w2), dtype=np.float64)
    for i in range(h2):
        for j in range(w2):
            block = values[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
            out[i, j] = block.sum() / 4.0
    return out


# --- order statistics -------------------------------------------------------


def oracle_quantile(sorted_values, q: float) -> float:
    """Linear interpolation between order statistics."""
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    pos = q * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return float(sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac)
