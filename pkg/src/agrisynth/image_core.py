"""Image ingestion, color conversion, and resizing.

Every metric input passes through here: decode (PNG/JPEG) -> grayscale
(BT.601 weights, half-up rounding) -> bilinear resize with half-pixel
centers. All pixel data is held in immutable numpy arrays.

16-bit PNG sources are scaled to the 8-bit range by integer division by
257 (so 65535 maps to exactly 255). Pillow truncates 16-bit RGB PNGs to
the high byte, which is a different mapping, so those files go through a
small built-in decoder instead.
"""

from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, InvalidDimension, IoError

__all__ = [
    "RgbImage",
    "ImagePlane",
    "load_image",
    "decode_image",
    "save_png",
    "encode_png",
    "to_grayscale",
    "resize_bilinear",
]

GRAY_WEIGHTS = (0.299, 0.587, 0.114)

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class RgbImage:
    """An 8-bit RGB raster, shape (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"RgbImage expects (H, W, 3) pixels, got {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("RgbImage dimensions must be >= 1")
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class ImagePlane:
    """A single-channel matrix of real intensities with a declared range.

    ``max_value`` is the dynamic range the values live in ([0, max_value]);
    it is what peak-signal computations use as the peak.
    """

    values: np.ndarray
    max_value: float = 255.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError(f"ImagePlane expects a 2-D array, got shape {vals.shape}")
        if vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError("ImagePlane dimensions must be >= 1")
        if self.max_value <= 0:
            raise ValueError("max_value must be positive")
        if vals.min() < 0 or vals.max() > self.max_value:
            raise ValueError(
                f"ImagePlane values must lie in [0, {self.max_value}], "
                f"got [{vals.min()}, {vals.max()}]"
            )
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def load_image(path) -> RgbImage:
    """Decode a PNG or JPEG file into an :class:`RgbImage`.

    Raises IoError if the file is missing/unreadable and DecodeError if the
    payload cannot be decoded.
    """
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read image file {p}: {exc}") from exc
    return decode_image(data, source=str(p))


def decode_image(data: bytes, source: str = "<bytes>") -> RgbImage:
    """Decode raw PNG/JPEG bytes into an :class:`RgbImage`."""
    if len(data) == 0:
        raise DecodeError(f"empty image payload: {source}")

    if data.startswith(_PNG_MAGIC):
        depth, color_type = _png_header(data, source)
        if depth == 16 and color_type in (2, 4, 6):
            # Pillow drops the low byte for these; decode them ourselves.
            return RgbImage(_decode_png16(data, source))

    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            if im.mode in ("I;16", "I;16B", "I;16L", "I;16N", "I"):
                arr = np.asarray(im, dtype=np.uint32)
                gray = (arr // 257).astype(np.uint8)
                return RgbImage(np.repeat(gray[:, :, None], 3, axis=2))
            rgb = im.convert("RGB")
            return RgbImage(np.asarray(rgb, dtype=np.uint8))
    except UnidentifiedImageError as exc:
        raise DecodeError(f"unsupported or corrupt image: {source}") from exc
    except (OSError, ValueError, SyntaxError) as exc:
        raise DecodeError(f"failed to decode image {source}: {exc}") from exc


def save_png(img: RgbImage, path) -> None:
    """Write an RgbImage as a PNG file (parent directories created)."""
    p = Path(path)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(encode_png(img))
    except OSError as exc:
        raise IoError(f"cannot write PNG to {p}: {exc}") from exc


def encode_png(img: RgbImage) -> bytes:
    """Encode an RgbImage as PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(img.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def to_grayscale(img: RgbImage) -> ImagePlane:
    """Convert to a luma plane: 0.299 R + 0.587 G + 0.114 B, rounded half-up."""
    px = img.pixels.astype(np.float64)
    wr, wg, wb = GRAY_WEIGHTS
    luma = wr * px[:, :, 0] + wg * px[:, :, 1] + wb * px[:, :, 2]
    # np.round is half-even; the contract here is half-up.
    quantized = np.floor(luma + 0.5)
    return ImagePlane(np.clip(quantized, 0.0, 255.0), max_value=255.0)


def resize_bilinear(plane: ImagePlane, target_w: int, target_h: int) -> ImagePlane:
    """Bilinear resample with half-pixel-center coordinate mapping.

    Output pixel (x, y) samples the source at
    ``((x + 0.5) * src_w / dst_w - 0.5, (y + 0.5) * src_h / dst_h - 0.5)``,
    with sample coordinates clamped to the source grid. Values are clamped
    to [0, max_value]; an input already at the target size is returned
    value-exact.
    """
    if target_w < 1 or target_h < 1:
        raise InvalidDimension(f"target size must be >= 1x1, got {target_w}x{target_h}")

    src = plane.values
    src_h, src_w = src.shape
    if (src_w, src_h) == (target_w, target_h):
        return ImagePlane(src.copy(), max_value=plane.max_value)

    xs = (np.arange(target_w, dtype=np.float64) + 0.5) * (src_w / target_w) - 0.5
    ys = (np.arange(target_h, dtype=np.float64) + 0.5) * (src_h / target_h) - 0.5
    xs = np.clip(xs, 0.0, src_w - 1.0)
    ys = np.clip(ys, 0.0, src_h - 1.0)

    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = xs - x0
    fy = ys - y0

    top = src[y0[:, None], x0[None, :]] * (1.0 - fx) + src[y0[:, None], x1[None, :]] * fx
    bot = src[y1[:, None], x0[None, :]] * (1.0 - fx) + src[y1[:, None], x1[None, :]] * fx
    out = top * (1.0 - fy[:, None]) + bot * fy[:, None]

    return ImagePlane(np.clip(out, 0.0, plane.max_value), max_value=plane.max_value)


# --- minimal 16-bit PNG decoding -------------------------------------------
#
# Only what Pillow gets wrong is handled here: non-interlaced 16-bit PNGs
# with color (types 2/6) or gray+alpha (type 4) samples.


def _png_header(data: bytes, source: str) -> tuple[int, int]:
    if len(data) < 33 or data[12:16] != b"IHDR":
        raise DecodeError(f"truncated PNG header: {source}")
    depth = data[24]
    color_type = data[25]
    return depth, color_type


def _decode_png16(data: bytes, source: str) -> np.ndarray:
    w, h, depth, color_type, _, _, interlace = struct.unpack(">IIBBBBB", data[16:29])
    if interlace != 0:
        raise DecodeError(f"interlaced 16-bit PNG is not supported: {source}")
    channels = {0: 1, 2: 3, 4: 2, 6: 4}.get(color_type)
    if channels is None or depth != 16:
        raise DecodeError(f"unsupported PNG layout in {source}")

    idat = bytearray()
    pos = 8
    try:
        while pos + 8 <= len(data):
            (length,) = struct.unpack(">I", data[pos : pos + 4])
            ctype = data[pos + 4 : pos + 8]
            body = data[pos + 8 : pos + 8 + length]
            if len(body) != length:
                raise DecodeError(f"truncated PNG chunk in {source}")
            if ctype == b"IDAT":
                idat.extend(body)
            elif ctype == b"IEND":
                break
            pos += 12 + length
        raw = zlib.decompress(bytes(idat))
    except (zlib.error, struct.error) as exc:
        raise DecodeError(f"corrupt PNG data in {source}: {exc}") from exc

    bpp = channels * 2  # filter unit: bytes per pixel
    stride = w * bpp
    if len(raw) < h * (stride + 1):
        raise DecodeError(f"PNG pixel data too short in {source}")

    out = np.zeros((h, stride), dtype=np.uint8)
    prev = np.zeros(stride, dtype=np.uint8)
    for y in range(h):
        row_start = y * (stride + 1)
        ftype = raw[row_start]
        row = np.frombuffer(raw, dtype=np.uint8, count=stride, offset=row_start + 1).copy()
        if ftype == 0:
            cur = row
        elif ftype == 1:  # Sub
            cur = row
            for i in range(bpp, stride):
                cur[i] = (int(cur[i]) + int(cur[i - bpp])) & 0xFF
        elif ftype == 2:  # Up
            cur = (row.astype(np.uint16) + prev).astype(np.uint8)
        elif ftype == 3:  # Average
            cur = row
            for i in range(stride):
                left = int(cur[i - bpp]) if i >= bpp else 0
                cur[i] = (int(cur[i]) + (left + int(prev[i])) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            cur = row
            for i in range(stride):
                left = int(cur[i - bpp]) if i >= bpp else 0
                up = int(prev[i])
                ul = int(prev[i - bpp]) if i >= bpp else 0
                cur[i] = (int(cur[i]) + _paeth(left, up, ul)) & 0xFF
        else:
            raise DecodeError(f"unknown PNG filter type {ftype} in {source}")
        out[y] = cur
        prev = cur

    samples = out.reshape(h, w, channels, 2)
    values = (samples[:, :, :, 0].astype(np.uint32) << 8) | samples[:, :, :, 1]
    scaled = (values // 257).astype(np.uint8)

    if color_type == 2:
        return scaled
    if color_type == 6:
        return scaled[:, :, :3]
    if color_type == 0:
        return np.repeat(scaled, 3, axis=2)
    # gray + alpha
    return np.repeat(scaled[:, :, :1], 3, axis=2)


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c
