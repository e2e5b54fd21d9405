import struct
import zlib

import numpy as np
import pytest

from agrisynth.errors import DecodeError, InvalidDimension, IoError
from agrisynth.image_core import (
    ImagePlane,
    RgbImage,
    load_image,
    resize_bilinear,
    save_png,
    to_grayscale,
)

from conftest import textured_rgb
from frozen import FROZEN_BILINEAR_2X2_TO_4X4
from oracles import oracle_bilinear, oracle_grayscale


def _png_chunk(ctype: bytes, data: bytes) -> bytes:
    return (
        struct.pack(">I", len(data))
        + ctype
        + data
        + struct.pack(">I", zlib.crc32(ctype + data) & 0xFFFFFFFF)
    )


def _build_png16(width, height, color_type, sample_value):
    """Hand-assemble a 16-bit PNG with every sample set to one value."""
    channels = {0: 1, 2: 3, 4: 2, 6: 4}[color_type]
    ihdr = struct.pack(">IIBBBBB", width, height, 16, color_type, 0, 0, 0)
    raw = b""
    for _ in range(height):
        raw += b"\x00" + struct.pack(">H", sample_value) * (width * channels)
    return (
        b"\x89PNG\r\n\x1a\n"
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", zlib.compress(raw))
        + _png_chunk(b"IEND", b"")
    )


class TestLoadImage:
    def test_decodes_small_png(self, tmp_path):
        img = RgbImage(np.arange(12, dtype=np.uint8).reshape(2, 2, 3))
        path = tmp_path / "img.png"
        save_png(img, path)
        loaded = load_image(path)
        assert loaded.width == 2 and loaded.height == 2
        assert np.array_equal(loaded.pixels, img.pixels)

    def test_zero_length_file_is_decode_error(self, tmp_path):
        path = tmp_path / "empty.png"
        path.write_bytes(b"")
        with pytest.raises(DecodeError):
            load_image(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(IoError):
            load_image(tmp_path / "nope.png")

    def test_garbage_payload_is_decode_error(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"not an image at all")
        with pytest.raises(DecodeError):
            load_image(path)

    def test_16bit_full_scale_maps_to_255(self, tmp_path):
        # 65535 // 257 == 255 for every color layout
        for color_type in (0, 2, 4, 6):
            path = tmp_path / f"deep{color_type}.png"
            path.write_bytes(_build_png16(3, 2, color_type, 65535))
            loaded = load_image(path)
            assert loaded.pixels.max() == loaded.pixels.min() == 255

    def test_16bit_uses_integer_division_by_257(self, tmp_path):
        # 32768 // 257 == 127; a high-byte shortcut would give 128
        for color_type in (0, 2):
            path = tmp_path / f"mid{color_type}.png"
            path.write_bytes(_build_png16(2, 2, color_type, 32768))
            loaded = load_image(path)
            assert loaded.pixels.max() == loaded.pixels.min() == 127

    def test_jpeg_decodes(self, tmp_path):
        from PIL import Image

        path = tmp_path / "img.jpg"
        Image.fromarray(textured_rgb(5, 32), mode="RGB").save(path, format="JPEG")
        loaded = load_image(path)
        assert (loaded.width, loaded.height) == (32, 32)

    def test_png_roundtrip_is_pixel_exact(self, tmp_path):
        original = RgbImage(textured_rgb(9, 48))
        first = tmp_path / "a.png"
        second = tmp_path / "b.png"
        save_png(original, first)
        decoded = load_image(first)
        save_png(decoded, second)
        again = load_image(second)
        assert np.array_equal(decoded.pixels, again.pixels)
        assert np.array_equal(decoded.pixels, original.pixels)


class TestGrayscale:
    def test_white_stays_255(self):
        img = RgbImage(np.full((3, 3, 3), 255, dtype=np.uint8))
        assert (to_grayscale(img).values == 255.0).all()

    def test_equal_channels_passthrough(self):
        for g in (0, 1, 77, 128, 254, 255):
            img = RgbImage(np.full((2, 2, 3), g, dtype=np.uint8))
            assert (to_grayscale(img).values == float(g)).all()

    def test_pure_red_rounds_half_up_to_76(self):
        px = np.zeros((1, 1, 3), dtype=np.uint8)
        px[0, 0, 0] = 255
        assert to_grayscale(RgbImage(px)).values[0, 0] == 76.0

    def test_matches_scalar_oracle(self):
        rgb = textured_rgb(21, 16)
        expected = oracle_grayscale(rgb)
        assert np.array_equal(to_grayscale(RgbImage(rgb)).values, expected)

    def test_output_range_on_fuzzed_inputs(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            rgb = rng.integers(0, 256, (5, 7, 3), dtype=np.uint8)
            values = to_grayscale(RgbImage(rgb)).values
            assert values.min() >= 0.0 and values.max() <= 255.0


class TestResizeBilinear:
    def test_identity_at_same_size(self):
        rng = np.random.default_rng(3)
        plane = ImagePlane(rng.uniform(0, 255, (17, 13)))
        out = resize_bilinear(plane, 13, 17)
        assert np.array_equal(out.values, plane.values)

    def test_constant_plane_stays_constant(self):
        plane = ImagePlane(np.full((6, 9), 42.5))
        for tw, th in ((3, 3), (12, 5), (9, 6), (1, 1)):
            out = resize_bilinear(plane, tw, th)
            assert np.allclose(out.values, 42.5, atol=1e-12)
            assert (out.width, out.height) == (tw, th)

    def test_2x2_to_4x4_matches_frozen_oracle(self):
        plane = ImagePlane(np.array([[0.0, 255.0], [255.0, 0.0]]))
        out = resize_bilinear(plane, 4, 4)
        assert np.allclose(out.values, np.array(FROZEN_BILINEAR_2X2_TO_4X4), atol=1e-12)

    def test_matches_scalar_oracle_on_fuzzed_sizes(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            h, w = rng.integers(2, 12, 2)
            th, tw = rng.integers(1, 20, 2)
            src = rng.uniform(0, 255, (h, w))
            out = resize_bilinear(ImagePlane(src), int(tw), int(th)).values
            assert np.allclose(out, oracle_bilinear(src, int(tw), int(th)), atol=1e-9)

    def test_preserves_value_envelope(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            src = rng.uniform(10, 200, (8, 8))
            out = resize_bilinear(ImagePlane(src), 21, 5).values
            assert out.min() >= src.min() - 1e-9
            assert out.max() <= src.max() + 1e-9

    def test_zero_target_rejected(self):
        plane = ImagePlane(np.zeros((4, 4)))
        with pytest.raises(InvalidDimension):
            resize_bilinear(plane, 0, 4)
        with pytest.raises(InvalidDimension):
            resize_bilinear(plane, 4, 0)

    def test_max_value_preserved(self):
        plane = ImagePlane(np.full((4, 4), 0.5), max_value=1.0)
        assert resize_bilinear(plane, 8, 8).max_value == 1.0


class TestInvariants:
    def test_rgb_image_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            RgbImage(np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(ValueError):
            RgbImage(np.zeros((0, 4, 3), dtype=np.uint8))

    def test_plane_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            ImagePlane(np.array([[0.0, 300.0]]))
        with pytest.raises(ValueError):
            ImagePlane(np.array([[-1.0, 0.0]]))

    def test_plane_values_are_immutable(self):
        plane = ImagePlane(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            plane.values[0, 0] = 1.0
