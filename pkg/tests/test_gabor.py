import math

import numpy as np
import pytest

from agrisynth.errors import TooSmall
from agrisynth.image_core import ImagePlane
from agrisynth.metrics import FsimConfig, build_gabor_bank, gabor_responses

from oracles import oracle_gabor_kernels, oracle_gabor_magnitudes


def test_default_bank_is_8_kernels_of_15x15():
    bank = build_gabor_bank(FsimConfig())
    assert len(bank) == 8
    assert all(k.shape == (15, 15) for k in bank.kernels)


def test_kernels_are_zero_mean():
    bank = build_gabor_bank(FsimConfig())
    for k in bank.kernels:
        assert abs(k.sum()) < 1e-9


def test_kernels_have_unit_l2_norm():
    bank = build_gabor_bank(FsimConfig())
    for k in bank.kernels:
        assert abs(np.sqrt((k * k).sum()) - 1.0) < 1e-9


def test_orientation_flip_by_pi_is_identity():
    base = FsimConfig()
    flipped = FsimConfig(orientations=tuple(t + math.pi for t in base.orientations))
    for a, b in zip(build_gabor_bank(base).kernels, build_gabor_bank(flipped).kernels):
        assert np.abs(a - b).max() < 1e-9


def test_kernels_match_scalar_oracle():
    bank = build_gabor_bank(FsimConfig())
    for built, expected in zip(bank.kernels, oracle_gabor_kernels()):
        assert np.abs(built - expected).max() < 1e-12


def test_constant_plane_gives_near_zero_responses():
    bank = build_gabor_bank(FsimConfig())
    stack = gabor_responses(ImagePlane(np.full((32, 32), 200.0)), bank)
    assert stack.responses.max() < 1e-6


def test_responses_scale_linearly():
    bank = build_gabor_bank(FsimConfig())
    rng = np.random.default_rng(8)
    base = rng.uniform(0, 60, (32, 32))
    r1 = gabor_responses(ImagePlane(base), bank).responses
    r4 = gabor_responses(ImagePlane(base * 4.0), bank).responses
    assert np.allclose(r4, 4.0 * r1, rtol=1e-9, atol=1e-9)


def test_grating_peaks_on_matching_kernel():
    # horizontal sinusoid at wavelength 8 px: strongest mean response must
    # come from the (orientation 0, wavelength 8) kernel
    bank = build_gabor_bank(FsimConfig())
    xx = np.arange(64, dtype=np.float64)
    grating = 127.5 + 100.0 * np.cos(2 * np.pi * xx / 8.0)
    plane = ImagePlane(np.tile(grating, (64, 1)))
    means = gabor_responses(plane, bank).responses.mean(axis=(1, 2))
    best = int(np.argmax(means))
    assert bank.params(best) == (0.0, 8.0)


def test_responses_match_direct_convolution_oracle():
    bank = build_gabor_bank(FsimConfig())
    rng = np.random.default_rng(13)
    img = rng.uniform(0, 255, (40, 40))
    expected = oracle_gabor_magnitudes(img, oracle_gabor_kernels())
    got = gabor_responses(ImagePlane(img), bank).responses
    assert np.abs(got - expected).max() < 1e-9


def test_plane_smaller_than_kernel_rejected():
    bank = build_gabor_bank(FsimConfig())
    with pytest.raises(TooSmall):
        gabor_responses(ImagePlane(np.zeros((15, 40))), bank)
