import numpy as np
import pytest

from agrisynth.errors import InvalidConfig, TooSmall
from agrisynth.image_core import ImagePlane
from agrisynth.metrics import FsimConfig, canny_edges

from conftest import textured_plane
from oracles import oracle_canny


def test_constant_plane_has_no_edges():
    for level in (0.0, 127.0, 255.0):
        mask = canny_edges(ImagePlane(np.full((16, 16), level))).mask
        assert not mask.any()


def test_vertical_step_edge():
    # left half 0, right half 255: the oracle marks exactly the two columns
    # adjacent to the step, over all interior rows
    step = np.zeros((32, 32))
    step[:, 16:] = 255.0
    expected = oracle_canny(step, 25.5, 76.5)
    mask = canny_edges(ImagePlane(step)).mask
    assert (mask == expected).all()

    cols = set(np.nonzero(mask)[1].tolist())
    assert cols == {15, 16}
    interior = mask[1:-1, :]
    assert (interior[:, 15] & interior[:, 16]).all()
    assert not mask[0].any() and not mask[-1].any()


def test_equal_thresholds_rejected():
    cfg = FsimConfig(canny_low=50.0, canny_high=50.0)
    with pytest.raises(InvalidConfig):
        canny_edges(ImagePlane(np.zeros((8, 8))), cfg)


def test_inverted_thresholds_rejected():
    with pytest.raises(InvalidConfig):
        FsimConfig(canny_low=90.0, canny_high=30.0).validate()


def test_tiny_plane_rejected():
    with pytest.raises(TooSmall):
        canny_edges(ImagePlane(np.zeros((2, 5))))


def test_matches_oracle_on_textured_images():
    cfg = FsimConfig()
    for seed in (1, 2, 3):
        img = textured_plane(seed, 48)
        low, high = cfg.resolved_canny_thresholds(255.0)
        expected = oracle_canny(img, low, high, cfg.canny_sigma)
        assert (canny_edges(ImagePlane(img), cfg).mask == expected).all()


def test_custom_thresholds_change_density():
    img = textured_plane(6, 64)
    loose = canny_edges(ImagePlane(img), FsimConfig(canny_low=5.0, canny_high=15.0))
    strict = canny_edges(ImagePlane(img), FsimConfig(canny_low=200.0, canny_high=600.0))
    assert loose.mask.sum() > strict.mask.sum()


def test_mask_dimensions_match_source():
    img = textured_plane(7, 40)
    edge_map = canny_edges(ImagePlane(img))
    assert (edge_map.height, edge_map.width) == img.shape
