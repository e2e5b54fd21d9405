"""Full-reference image quality metrics: MSE, PSNR, and feature similarity."""

from .basic import mse, psnr
from .canny import EdgeMap, canny_edges
from .config import FsimConfig
from .fsim import FSIM_INPUT_SIZE, extract_features, fsim
from .gabor import FeatureStack, GaborBank, build_gabor_bank, gabor_responses
from .records import MetricRecord

__all__ = [
    "mse",
    "psnr",
    "fsim",
    "extract_features",
    "canny_edges",
    "build_gabor_bank",
    "gabor_responses",
    "EdgeMap",
    "GaborBank",
    "FeatureStack",
    "FsimConfig",
    "MetricRecord",
    "FSIM_INPUT_SIZE",
]
