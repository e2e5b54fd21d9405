"""Synthetic agricultural image toolkit.

Generates image sets through pluggable text-to-image / image-variation
backends, scores them against ground-truth photographs (MSE, PSNR, feature
similarity), aggregates the results, and serves a blinded human-realism
survey.
"""

__version__ = "0.1.0"
