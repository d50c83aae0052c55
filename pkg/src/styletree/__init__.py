"""Texture-descriptor classification of labeled image sets.

The pipeline loads images as 8-bit intensity grids, samples 16 patches per
image, extracts a fixed descriptor bank, trains a weighted nearest-distance
classifier, and turns per-image category distances into class-to-class
distance matrices, similarity matrices, and neighbor-joining trees.
"""

__version__ = "0.1.0"
