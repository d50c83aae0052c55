"""Class-to-class distance aggregation and similarity conversion.

M[A][Q] is the mean, over the probe images of category Q, of each
image's distance to category A. The matrix is not symmetric and its
diagonal is positive for any non-trivial training set; downstream steps
divide each row by its diagonal entry, map onto [0, 1], flip to
similarity (1 - d), and average with the transpose when a symmetric
matrix is required.

Two normalization strategies exist because dividing a row by its
self-distance alone can exceed 1: "ratio-rescale" (default) min-max
rescales each row of ratios onto [0, 1]; "paper-literal" clamps the raw
ratios into [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AggregationError, ConfigError, NormalizationError

STRATEGIES = ("ratio-rescale", "paper-literal")
DEFAULT_STRATEGY = "ratio-rescale"


@dataclass(frozen=True)
class DistanceMatrix:
    """Row A, column Q: distance of Q's probe images to category A."""

    categories: list[str]
    values: np.ndarray


@dataclass(frozen=True)
class NormalizedDistances:
    categories: list[str]
    values: np.ndarray
    strategy: str


@dataclass(frozen=True)
class SimilarityMatrix:
    categories: list[str]
    values: np.ndarray
    strategy: str


def build_matrix(categories: list[str],
                 image_distances: list[tuple[str, np.ndarray]]) -> DistanceMatrix:
    """Aggregate per-image distance vectors into M.

    ``image_distances`` holds (image category, distances-to-all-categories)
    pairs with vectors ordered like ``categories``. Every category must
    contribute at least one image.
    """
    n = len(categories)
    index = {c: i for i, c in enumerate(categories)}
    if len(index) != n:
        raise AggregationError("duplicate category names")
    sums = np.zeros((n, n))
    counts = np.zeros(n, dtype=np.int64)
    for cat, vec in image_distances:
        if cat not in index:
            raise AggregationError(f"image category {cat!r} not in category list")
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (n,):
            raise AggregationError(
                f"distance vector has shape {vec.shape}, expected ({n},)")
        sums[:, index[cat]] += vec
        counts[index[cat]] += 1
    if (counts == 0).any():
        missing = [c for c in categories if counts[index[c]] == 0]
        raise AggregationError(f"no probe images for categories {missing}")
    return DistanceMatrix(categories=list(categories), values=sums / counts)


def normalize(matrix: DistanceMatrix,
              strategy: str = DEFAULT_STRATEGY) -> NormalizedDistances:
    """Per-row self-distance ratios mapped onto [0, 1]."""
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown normalization strategy {strategy!r}")
    m = matrix.values
    diag = np.diag(m)
    if (diag <= 0.0).any():
        bad = matrix.categories[int(np.argmin(diag))]
        raise NormalizationError(f"category {bad!r} has non-positive self-distance")

    ratios = m / diag[:, None]
    if strategy == "paper-literal":
        out = np.clip(ratios, 0.0, 1.0)
    else:
        out = np.zeros_like(ratios)
        for i in range(ratios.shape[0]):
            row = ratios[i]
            lo, hi = row.min(), row.max()
            if hi > lo:
                out[i] = (row - lo) / (hi - lo)
    return NormalizedDistances(categories=list(matrix.categories),
                               values=out, strategy=strategy)


def to_similarity(norm: NormalizedDistances) -> SimilarityMatrix:
    """S = 1 - d."""
    return SimilarityMatrix(categories=list(norm.categories),
                            values=1.0 - norm.values, strategy=norm.strategy)


def symmetrize(norm: NormalizedDistances) -> np.ndarray:
    """(d + d.T) / 2 with an exactly zero diagonal, ready for tree building."""
    d = (norm.values + norm.values.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return d
