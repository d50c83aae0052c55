"""Prewitt edge statistics.

Gradients are taken on the 3x3-valid interior only (no padding). Edge
pixels are those whose gradient magnitude exceeds the mean magnitude.
The direction histogram has 8 bins over [-pi, pi) and is restricted to
edge pixels; when there are none (constant patches, sub-3x3 patches) it
falls back to uniform 1/8 per bin.
"""

from __future__ import annotations

import numpy as np

DIR_BINS = 8

EDGE_NAMES = (["grad_mean", "grad_stddev", "grad_median", "edge_fraction"]
              + [f"dir_{i}" for i in range(DIR_BINS)]
              + ["dir_homogeneity"])


def prewitt(plane: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(gx, gy) on the (h-2, w-2) interior; empty arrays if too small."""
    p = plane.astype(np.float64, copy=False)
    h, w = p.shape
    if h < 3 or w < 3:
        empty = np.empty((0, 0))
        return empty, empty
    col3 = p[:-2, :] + p[1:-1, :] + p[2:, :]
    row3 = p[:, :-2] + p[:, 1:-1] + p[:, 2:]
    gx = col3[:, 2:] - col3[:, :-2]
    gy = row3[2:, :] - row3[:-2, :]
    return gx, gy


def edge_stats(plane: np.ndarray) -> np.ndarray:
    """13 values: magnitude stats, edge fraction, direction histogram, peak."""
    gx, gy = prewitt(plane)
    if gx.size == 0:
        hist = np.full(DIR_BINS, 1.0 / DIR_BINS)
        return np.concatenate([[0.0, 0.0, 0.0, 0.0], hist, [1.0 / DIR_BINS]])

    mag = np.hypot(gx, gy)
    mean = mag.mean()
    stddev = mag.std()
    median = float(np.median(mag))
    edges = mag > mean
    fraction = float(edges.mean())

    if edges.any():
        theta = np.arctan2(gy[edges], gx[edges])
        idx = np.clip(((theta + np.pi) * (DIR_BINS / (2.0 * np.pi))).astype(np.int64),
                      0, DIR_BINS - 1)
        hist = np.bincount(idx, minlength=DIR_BINS) / idx.size
    else:
        hist = np.full(DIR_BINS, 1.0 / DIR_BINS)

    return np.concatenate([[mean, stddev, median, fraction], hist, [hist.max()]])
