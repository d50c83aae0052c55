"""First-order statistics and multi-resolution intensity histograms."""

from __future__ import annotations

import numpy as np

INTENSITY_NAMES = ["mean", "stddev", "skewness", "kurtosis", "median"]

HIST_BINS = (3, 5, 7, 9)
MULTIHIST_NAMES = [f"b{k}_{i}" for k in HIST_BINS for i in range(k)]


def intensity_stats(plane: np.ndarray) -> np.ndarray:
    """Mean, population stddev, skewness, excess kurtosis, median.

    A constant plane has zero stddev; skewness and kurtosis are defined
    as 0 there instead of 0/0.
    """
    x = plane.astype(np.float64, copy=False).ravel()
    mu = x.mean()
    d = x - mu
    var = np.mean(d * d)
    sd = np.sqrt(var)
    if sd > 0.0:
        skew = np.mean(d ** 3) / sd ** 3
        kurt = np.mean(d ** 4) / sd ** 4 - 3.0
    else:
        skew = 0.0
        kurt = 0.0
    return np.array([mu, sd, skew, kurt, np.median(x)])


def multiscale_histogram(plane: np.ndarray) -> np.ndarray:
    """Concatenated 3/5/7/9-bin histograms over [0, 255], each summing to 1."""
    x = np.clip(plane.astype(np.float64, copy=False).ravel(), 0.0, 255.0)
    parts = []
    for bins in HIST_BINS:
        counts, _ = np.histogram(x, bins=bins, range=(0.0, 255.0))
        parts.append(counts / x.size)
    return np.concatenate(parts)
