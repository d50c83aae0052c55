"""Histogram of 2-D Chebyshev expansion coefficients.

The patch is mapped onto [-1, 1]^2 and projected onto Chebyshev
polynomials up to order 20 in each axis (a 21x21 coefficient table) by
direct summation over the uniform pixel grid. The feature is a 32-bin
histogram of the 441 coefficients over their own min..max range,
normalized to sum 1; a degenerate range (all coefficients equal) puts
all mass in bin 0.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev

ORDER = 20
BINS = 32

CHEBYSHEV_NAMES = [f"h{i}" for i in range(BINS)]


@lru_cache(maxsize=32)
def _vander(n: int) -> np.ndarray:
    """Chebyshev Vandermonde matrix for n uniform samples of [-1, 1]."""
    grid = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
    return chebyshev.chebvander(grid, ORDER)


def _coefficients(p: np.ndarray) -> np.ndarray:
    h, w = p.shape
    ty = _vander(h)
    tx = _vander(w)
    c = ty.T @ p @ tx
    wy = np.full(ORDER + 1, 2.0 / h)
    wy[0] = 1.0 / h
    wx = np.full(ORDER + 1, 2.0 / w)
    wx[0] = 1.0 / w
    return c * np.outer(wy, wx)


def chebyshev_hist(plane: np.ndarray) -> np.ndarray:
    c = _coefficients(plane.astype(np.float64, copy=False)).ravel()
    lo = c.min()
    hi = c.max()
    if hi == lo:
        out = np.zeros(BINS)
        out[0] = 1.0
        return out
    counts, _ = np.histogram(c, bins=BINS, range=(lo, hi))
    return counts / c.size
