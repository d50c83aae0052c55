"""Tamura-style texture attributes: coarseness, contrast, directionality.

Coarseness follows the classic scheme at dyadic scales k = 1..5 (window
sides 2..32): window means are compared between adjacent non-overlapping
windows horizontally and vertically, each position takes the scale with
the strongest response (ties to the smaller scale), and coarseness is
the mean of 2**k over positions. Windows are anchored top-left rather
than centered; a mean statistic does not care about the alignment. A
3-bin histogram of the winning scales is appended.

Contrast is stddev / kurtosis**(1/4) with the kurtosis floored at 1e-9.
Directionality is the energy (sum of squared bin masses) of a 16-bin
gradient-direction histogram over edge pixels, 1/16 when uniform.
"""

from __future__ import annotations

import numpy as np

from .edges import prewitt

SCALES = (1, 2, 3, 4, 5)
DIR_BINS = 16
COARSE_HIST_BINS = 3
KURTOSIS_FLOOR = 1e-9

TAMURA_NAMES = (["coarseness", "contrast", "directionality"]
                + [f"coarse_{i}" for i in range(COARSE_HIST_BINS)])


def _window_means(p: np.ndarray, side: int) -> np.ndarray:
    """Top-left anchored side x side window means, shape (h-side+1, w-side+1)."""
    h, w = p.shape
    s = np.zeros((h + 1, w + 1))
    np.cumsum(np.cumsum(p, axis=0), axis=1, out=s[1:, 1:])
    return (s[side:, side:] - s[:-side, side:] - s[side:, :-side]
            + s[:-side, :-side]) / float(side * side)


def _coarseness(p: np.ndarray) -> tuple[float, np.ndarray]:
    h, w = p.shape
    best_val = np.zeros((h, w))
    best_k = np.ones((h, w))
    for k in SCALES:
        side = 2 ** k
        if h < side or w < side:
            break
        means = _window_means(p, side)
        mh, mw = means.shape
        if mw > side:
            diff = np.abs(means[:, side:] - means[:, :-side])
            region_v = best_val[:mh, :mw - side]
            win = diff > region_v
            region_v[win] = diff[win]
            best_k[:mh, :mw - side][win] = k
        if mh > side:
            diff = np.abs(means[side:, :] - means[:-side, :])
            region_v = best_val[:mh - side, :mw]
            win = diff > region_v
            region_v[win] = diff[win]
            best_k[:mh - side, :mw][win] = k
    coarseness = float((2.0 ** best_k).mean())
    counts, _ = np.histogram(best_k, bins=COARSE_HIST_BINS,
                             range=(SCALES[0], SCALES[-1]))
    return coarseness, counts / best_k.size


def _contrast(p: np.ndarray) -> float:
    mu = p.mean()
    d = p - mu
    var = np.mean(d * d)
    if var == 0.0:
        return 0.0
    kurt = max(np.mean(d ** 4) / var ** 2, KURTOSIS_FLOOR)
    return float(np.sqrt(var) / kurt ** 0.25)


def _directionality(p: np.ndarray) -> float:
    gx, gy = prewitt(p)
    if gx.size == 0:
        return 1.0 / DIR_BINS
    mag = np.hypot(gx, gy)
    edges = mag > mag.mean()
    if not edges.any():
        return 1.0 / DIR_BINS
    theta = np.mod(np.arctan2(gy[edges], gx[edges]), np.pi)
    idx = np.clip((theta * (DIR_BINS / np.pi)).astype(np.int64), 0, DIR_BINS - 1)
    hist = np.bincount(idx, minlength=DIR_BINS) / idx.size
    return float((hist * hist).sum())


def tamura_features(plane: np.ndarray) -> np.ndarray:
    """6 values: coarseness, contrast, directionality, 3-bin scale histogram."""
    p = plane.astype(np.float64, copy=False)
    coarseness, hist = _coarseness(p)
    return np.concatenate([[coarseness, _contrast(p), _directionality(p)], hist])
