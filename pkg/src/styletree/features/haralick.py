"""Gray-level co-occurrence statistics.

Intensities are quantized to 16 levels (level = floor(v / 16)). For each
of the four unit-distance directions (0, 45, 90, 135 degrees) a
co-occurrence matrix is accumulated, symmetrized by adding its transpose,
and normalized to sum 1. Thirteen classic scalar statistics are computed
per direction; the feature vector holds each statistic's mean and range
(max - min) across the four directions, 26 values in all.

A direction with no pixel pairs (degenerate patch shapes) contributes
zeros for all thirteen statistics. Entropy terms use the natural log and
the 0*log(0) = 0 convention.
"""

from __future__ import annotations

import numpy as np

LEVELS = 16

# (dy, dx) unit offsets for 0, 45, 90, 135 degrees. The matrices are
# symmetrized, so each offset and its negation are equivalent.
OFFSETS = ((0, 1), (-1, 1), (-1, 0), (-1, -1))

STAT_NAMES = [
    "asm", "contrast", "correlation", "variance", "idm",
    "sum_average", "sum_variance", "sum_entropy", "entropy",
    "diff_variance", "diff_entropy", "imc1", "imc2",
]

HARALICK_NAMES = [f"{s}_{agg}" for s in STAT_NAMES for agg in ("mean", "range")]

_I, _J = np.meshgrid(np.arange(LEVELS), np.arange(LEVELS), indexing="ij")
_SUM_IDX = (_I + _J).ravel()
_DIFF_IDX = np.abs(_I - _J).ravel()


def _entropy(p: np.ndarray) -> float:
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def _cooccurrence(q: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """Symmetrized co-occurrence counts for one offset; may sum to 0."""
    h, w = q.shape
    ys = slice(max(0, -dy), h - max(0, dy))
    xs = slice(max(0, -dx), w - max(0, dx))
    a = q[ys, xs]
    b = q[max(0, dy):h - max(0, -dy), max(0, dx):w - max(0, -dx)]
    if a.size == 0:
        return np.zeros((LEVELS, LEVELS))
    counts = np.bincount((a * LEVELS + b).ravel(),
                         minlength=LEVELS * LEVELS).reshape(LEVELS, LEVELS)
    return (counts + counts.T).astype(np.float64)


def _stats13(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    if total == 0.0:
        return np.zeros(len(STAT_NAMES))
    p = counts / total

    px = p.sum(axis=1)
    py = p.sum(axis=0)
    i = np.arange(LEVELS, dtype=np.float64)
    mu_x = float((i * px).sum())
    mu_y = float((i * py).sum())
    sg_x = float(np.sqrt(((i - mu_x) ** 2 * px).sum()))
    sg_y = float(np.sqrt(((i - mu_y) ** 2 * py).sum()))

    p_sum = np.bincount(_SUM_IDX, weights=p.ravel(), minlength=2 * LEVELS - 1)
    p_diff = np.bincount(_DIFF_IDX, weights=p.ravel(), minlength=LEVELS)
    k_sum = np.arange(2 * LEVELS - 1, dtype=np.float64)
    k_diff = np.arange(LEVELS, dtype=np.float64)

    asm = float((p * p).sum())
    contrast = float((((_I - _J) ** 2) * p).sum())
    if sg_x > 0.0 and sg_y > 0.0:
        correlation = (float((_I * _J * p).sum()) - mu_x * mu_y) / (sg_x * sg_y)
    else:
        correlation = 0.0
    variance = float(((_I - mu_x) ** 2 * p).sum())
    idm = float((p / (1.0 + (_I - _J) ** 2)).sum())

    sum_average = float((k_sum * p_sum).sum())
    sum_variance = float(((k_sum - sum_average) ** 2 * p_sum).sum())
    sum_entropy = _entropy(p_sum)
    entropy = _entropy(p.ravel())

    diff_average = float((k_diff * p_diff).sum())
    diff_variance = float(((k_diff - diff_average) ** 2 * p_diff).sum())
    diff_entropy = _entropy(p_diff)

    # Information measures of correlation from the marginal entropies.
    hx = _entropy(px)
    hy = _entropy(py)
    mask = p > 0.0
    outer = np.outer(px, py)
    hxy1 = float(-(p[mask] * np.log(outer[mask])).sum())
    nz = outer > 0.0
    hxy2 = float(-(outer[nz] * np.log(outer[nz])).sum())
    denom = max(hx, hy)
    imc1 = (entropy - hxy1) / denom if denom > 0.0 else 0.0
    imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - entropy)))))

    return np.array([asm, contrast, correlation, variance, idm,
                     sum_average, sum_variance, sum_entropy, entropy,
                     diff_variance, diff_entropy, imc1, imc2])


def haralick_features(plane: np.ndarray) -> np.ndarray:
    """26 values: per-statistic mean and range over the four directions."""
    q = np.clip(plane.astype(np.float64, copy=False) // 16.0, 0, LEVELS - 1)
    q = q.astype(np.int64)
    per_dir = np.stack([_stats13(_cooccurrence(q, dy, dx)) for dy, dx in OFFSETS])
    means = per_dir.mean(axis=0)
    ranges = per_dir.max(axis=0) - per_dir.min(axis=0)
    out = np.empty(2 * len(STAT_NAMES))
    out[0::2] = means
    out[1::2] = ranges
    return out
