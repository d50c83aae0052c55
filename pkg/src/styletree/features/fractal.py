"""Differential box-counting roughness measures.

For each dyadic block side s in {2,4,8,16,32,64} the patch is cut into
full s x s blocks (partial blocks at the edges are dropped). Each block
contributes floor(max/h) - floor(min/h) + 1 boxes, where the box height
h = 256 * s / min(patch height, width) keeps the boxes cube-like in
normalized intensity space. Features are log2 of the per-scale box
totals plus the least-squares slope of log2(boxes) against -log2(s),
i.e. the box-counting dimension estimate. A scale with no full block
counts as a single box so every value stays finite.
"""

from __future__ import annotations

import numpy as np

SCALES = (2, 4, 8, 16, 32, 64)

FRACTAL_NAMES = [f"boxes_s{s}" for s in SCALES] + ["dimension"]

_LOG_INV_SIDE = -np.log2(np.array(SCALES, dtype=np.float64))


def fractal_features(plane: np.ndarray) -> np.ndarray:
    p = plane.astype(np.float64, copy=False)
    h, w = p.shape
    shorter = float(min(h, w))
    logs = np.empty(len(SCALES))
    for si, s in enumerate(SCALES):
        nby, nbx = h // s, w // s
        if nby == 0 or nbx == 0:
            logs[si] = 0.0
            continue
        blocks = p[:nby * s, :nbx * s].reshape(nby, s, nbx, s)
        bmax = blocks.max(axis=(1, 3))
        bmin = blocks.min(axis=(1, 3))
        box_h = 256.0 * s / shorter
        counts = np.floor(bmax / box_h) - np.floor(bmin / box_h) + 1.0
        logs[si] = np.log2(counts.sum())
    slope = np.polyfit(_LOG_INV_SIDE, logs, 1)[0]
    return np.concatenate([logs, [slope]])
