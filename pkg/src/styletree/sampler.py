"""Patch sampling: 4x4 equal tiles or variance-ranked 100x100 windows.

Both modes return exactly 16 patches per image. Tiles partition the grid
into a 4x4 lattice of floor(w/4) x floor(h/4) blocks, discarding the
remainder rows/columns at the right and bottom edges. ROI mode scores
every 100x100 window on a stride lattice by population standard
deviation of intensity, then greedily accepts the best-scoring windows
that do not overlap an already accepted one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SamplingError
from .raster import IntensityGrid

PATCH_COUNT = 16
TILE_SPLIT = 4
ROI_WINDOW = 100
DEFAULT_STRIDE = 50


@dataclass(frozen=True)
class Patch:
    """One sampled region, pixel data copied out of the parent grid."""

    parent: str
    index: int
    x0: int
    y0: int
    pixels: np.ndarray

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def tile16(grid: IntensityGrid, parent: str = "") -> list[Patch]:
    """Split a grid into 16 equal tiles, row-major (index = row*4 + col)."""
    th = grid.height // TILE_SPLIT
    tw = grid.width // TILE_SPLIT
    if th < 1 or tw < 1:
        raise SamplingError(
            f"{parent or 'grid'}: {grid.width}x{grid.height} too small for a 4x4 tiling")
    patches = []
    for row in range(TILE_SPLIT):
        for col in range(TILE_SPLIT):
            y0, x0 = row * th, col * tw
            patches.append(Patch(
                parent=parent,
                index=row * TILE_SPLIT + col,
                x0=x0,
                y0=y0,
                pixels=grid.pixels[y0:y0 + th, x0:x0 + tw].copy(),
            ))
    return patches


def _window_stddevs(pixels: np.ndarray, window: int, stride: int) -> np.ndarray:
    """Population stddev of every window on the stride lattice.

    Returns rows (stddev, y0, x0) in lattice order. Uses summed-area
    tables so stride 1 on large grids stays cheap.
    """
    h, w = pixels.shape
    ys = np.arange(0, h - window + 1, stride)
    xs = np.arange(0, w - window + 1, stride)
    if len(ys) == 0 or len(xs) == 0:
        return np.empty((0, 3))

    p = pixels.astype(np.float64)
    # Summed-area tables padded with a zero row/column so the four-corner
    # lookup needs no edge special-casing.
    s1 = np.zeros((h + 1, w + 1))
    s2 = np.zeros((h + 1, w + 1))
    np.cumsum(np.cumsum(p, axis=0), axis=1, out=s1[1:, 1:])
    np.cumsum(np.cumsum(p * p, axis=0), axis=1, out=s2[1:, 1:])

    def box(table, y, x):
        return (table[y + window, x + window] - table[y, x + window]
                - table[y + window, x] + table[y, x])

    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    n = float(window * window)
    mean = box(s1, yy, xx) / n
    var = box(s2, yy, xx) / n - mean * mean
    std = np.sqrt(np.maximum(var, 0.0))
    return np.column_stack([std.ravel(), yy.ravel().astype(np.float64),
                            xx.ravel().astype(np.float64)])


def roi16(grid: IntensityGrid, stride: int = DEFAULT_STRIDE,
          parent: str = "") -> list[Patch]:
    """Pick the 16 most-variable non-overlapping 100x100 windows.

    Candidates are ordered by (-stddev, y0, x0); the y0-then-x0 key makes
    ties (e.g. uniform images) deterministic. A candidate is accepted iff
    it overlaps no previously accepted window; fewer than 16 acceptances
    is an error, judged by outcome rather than by a size formula.
    """
    if stride < 1:
        raise SamplingError(f"stride must be >= 1, got {stride}")
    scored = _window_stddevs(grid.pixels, ROI_WINDOW, stride)
    if len(scored) == 0:
        raise SamplingError(
            f"{parent or 'grid'}: {grid.width}x{grid.height} smaller than one "
            f"{ROI_WINDOW}x{ROI_WINDOW} window")

    order = np.lexsort((scored[:, 2], scored[:, 1], -scored[:, 0]))
    accepted: list[tuple[int, int]] = []
    for k in order:
        y0 = int(scored[k, 1])
        x0 = int(scored[k, 2])
        clear = all(abs(y0 - ay) >= ROI_WINDOW or abs(x0 - ax) >= ROI_WINDOW
                    for ay, ax in accepted)
        if clear:
            accepted.append((y0, x0))
            if len(accepted) == PATCH_COUNT:
                break
    if len(accepted) < PATCH_COUNT:
        raise SamplingError(
            f"{parent or 'grid'}: only {len(accepted)} disjoint "
            f"{ROI_WINDOW}x{ROI_WINDOW} windows at stride {stride}, need {PATCH_COUNT}")

    return [Patch(parent=parent, index=i, x0=x0, y0=y0,
                  pixels=grid.pixels[y0:y0 + ROI_WINDOW, x0:x0 + ROI_WINDOW].copy())
            for i, (y0, x0) in enumerate(accepted)]


def sample_patches(grid: IntensityGrid, mode: str, stride: int = DEFAULT_STRIDE,
                   parent: str = "") -> list[Patch]:
    """Dispatch on sampling mode name ('tiles' or 'roi')."""
    if mode == "tiles":
        return tile16(grid, parent=parent)
    if mode == "roi":
        return roi16(grid, stride=stride, parent=parent)
    raise SamplingError(f"unknown sampling mode {mode!r}")
