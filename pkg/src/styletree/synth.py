"""Seeded synthetic texture datasets for the evaluation harness.

Three texture families: sinusoidal stripes (parameter = spatial
frequency in cycles/pixel), checkerboard (parameter = cell side in
pixels), and uniform noise (parameter = amplitude around mid-gray).
Every image gets its own jitter stream seeded by (dataset seed,
category index, image index): a family-specific phase/offset draw, then
additive Gaussian noise with sigma 8 gray levels.

A category may confine its texture to a fraction of the canvas
(``coverage``); the texture then fills a seeded-random square patch of
that area and the rest stays flat mid-gray. Output is binary PGM,
byte-identical across runs for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError

FAMILIES = ("stripes", "checker", "noise")
NOISE_SIGMA = 8.0
STRIPE_AMPLITUDE = 100.0
CHECKER_LOW = 64.0
CHECKER_HIGH = 191.0
FLAT_GRAY = 128.0


@dataclass(frozen=True)
class CategorySpec:
    name: str
    family: str
    parameter: float
    coverage: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown texture family {self.family!r}")
        if not 0.0 < self.coverage <= 1.0:
            raise ConfigError(f"coverage must be in (0, 1], got {self.coverage}")
        if self.parameter <= 0.0:
            raise ConfigError(f"parameter must be positive, got {self.parameter}")


def write_pgm(path: Path, pixels: np.ndarray) -> None:
    """Binary PGM (P5), maxval 255."""
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())


def _texture(spec: CategorySpec, height: int, width: int,
             rng: np.random.Generator) -> np.ndarray:
    x = np.arange(width, dtype=np.float64)[None, :]
    y = np.arange(height, dtype=np.float64)[:, None]
    if spec.family == "stripes":
        phase = rng.uniform(0.0, 2.0 * np.pi)
        row = FLAT_GRAY + STRIPE_AMPLITUDE * np.sin(
            2.0 * np.pi * spec.parameter * x + phase)
        return np.broadcast_to(row, (height, width)).copy()
    if spec.family == "checker":
        cell = max(1, int(round(spec.parameter)))
        ox = int(rng.integers(0, cell))
        oy = int(rng.integers(0, cell))
        parity = ((x.astype(np.int64) + ox) // cell
                  + (y.astype(np.int64) + oy) // cell) % 2
        return np.where(parity == 1, CHECKER_HIGH, CHECKER_LOW)
    # uniform noise
    half = spec.parameter / 2.0
    return rng.uniform(FLAT_GRAY - half, FLAT_GRAY + half, size=(height, width))


def render_image(spec: CategorySpec, height: int, width: int,
                 rng: np.random.Generator) -> np.ndarray:
    """One jittered uint8 image; draw order is fixed for reproducibility."""
    if spec.coverage < 1.0:
        side_h = max(1, int(round(height * np.sqrt(spec.coverage))))
        side_w = max(1, int(round(width * np.sqrt(spec.coverage))))
        oy = int(rng.integers(0, height - side_h + 1))
        ox = int(rng.integers(0, width - side_w + 1))
        canvas = np.full((height, width), FLAT_GRAY)
        canvas[oy:oy + side_h, ox:ox + side_w] = _texture(spec, side_h, side_w, rng)
    else:
        canvas = _texture(spec, height, width, rng)
    canvas = canvas + rng.normal(0.0, NOISE_SIGMA, size=(height, width))
    return np.clip(np.rint(canvas), 0, 255).astype(np.uint8)


def synth_dataset(specs: list[CategorySpec], images_per_category: int,
                  width: int, height: int, seed: int, out_dir: str | Path) -> Path:
    """Write a category-per-directory PGM dataset; returns the root."""
    if images_per_category < 1:
        raise ConfigError("images_per_category must be >= 1")
    if width < 1 or height < 1:
        raise ConfigError(f"bad image size {width}x{height}")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate category names in dataset spec")

    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    for ci, spec in enumerate(specs):
        cat_dir = root / spec.name
        cat_dir.mkdir(exist_ok=True)
        for ii in range(images_per_category):
            rng = np.random.default_rng([seed, ci, ii])
            img = render_image(spec, height, width, rng)
            write_pgm(cat_dir / f"img_{ii:03d}.pgm", img)
    return root
