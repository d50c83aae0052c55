"""Versioned descriptor bank.

Bank "v1" concatenates nine families on the raw intensity plane and
recomputes four of them on a derived plane (the log-scaled magnitude of
the 2-D DFT, linearly rescaled to [0, 255]):

    raw:  intensity(5) multihist(24) haralick(26) zernike(49) edge(13)
          tamura(6) gabor(7) fractal(7) chebyshev(32)          -> 169
    fft:  intensity(5) multihist(24) haralick(26) chebyshev(32) ->  87

256 descriptors total, named ``family.plane.name``. Every value is
finite for every 8-bit input, including constant and 1x1 patches; the
degenerate fallbacks live in the family modules.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .chebyshev import CHEBYSHEV_NAMES, chebyshev_hist
from .edges import EDGE_NAMES, edge_stats
from .fractal import FRACTAL_NAMES, fractal_features
from .gabor import GABOR_NAMES, gabor_energies
from .haralick import HARALICK_NAMES, haralick_features
from .stats import INTENSITY_NAMES, MULTIHIST_NAMES, intensity_stats, multiscale_histogram
from .tamura import TAMURA_NAMES, tamura_features
from .zernike import ZERNIKE_NAMES, zernike_magnitudes

BANK_VERSION = "v1"

_RAW_FAMILIES = [
    ("intensity", INTENSITY_NAMES, intensity_stats),
    ("multihist", MULTIHIST_NAMES, multiscale_histogram),
    ("haralick", HARALICK_NAMES, haralick_features),
    ("zernike", ZERNIKE_NAMES, zernike_magnitudes),
    ("edge", EDGE_NAMES, edge_stats),
    ("tamura", TAMURA_NAMES, tamura_features),
    ("gabor", GABOR_NAMES, gabor_energies),
    ("fractal", FRACTAL_NAMES, fractal_features),
    ("chebyshev", CHEBYSHEV_NAMES, chebyshev_hist),
]

_FFT_FAMILIES = [
    ("intensity", INTENSITY_NAMES, intensity_stats),
    ("multihist", MULTIHIST_NAMES, multiscale_histogram),
    ("haralick", HARALICK_NAMES, haralick_features),
    ("chebyshev", CHEBYSHEV_NAMES, chebyshev_hist),
]

RAW_PLANE_SIZE = sum(len(names) for _, names, _ in _RAW_FAMILIES)

_BANK_SIZES = {
    "v1": RAW_PLANE_SIZE + sum(len(names) for _, names, _ in _FFT_FAMILIES),
}


def bank_size(version: str = BANK_VERSION) -> int:
    """Descriptor count of a bank version; unknown version is an error."""
    try:
        return _BANK_SIZES[version]
    except KeyError:
        raise ConfigError(f"unknown bank version {version!r}") from None


def descriptor_names(version: str = BANK_VERSION) -> list[str]:
    """Column names, ``family.plane.name``, in bank order."""
    bank_size(version)
    names = [f"{fam}.raw.{n}" for fam, fam_names, _ in _RAW_FAMILIES for n in fam_names]
    names += [f"{fam}.fft.{n}" for fam, fam_names, _ in _FFT_FAMILIES for n in fam_names]
    return names


def fft_magnitude_plane(pixels: np.ndarray) -> np.ndarray:
    """log(1 + |DFT|) of a patch, rescaled to [0, 255] (zeros if flat)."""
    mag = np.log1p(np.abs(np.fft.fft2(pixels.astype(np.float64, copy=False))))
    lo = mag.min()
    hi = mag.max()
    if hi == lo:
        return np.zeros_like(mag)
    # dividing before scaling pins the endpoints at exactly 0 and 255
    return np.clip((mag - lo) / (hi - lo) * 255.0, 0.0, 255.0)


def extract(pixels: np.ndarray, version: str = BANK_VERSION) -> np.ndarray:
    """Full descriptor vector of one patch, float64, all finite."""
    size = bank_size(version)
    raw = pixels.astype(np.float64, copy=False)
    fft_plane = fft_magnitude_plane(raw)
    parts = [fn(raw) for _, _, fn in _RAW_FAMILIES]
    parts += [fn(fft_plane) for _, _, fn in _FFT_FAMILIES]
    vec = np.concatenate(parts)
    if vec.shape != (size,):
        raise ConfigError(f"bank {version} produced {vec.shape[0]} values, expected {size}")
    return vec
