"""Zernike moment magnitudes on the largest inscribed disk.

Moments |A_nm| are taken for radial order n = 0..12, repetition m >= 0
with n - m even: 49 values. Pixel centers inside the inscribed disk are
mapped to the unit disk, intensities are centered on their disk mean,
and

    A_nm = (n + 1) / pi * sum(f * R_nm(rho) * exp(-i m theta)) / N_disk

with R_nm the standard radial polynomial. The magnitude drops the phase,
which is where image rotation lands, so |A_nm| is rotation-invariant; a
90-degree rotation of a square patch permutes the very same sample
points and reproduces the values to summation-order rounding.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, pi

import numpy as np

MAX_ORDER = 12

ORDERS = [(n, m) for n in range(MAX_ORDER + 1) for m in range(n % 2, n + 1, 2)]

ZERNIKE_NAMES = [f"z{n}_{m}" for n, m in ORDERS]


def _radial_coeffs(n: int, m: int) -> list[tuple[float, int]]:
    """(coefficient, power) terms of R_nm; factorials stay exact in float."""
    terms = []
    for k in range((n - m) // 2 + 1):
        c = ((-1) ** k * factorial(n - k)
             / (factorial(k) * factorial((n + m) // 2 - k)
                * factorial((n - m) // 2 - k)))
        terms.append((float(c), n - 2 * k))
    return terms


@lru_cache(maxsize=16)
def _basis(height: int, width: int):
    """Disk mask plus the (49, n_disk) complex conjugate basis for a shape."""
    cy = (height - 1) / 2.0
    cx = (width - 1) / 2.0
    radius = min(height, width) / 2.0
    yy, xx = np.mgrid[0:height, 0:width]
    dy = (yy - cy) / radius
    dx = (xx - cx) / radius
    rho = np.sqrt(dx * dx + dy * dy)
    mask = rho <= 1.0

    rho_d = rho[mask]
    theta_d = np.arctan2(dy[mask], dx[mask])

    powers = {p for n, m in ORDERS for _, p in _radial_coeffs(n, m)}
    rho_pow = {p: rho_d ** p for p in powers}

    rows = np.empty((len(ORDERS), rho_d.size), dtype=np.complex128)
    for row, (n, m) in enumerate(ORDERS):
        radial = np.zeros_like(rho_d)
        for c, p in _radial_coeffs(n, m):
            radial += c * rho_pow[p]
        rows[row] = radial * np.exp(-1j * m * theta_d)
        rows[row] *= (n + 1) / pi
    return mask, rows


def zernike_magnitudes(plane: np.ndarray) -> np.ndarray:
    """49 rotation-invariant moment magnitudes of a patch."""
    h, w = plane.shape
    mask, basis = _basis(h, w)
    f = plane.astype(np.float64, copy=False)[mask]
    f = f - f.mean()
    moments = basis @ f / f.size
    return np.abs(moments)
