"""Descriptor bank: hand oracles per family plus bank-level invariants."""

import math
import statistics

import numpy as np
import pytest

from styletree import features
from styletree.errors import ConfigError
from styletree.features.chebyshev import chebyshev_hist
from styletree.features.edges import edge_stats, prewitt
from styletree.features.fractal import fractal_features
from styletree.features.gabor import FREQS, ORIENTS, gabor_energies
from styletree.features.haralick import haralick_features
from styletree.features.stats import intensity_stats, multiscale_histogram
from styletree.features.tamura import tamura_features
from styletree.features.zernike import ORDERS, zernike_magnitudes


def random_patch(seed, h, w):
    return np.random.default_rng(seed).integers(0, 256, size=(h, w)).astype(np.float64)


# intensity statistics ------------------------------------------------------

def test_intensity_stats_against_plain_python():
    for seed in range(20):
        p = random_patch(seed, 6, 7)
        vals = [float(v) for v in p.ravel()]
        mu = sum(vals) / len(vals)
        var = sum((v - mu) ** 2 for v in vals) / len(vals)
        sd = math.sqrt(var)
        skew = sum((v - mu) ** 3 for v in vals) / len(vals) / sd ** 3
        kurt = sum((v - mu) ** 4 for v in vals) / len(vals) / sd ** 4 - 3.0
        med = statistics.median(vals)
        got = intensity_stats(p)
        want = [mu, sd, skew, kurt, med]
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_intensity_stats_constant():
    assert intensity_stats(np.full((4, 4), 128.0)).tolist() == [128, 0, 0, 0, 128]


# multi-scale histograms ----------------------------------------------------

def test_multiscale_histogram_delta():
    got = multiscale_histogram(np.zeros((3, 3)))
    want = np.zeros(24)
    for start, bins in zip((0, 3, 8, 15), (3, 5, 7, 9)):
        want[start] = 1.0
    assert np.array_equal(got, want)


def test_multiscale_histogram_bin_edges():
    # 85 sits exactly on the first 3-bin edge and belongs to the second bin;
    # 255 belongs to the last (closed) bin
    h = multiscale_histogram(np.array([[85.0]]))
    assert h[:3].tolist() == [0.0, 1.0, 0.0]
    h = multiscale_histogram(np.array([[255.0]]))
    assert h[:3].tolist() == [0.0, 0.0, 1.0]


def test_multiscale_histogram_sums():
    for seed in range(10):
        h = multiscale_histogram(random_patch(seed, 9, 5))
        for start, bins in zip((0, 3, 8, 15), (3, 5, 7, 9)):
            assert abs(h[start:start + bins].sum() - 1.0) < 1e-12


# haralick ------------------------------------------------------------------

def test_haralick_hand_oracle():
    # levels [[0, 1], [2, 3]]; co-occurrence worked out on paper per direction
    p = np.array([[0.0, 16.0], [32.0, 48.0]])
    got = haralick_features(p)
    assert got[0] == pytest.approx(0.375)   # asm mean
    assert got[1] == pytest.approx(0.25)    # asm range
    assert got[2] == pytest.approx(3.75)    # contrast mean: (1+4+1+9)/4
    assert got[3] == pytest.approx(8.0)     # contrast range: 9-1
    assert got[8] == pytest.approx(0.325)   # idm mean
    assert got[9] == pytest.approx(0.4)     # idm range


def test_haralick_constant():
    got = haralick_features(np.full((5, 5), 200.0))
    assert got[0] == 1.0      # asm
    assert got[2] == 0.0      # contrast
    assert got[4] == 0.0      # correlation defined as 0 when flat
    assert np.array_equal(got[1::2], np.zeros(13))  # all ranges 0


def test_haralick_transpose_invariance():
    # the symmetric offset set makes stats invariant under transposition
    for seed in range(10):
        p = random_patch(seed, 8, 8)
        a = haralick_features(p)
        b = haralick_features(p.T)
        assert np.allclose(a, b, rtol=1e-10, atol=1e-12)


# zernike -------------------------------------------------------------------

def test_zernike_order_table():
    assert len(ORDERS) == 49
    assert ORDERS[0] == (0, 0)
    assert ORDERS[-1] == (12, 12)
    for n, m in ORDERS:
        assert 0 <= m <= n <= 12 and (n - m) % 2 == 0


def test_zernike_constant_is_zero():
    assert np.allclose(zernike_magnitudes(np.full((16, 16), 77.0)), 0.0)


def test_zernike_rotation_invariance():
    for seed in range(30):
        p = random_patch(seed, 21, 21)
        a = zernike_magnitudes(p)
        b = zernike_magnitudes(np.rot90(p))
        assert np.allclose(a, b, rtol=1e-6, atol=1e-9)


def test_zernike_rotation_invariance_rectangular():
    p = random_patch(3, 18, 30)
    a = zernike_magnitudes(p)
    b = zernike_magnitudes(np.rot90(p))
    assert np.allclose(a, b, rtol=1e-6, atol=1e-9)


def test_zernike_linear_in_contrast():
    p = random_patch(7, 17, 17)
    assert np.allclose(zernike_magnitudes(2.0 * p),
                       2.0 * zernike_magnitudes(p), rtol=1e-9, atol=1e-12)


# edges ---------------------------------------------------------------------

def test_prewitt_hand_case():
    p = np.zeros((3, 3))
    p[2, :] = 255.0
    gx, gy = prewitt(p)
    assert gx.shape == (1, 1) and gx[0, 0] == 0.0
    assert gy[0, 0] == 765.0


def test_prewitt_against_plain_loops():
    p = random_patch(4, 7, 9)
    gx, gy = prewitt(p)
    for y in range(1, 6):
        for x in range(1, 8):
            wx = sum(p[y + dy, x + 1] - p[y + dy, x - 1] for dy in (-1, 0, 1))
            wy = sum(p[y + 1, x + dx] - p[y - 1, x + dx] for dx in (-1, 0, 1))
            assert gx[y - 1, x - 1] == pytest.approx(wx)
            assert gy[y - 1, x - 1] == pytest.approx(wy)


def test_edge_stats_against_recompute():
    p = random_patch(12, 14, 11)
    gx, gy = prewitt(p)
    mag = np.hypot(gx, gy)
    strong = mag > mag.mean()
    hist = [0.0] * 8
    for vy, vx in zip(gy[strong], gx[strong]):
        b = min(7, int((math.atan2(vy, vx) + math.pi) * (8 / (2 * math.pi))))
        hist[b] += 1.0 / strong.sum()
    got = edge_stats(p)
    assert got[0] == pytest.approx(mag.mean())
    assert got[3] == pytest.approx(strong.mean())
    assert np.allclose(got[4:12], hist, atol=1e-12)
    assert got[12] == pytest.approx(max(hist))


def test_edge_stats_degenerate():
    for p in (np.full((5, 5), 9.0), np.zeros((2, 2)), np.zeros((1, 1))):
        got = edge_stats(p)
        assert got[:4].tolist() == [0.0, 0.0, 0.0, 0.0]
        assert np.allclose(got[4:12], 0.125)


# tamura --------------------------------------------------------------------

def checker(cell, size=64):
    y, x = np.mgrid[0:size, 0:size]
    return np.where(((y // cell) + (x // cell)) % 2 == 1, 191.0, 64.0)


def test_tamura_coarseness_monotonic_in_cell_size():
    vals = [tamura_features(checker(c))[0] for c in (2, 4, 8, 16)]
    assert vals == sorted(vals)
    assert vals[0] < vals[-1]


def test_tamura_constant():
    got = tamura_features(np.full((32, 32), 50.0))
    assert got[1] == 0.0                       # contrast
    assert got[2] == pytest.approx(1.0 / 16)   # directionality fallback


def test_tamura_directionality_prefers_stripes():
    x = np.arange(64, dtype=np.float64)
    stripes = np.broadcast_to(128 + 100 * np.sin(0.8 * x), (64, 64))
    noisy = random_patch(0, 64, 64)
    d_stripes = tamura_features(np.asarray(stripes))[2]
    d_noise = tamura_features(noisy)[2]
    assert d_stripes > 3 * d_noise


def test_tamura_scale_histogram_sums_to_one():
    for seed in range(5):
        got = tamura_features(random_patch(seed, 40, 40))
        assert abs(got[3:].sum() - 1.0) < 1e-12


# gabor ---------------------------------------------------------------------

def test_gabor_formula_recompute():
    p = random_patch(21, 32, 32)
    centered = p - p.mean()
    power = np.abs(np.fft.fft2(centered)) ** 2
    fy = np.fft.fftfreq(32)[:, None]
    fx = np.fft.fftfreq(32)[None, :]
    want = []
    for f in FREQS:
        acc = 0.0
        for theta in ORIENTS:
            g = np.exp(-((fy - f * np.sin(theta)) ** 2
                         + (fx - f * np.cos(theta)) ** 2) / (2 * (f / 3.0) ** 2))
            acc += float((g * g * power).sum()) / (32 * 32) ** 2
        want.append(acc / len(ORIENTS))
    assert np.allclose(gabor_energies(p), want, rtol=1e-12)


def test_gabor_frequency_selectivity():
    x = np.arange(128, dtype=np.float64)
    low = np.asarray(np.broadcast_to(128 + 100 * np.sin(2 * np.pi * 0.05 * x),
                                     (128, 128)))
    high = np.asarray(np.broadcast_to(128 + 100 * np.sin(2 * np.pi * 0.4 * x),
                                      (128, 128)))
    e_low = gabor_energies(low)
    e_high = gabor_energies(high)
    assert int(np.argmax(e_low)) == 0
    assert int(np.argmax(e_high)) == len(FREQS) - 1


# fractal -------------------------------------------------------------------

def test_fractal_flat_surface_dimension_two():
    # constant 64x64: every scale keeps exactly (64/s)^2 boxes, so the
    # log-log slope is the plane dimension
    got = fractal_features(np.full((64, 64), 123.0))
    for si, s in enumerate((2, 4, 8, 16, 32, 64)):
        assert got[si] == pytest.approx(math.log2((64 // s) ** 2))
    assert got[-1] == pytest.approx(2.0, abs=1e-9)


def test_fractal_noise_rougher_than_flat():
    noise = random_patch(0, 64, 64)
    assert fractal_features(noise)[-1] > 2.2


def test_fractal_small_patch_finite():
    got = fractal_features(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert np.isfinite(got).all()


# chebyshev -----------------------------------------------------------------

def cheb_coeff_loops(p):
    """Independent projection using cos(m*arccos(x)) directly."""
    h, w = p.shape
    gy = np.linspace(-1, 1, h) if h > 1 else np.zeros(1)
    gx = np.linspace(-1, 1, w) if w > 1 else np.zeros(1)
    out = np.zeros((21, 21))
    for m in range(21):
        tm = np.cos(m * np.arccos(np.clip(gy, -1, 1)))
        for n in range(21):
            tn = np.cos(n * np.arccos(np.clip(gx, -1, 1)))
            wm = (1.0 if m == 0 else 2.0) / h
            wn = (1.0 if n == 0 else 2.0) / w
            out[m, n] = wm * wn * float(tm @ p @ tn)
    return out


def test_chebyshev_histogram_against_recompute():
    p = random_patch(15, 12, 10)
    coeffs = cheb_coeff_loops(p).ravel()
    counts, _ = np.histogram(coeffs, bins=32, range=(coeffs.min(), coeffs.max()))
    assert np.allclose(chebyshev_hist(p), counts / coeffs.size, atol=1e-12)


def test_chebyshev_hist_sums_to_one():
    for seed in range(5):
        assert abs(chebyshev_hist(random_patch(seed, 8, 8)).sum() - 1.0) < 1e-12


def test_chebyshev_degenerate_all_zero():
    got = chebyshev_hist(np.zeros((6, 6)))
    assert got[0] == 1.0 and got[1:].sum() == 0.0


# bank ----------------------------------------------------------------------

def test_bank_size_and_names():
    assert features.bank_size("v1") == 256
    names = features.descriptor_names("v1")
    assert len(names) == 256
    assert len(set(names)) == 256
    assert names[0] == "intensity.raw.mean"
    assert sum(n.split(".")[1] == "raw" for n in names) == 169
    assert sum(n.split(".")[1] == "fft" for n in names) == 87
    with pytest.raises(ConfigError):
        features.bank_size("v9")
    with pytest.raises(ConfigError):
        features.descriptor_names("v9")


def test_fft_plane_range_and_flat_case():
    plane = features.fft_magnitude_plane(random_patch(1, 24, 24))
    assert plane.min() >= 0.0 and plane.max() <= 255.0
    assert plane.max() == 255.0
    # an all-zero patch is the truly flat spectrum (even DC vanishes)
    assert np.array_equal(features.fft_magnitude_plane(np.zeros((8, 8))),
                          np.zeros((8, 8)))
    # a constant patch concentrates everything in the DC bin
    const = features.fft_magnitude_plane(np.full((8, 8), 3.0))
    assert const[0, 0] == 255.0
    assert const.sum() == 255.0


def test_extract_finite_on_everything():
    shapes = [(1, 1), (1, 9), (9, 1), (2, 2), (5, 31), (40, 40)]
    for seed, (h, w) in enumerate(shapes):
        vec = features.extract(random_patch(seed, h, w))
        assert vec.shape == (256,)
        assert np.isfinite(vec).all()
    vec = features.extract(np.full((25, 25), 77.0))
    assert np.isfinite(vec).all()


def test_extract_deterministic():
    p = random_patch(2, 33, 29)
    assert np.array_equal(features.extract(p), features.extract(p))
