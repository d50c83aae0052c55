"""Synthetic dataset generator: determinism, formats, texture properties."""

import hashlib

import numpy as np
import pytest

from styletree.errors import ConfigError
from styletree.raster import load_image
from styletree.synth import CategorySpec, render_image, synth_dataset, write_pgm


def dataset_digest(root):
    out = {}
    for path in sorted(root.rglob("*.pgm")):
        out[str(path.relative_to(root))] = hashlib.sha256(
            path.read_bytes()).hexdigest()
    return out


SPECS = [CategorySpec("bands", "stripes", 0.1),
         CategorySpec("board", "checker", 8.0),
         CategorySpec("static", "noise", 120.0)]


def test_synth_layout_and_determinism(tmp_path):
    a = synth_dataset(SPECS, images_per_category=3, width=64, height=48,
                      seed=5, out_dir=tmp_path / "a")
    b = synth_dataset(SPECS, images_per_category=3, width=64, height=48,
                      seed=5, out_dir=tmp_path / "b")
    da, db = dataset_digest(a), dataset_digest(b)
    assert da == db
    assert sorted(da) == [f"{cat}/img_{i:03d}.pgm"
                          for cat in ("bands", "board", "static")
                          for i in range(3)]

    c = synth_dataset(SPECS, images_per_category=3, width=64, height=48,
                      seed=6, out_dir=tmp_path / "c")
    assert dataset_digest(c) != da


def test_synth_images_load_back(tmp_path):
    root = synth_dataset(SPECS[:1], images_per_category=2, width=40, height=30,
                         seed=1, out_dir=tmp_path)
    grid = load_image(root / "bands" / "img_000.pgm")
    assert grid.pixels.shape == (30, 40)
    assert grid.pixels.dtype == np.uint8


def test_write_pgm_golden_header(tmp_path):
    pixels = np.arange(6, dtype=np.uint8).reshape(2, 3)
    write_pgm(tmp_path / "t.pgm", pixels)
    raw = (tmp_path / "t.pgm").read_bytes()
    assert raw == b"P5\n3 2\n255\n" + bytes(range(6))


def test_stripes_are_column_structured():
    rng = np.random.default_rng(3)
    img = render_image(CategorySpec("s", "stripes", 0.05), 100, 100, rng)
    # column means follow the sinusoid; row means stay near flat gray
    col_span = img.mean(axis=0).max() - img.mean(axis=0).min()
    row_span = img.mean(axis=1).max() - img.mean(axis=1).min()
    assert col_span > 100.0
    assert row_span < 20.0


def test_checker_concentrates_on_two_levels():
    rng = np.random.default_rng(4)
    img = render_image(CategorySpec("c", "checker", 10.0), 80, 80, rng)
    near = (np.abs(img.astype(float) - 64.0) < 25) \
        | (np.abs(img.astype(float) - 191.0) < 25)
    assert near.mean() > 0.95


def test_coverage_confines_texture():
    rng = np.random.default_rng(5)
    full = render_image(CategorySpec("s", "stripes", 0.1), 120, 120, rng)
    rng = np.random.default_rng(5)
    part = render_image(CategorySpec("s", "stripes", 0.1, coverage=0.25),
                        120, 120, rng)
    strong_full = (np.abs(full.astype(float) - 128.0) > 50).mean()
    strong_part = (np.abs(part.astype(float) - 128.0) > 50).mean()
    assert strong_full > 0.3
    assert strong_part < 0.2
    assert strong_part > 0.02


def test_render_respects_jitter_stream():
    a = render_image(CategorySpec("s", "stripes", 0.1), 50, 50,
                     np.random.default_rng([9, 0, 0]))
    b = render_image(CategorySpec("s", "stripes", 0.1), 50, 50,
                     np.random.default_rng([9, 0, 0]))
    c = render_image(CategorySpec("s", "stripes", 0.1), 50, 50,
                     np.random.default_rng([9, 0, 1]))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_category_spec_validation():
    with pytest.raises(ConfigError):
        CategorySpec("x", "plaid", 1.0)
    with pytest.raises(ConfigError):
        CategorySpec("x", "stripes", 0.1, coverage=0.0)
    with pytest.raises(ConfigError):
        CategorySpec("x", "stripes", 0.1, coverage=1.5)
    with pytest.raises(ConfigError):
        CategorySpec("x", "stripes", -2.0)


def test_synth_dataset_validation(tmp_path):
    with pytest.raises(ConfigError):
        synth_dataset(SPECS, images_per_category=0, width=8, height=8,
                      seed=0, out_dir=tmp_path)
    with pytest.raises(ConfigError):
        synth_dataset(SPECS, images_per_category=1, width=0, height=8,
                      seed=0, out_dir=tmp_path)
    twice = [CategorySpec("dup", "noise", 9.0), CategorySpec("dup", "noise", 8.0)]
    with pytest.raises(ConfigError):
        synth_dataset(twice, images_per_category=1, width=8, height=8,
                      seed=0, out_dir=tmp_path)
