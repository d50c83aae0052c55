"""Image loading and dataset discovery.

Every input is reduced to a single-channel 8-bit intensity grid. Color is
collapsed with Rec.601 luma (0.299 R + 0.587 G + 0.114 B) rounded half up,
so gray pixels (v, v, v) map back to v exactly. 16-bit samples are reduced
to 8 bits by integer division by 257 before the luma step. Alpha channels
are dropped. Supported formats: PNG, binary PGM (P5), binary PPM (P6).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DatasetError, ImageFormatError

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = (".png", ".pgm", ".ppm")

# Rec.601 luma weights, applied in float64; the rounding is floor(x + 0.5)
# rather than banker's rounding so ties never drift down.
_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


@dataclass(frozen=True)
class IntensityGrid:
    """Row-major 8-bit grayscale raster."""

    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 2 or self.pixels.dtype != np.uint8:
            raise ImageFormatError("intensity grid must be a 2-D uint8 array")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class DatasetManifest:
    """Sorted view of a category-per-subdirectory image tree.

    ``samples`` holds (relative path, category) pairs ordered by
    (category, filename); ``categories`` is lexicographically sorted and
    is the ordering every downstream matrix and tie-break uses.
    """

    root: Path
    categories: list[str]
    samples: list[tuple[str, str]]

    def resolve(self, rel: str) -> Path:
        return self.root / rel

    def by_category(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {c: [] for c in self.categories}
        for rel, cat in self.samples:
            out[cat].append(rel)
        return out


def _luma(rgb: np.ndarray) -> np.ndarray:
    """Collapse an (h, w, 3) uint8 array to uint8 luma, rounding half up."""
    y = np.floor(rgb.astype(np.float64) @ _LUMA + 0.5)
    return y.astype(np.uint8)


def _halve_depth(arr: np.ndarray) -> np.ndarray:
    # 16-bit -> 8-bit policy: integer division by 257 (65535 -> 255).
    return (np.clip(arr, 0, 65535) // 257).astype(np.uint8)


def _from_channels(arr: np.ndarray) -> np.ndarray:
    """Apply the channel policy to a 2-D (gray) or 3-D (color) uint8 array."""
    if arr.ndim == 2:
        return arr
    if arr.shape[2] == 4:
        arr = arr[:, :, :3]
    return _luma(arr)


def _read_pnm(data: bytes, path: Path) -> np.ndarray:
    """Parse binary PGM/PPM bytes into a uint8 grid."""
    if len(data) < 2 or data[:2] not in (b"P5", b"P6"):
        raise ImageFormatError(f"{path}: not a binary PGM/PPM file")
    channels = 1 if data[:2] == b"P5" else 3

    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # with '#' comments running to end of line, then a single whitespace
    # byte before the raster.
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        if pos >= len(data):
            raise ImageFormatError(f"{path}: truncated header")
        c = data[pos : pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif c.isspace():
            pos += 1
        elif c.isdigit():
            start = pos
            while pos < len(data) and data[pos : pos + 1].isdigit():
                pos += 1
            fields.append(int(data[start:pos]))
        else:
            raise ImageFormatError(f"{path}: bad header byte {c!r}")
    pos += 1  # the single whitespace after maxval

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise ImageFormatError(f"{path}: bad maxval {maxval}")

    two_byte = maxval > 255
    need = width * height * channels * (2 if two_byte else 1)
    raster = data[pos : pos + need]
    if len(raster) < need:
        raise ImageFormatError(f"{path}: truncated raster data")

    if two_byte:
        arr = _halve_depth(np.frombuffer(raster, dtype=">u2").astype(np.uint32))
    else:
        arr = np.frombuffer(raster, dtype=np.uint8)
    arr = arr.reshape((height, width) if channels == 1 else (height, width, channels))
    return _from_channels(arr)


def _read_png(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            arr = np.asarray(im)
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise ImageFormatError(f"{path}: cannot decode PNG ({exc})") from exc

    if mode == "1":
        return arr.astype(np.uint8) * 255
    if mode in ("I", "I;16", "I;16B", "I;16L"):
        return _halve_depth(arr.astype(np.uint32))
    if mode in ("L", "RGB", "RGBA"):
        return _from_channels(arr)
    if mode == "LA":
        return arr[:, :, 0]
    raise ImageFormatError(f"{path}: unsupported PNG mode {mode!r}")


def load_image(path: str | Path) -> IntensityGrid:
    """Load one image file as an :class:`IntensityGrid`.

    Unreadable files raise the underlying ``OSError`` (which names the
    path); undecodable or unsupported content raises
    :class:`ImageFormatError`. No partial grid is ever returned.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        return IntensityGrid(_read_png(path))
    if suffix in (".pgm", ".ppm"):
        return IntensityGrid(_read_pnm(path.read_bytes(), path))
    raise ImageFormatError(f"{path}: unsupported image format {suffix!r}")


def scan_dataset(root: str | Path) -> DatasetManifest:
    """Build a manifest from a root with one subdirectory per category.

    Non-image files are skipped with a warning; an empty category or a
    root without category directories is an error. Output ordering does
    not depend on directory-listing order.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"dataset root {root} is not a directory")

    categories = sorted(p.name for p in root.iterdir() if p.is_dir())
    if not categories:
        raise DatasetError(f"dataset root {root} contains no category directories")

    samples: list[tuple[str, str]] = []
    for cat in categories:
        names: list[str] = []
        for entry in sorted((root / cat).iterdir(), key=lambda p: p.name):
            if entry.is_file() and entry.suffix.lower() in IMAGE_SUFFIXES:
                names.append(entry.name)
            elif entry.is_file():
                log.warning("ignoring non-image file %s", entry)
        if not names:
            raise DatasetError(f"category {cat!r} contains no images")
        samples.extend((f"{cat}/{name}", cat) for name in names)

    return DatasetManifest(root=root, categories=categories, samples=samples)
