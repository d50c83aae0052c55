"""Run configuration: flat key=value files overridden by CLI flags.

Fields left unset (None) inherit defaults at the point of use; for the
evaluate/similarity/tree commands an unset mode/stride/bank simply
adopts whatever the feature store was extracted with, and an explicitly
set value that disagrees with the store is an error naming the field.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .features import bank_size
from .similarity import STRATEGIES

MODES = ("tiles", "roi")
DEFAULT_MODE = "tiles"
DEFAULT_STRIDE = 50

_INT_KEYS = {"stride", "seed", "runs", "train_n", "test_n"}
_PATH_KEYS = {"dataset", "out"}
_STR_KEYS = {"mode", "bank_version", "normalization"}
_ALL_KEYS = _INT_KEYS | _PATH_KEYS | _STR_KEYS


@dataclass
class RunConfig:
    dataset: Path | None = None
    out: Path | None = None
    mode: str | None = None
    stride: int | None = None
    bank_version: str | None = None
    seed: int = 0
    runs: int = 20
    train_n: int = 45
    test_n: int = 5
    normalization: str = "ratio-rescale"

    def validate(self) -> "RunConfig":
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.stride is not None and self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.train_n < 1 or self.test_n < 1:
            raise ConfigError("train_n and test_n must be >= 1")
        if self.normalization not in STRATEGIES:
            raise ConfigError(
                f"normalization must be one of {STRATEGIES}, got {self.normalization!r}")
        if self.bank_version is not None:
            bank_size(self.bank_version)  # raises on unknown versions
        return self


def parse_kv_file(path: str | Path) -> list[tuple[str, str]]:
    """key=value lines; blank lines and # comments skipped; order kept."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {text!r}")
        key, _, value = text.partition("=")
        pairs.append((key.strip(), value.strip()))
    return pairs


def load_config(path: str | Path | None, overrides: dict) -> RunConfig:
    """Merge defaults <- config file <- CLI overrides, then validate."""
    values: dict = {}
    if path is not None:
        for key, raw in parse_kv_file(path):
            if key not in _ALL_KEYS:
                raise ConfigError(f"{path}: unknown config key {key!r}")
            if key in values:
                raise ConfigError(f"{path}: duplicate config key {key!r}")
            try:
                values[key] = (int(raw) if key in _INT_KEYS
                               else Path(raw) if key in _PATH_KEYS else raw)
            except ValueError:
                raise ConfigError(f"{path}: key {key!r} needs an integer, "
                                  f"got {raw!r}") from None
    for key, val in overrides.items():
        if val is not None:
            values[key] = val

    known = {f.name for f in fields(RunConfig)}
    assert set(values) <= known
    return RunConfig(**values).validate()
