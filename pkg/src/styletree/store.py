"""TSV serialization: feature store, trained models, matrices, reports.

One TSV family covers every artifact. Files open with a comment header
block (``# key<TAB>value`` lines: tool version, bank version, sampling
mode, stride, seed), then tabular content. Floats are written with
``repr``, the shortest decimal that round-trips to the same float64, so
a store read back and rewritten is byte-identical. Writes go through a
temp file and an atomic rename; a failed write leaves nothing behind.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import features as features_mod
from .errors import ConfigError, ContractError
from .model import TrainedModel

META_COLUMNS = ["path", "category", "patch", "x0", "y0"]
PATCHES_PER_SAMPLE = 16


@dataclass(frozen=True)
class StoreHeader:
    bank_version: str
    mode: str
    stride: int
    seed: int
    tool_version: str = __version__

    def lines(self) -> list[str]:
        return [
            f"# styletree\t{self.tool_version}",
            f"# bank_version\t{self.bank_version}",
            f"# mode\t{self.mode}",
            f"# stride\t{self.stride}",
            f"# seed\t{self.seed}",
        ]


@dataclass
class FeatureStore:
    """In-memory feature table: 16 descriptor rows per sample."""

    header: StoreHeader
    samples: list[str] = field(default_factory=list)
    category_of: dict[str, str] = field(default_factory=dict)
    patch_meta: dict[str, list[tuple[int, int, int]]] = field(default_factory=dict)
    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def add_sample(self, sample_id: str, category: str,
                   meta: list[tuple[int, int, int]], vectors: np.ndarray) -> None:
        bank = features_mod.bank_size(self.header.bank_version)
        if vectors.shape != (PATCHES_PER_SAMPLE, bank):
            raise ContractError(
                f"{sample_id}: vectors shape {vectors.shape}, expected "
                f"({PATCHES_PER_SAMPLE}, {bank})")
        if [m[0] for m in meta] != list(range(PATCHES_PER_SAMPLE)):
            raise ContractError(f"{sample_id}: patch indices must be 0..15 in order")
        if sample_id in self.vectors:
            raise ContractError(f"duplicate sample {sample_id}")
        self.samples.append(sample_id)
        self.category_of[sample_id] = category
        self.patch_meta[sample_id] = list(meta)
        self.vectors[sample_id] = np.asarray(vectors, dtype=np.float64)

    def by_category(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for sid in self.samples:
            out.setdefault(self.category_of[sid], []).append(sid)
        return {c: sorted(ids) for c, ids in sorted(out.items())}


def _fmt(v: float) -> str:
    return repr(float(v))


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_store(store: FeatureStore, path) -> None:
    names = features_mod.descriptor_names(store.header.bank_version)
    lines = store.header.lines()
    lines.append("\t".join(META_COLUMNS + names))
    for sid in store.samples:
        cat = store.category_of[sid]
        vecs = store.vectors[sid]
        for (idx, x0, y0), vec in zip(store.patch_meta[sid], vecs):
            cells = [sid, cat, str(idx), str(x0), str(y0)]
            cells.extend(_fmt(v) for v in vec)
            lines.append("\t".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _parse_header(lines: list[str], path) -> tuple[StoreHeader, int]:
    meta: dict[str, str] = {}
    i = 0
    while i < len(lines) and lines[i].startswith("# "):
        key, _, value = lines[i][2:].partition("\t")
        meta[key] = value
        i += 1
    try:
        header = StoreHeader(
            bank_version=meta["bank_version"],
            mode=meta["mode"],
            stride=int(meta["stride"]),
            seed=int(meta["seed"]),
            tool_version=meta["styletree"],
        )
    except KeyError as exc:
        raise ConfigError(f"{path}: header block missing key {exc}") from None
    return header, i


def read_store(path) -> FeatureStore:
    with open(path, "r", encoding="ascii", newline="\n") as fh:
        lines = fh.read().splitlines()
    header, i = _parse_header(lines, path)
    names = features_mod.descriptor_names(header.bank_version)
    expected_cols = META_COLUMNS + names
    if i >= len(lines) or lines[i].split("\t") != expected_cols:
        raise ConfigError(f"{path}: column header does not match bank "
                          f"{header.bank_version!r}")

    store = FeatureStore(header=header)
    bank = len(names)
    pending: dict[str, tuple[str, list, list]] = {}
    order: list[str] = []
    for line in lines[i + 1:]:
        cells = line.split("\t")
        if len(cells) != len(expected_cols):
            raise ConfigError(f"{path}: row with {len(cells)} cells, "
                              f"expected {len(expected_cols)}")
        sid, cat = cells[0], cells[1]
        if sid not in pending:
            pending[sid] = (cat, [], [])
            order.append(sid)
        stored_cat, meta, rows = pending[sid]
        if cat != stored_cat:
            raise ConfigError(f"{path}: sample {sid} listed under two categories")
        meta.append((int(cells[2]), int(cells[3]), int(cells[4])))
        rows.append(np.array([float(c) for c in cells[5:]], dtype=np.float64))

    for sid in order:
        cat, meta, rows = pending[sid]
        if len(rows) != PATCHES_PER_SAMPLE:
            raise ConfigError(f"{path}: sample {sid} has {len(rows)} rows, "
                              f"expected {PATCHES_PER_SAMPLE}")
        store.add_sample(sid, cat, meta, np.vstack(rows).reshape(-1, bank))
    return store


def write_model(trained: TrainedModel, header: StoreHeader, path) -> None:
    lines = header.lines()
    lines.append("#SECTION categories")
    lines.extend(trained.categories)
    lines.append("#SECTION features")
    lines.append("index\ttrain_min\ttrain_max\tfisher\tselected")
    chosen = set(int(s) for s in trained.selected)
    for f in range(trained.train_min.shape[0]):
        lines.append("\t".join([
            str(f), _fmt(trained.train_min[f]), _fmt(trained.train_max[f]),
            _fmt(trained.fisher[f]), "1" if f in chosen else "0"]))
    lines.append("#SECTION patches")
    for cat in trained.categories:
        for row in trained.training[cat]:
            lines.append("\t".join([cat] + [_fmt(v) for v in row]))
    lines.append("#SECTION training_ids")
    for cat in trained.categories:
        for sid in trained.training_ids[cat]:
            lines.append(f"{cat}\t{sid}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_model(path) -> tuple[TrainedModel, StoreHeader]:
    with open(path, "r", encoding="ascii", newline="\n") as fh:
        lines = fh.read().splitlines()
    header, i = _parse_header(lines, path)

    sections: dict[str, list[str]] = {}
    current = None
    for line in lines[i:]:
        if line.startswith("#SECTION "):
            current = line[len("#SECTION "):]
            sections[current] = []
        elif current is None:
            raise ConfigError(f"{path}: content before first section")
        else:
            sections[current].append(line)

    try:
        categories = sections["categories"]
        feat_rows = sections["features"][1:]  # skip column header
        patch_rows = sections["patches"]
        id_rows = sections["training_ids"]
    except KeyError as exc:
        raise ConfigError(f"{path}: missing model section {exc}") from None

    n = len(feat_rows)
    train_min = np.empty(n)
    train_max = np.empty(n)
    fisher = np.empty(n)
    selected = []
    for row in feat_rows:
        f, lo, hi, fish, sel = row.split("\t")
        f = int(f)
        train_min[f] = float(lo)
        train_max[f] = float(hi)
        fisher[f] = float(fish)
        if sel == "1":
            selected.append(f)

    training: dict[str, list[np.ndarray]] = {c: [] for c in categories}
    for row in patch_rows:
        cells = row.split("\t")
        training[cells[0]].append(np.array([float(c) for c in cells[1:]]))
    training_ids: dict[str, list[str]] = {c: [] for c in categories}
    for row in id_rows:
        cat, _, sid = row.partition("\t")
        training_ids[cat].append(sid)

    trained = TrainedModel(
        bank_version=header.bank_version,
        categories=categories,
        train_min=train_min,
        train_max=train_max,
        fisher=fisher,
        selected=np.array(selected, dtype=np.int64),
        training={c: np.vstack(v) for c, v in training.items()},
        training_ids=training_ids,
    )
    return trained, header


def write_matrix(categories: list[str], values: np.ndarray, header: StoreHeader,
                 path, extra: dict[str, str] | None = None) -> None:
    """Category-labeled square matrix, values at 9 significant digits."""
    lines = header.lines()
    for key, val in (extra or {}).items():
        lines.append(f"# {key}\t{val}")
    lines.append("\t".join([""] + categories))
    for name, row in zip(categories, values):
        lines.append("\t".join([name] + [f"{v:.9g}" for v in row]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_report(result, header: StoreHeader, path) -> None:
    """Evaluation report: per-run accuracies, confusions, aggregate block."""
    lines = header.lines()
    lines.append("#SECTION runs")
    lines.append("run\timage_accuracy\ttile_accuracy")
    for r in result.reports:
        lines.append(f"{r.run_index}\t{_fmt(r.image_accuracy)}\t{_fmt(r.tile_accuracy)}")
    for r in result.reports:
        lines.append(f"#SECTION confusion run={r.run_index}")
        lines.append("\t".join(["true\\pred"] + result.categories))
        for name, row in zip(result.categories, r.confusion):
            lines.append("\t".join([name] + [str(int(v)) for v in row]))
    lines.append("#SECTION aggregate")
    lines.append(f"mean_image_accuracy\t{_fmt(result.mean_accuracy)}")
    lines.append(f"stddev_image_accuracy\t{_fmt(result.accuracy_stddev)}")
    lines.append(f"pooled_image_accuracy\t{_fmt(result.pooled_accuracy)}")
    lines.append(f"chance_floor\t{_fmt(result.chance_floor)}")
    atomic_write_text(path, "\n".join(lines) + "\n")
