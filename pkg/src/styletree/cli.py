"""Command-line pipeline: extract, evaluate, similarity, tree, synth.

Commands compose through the feature store: ``extract`` walks a dataset
once and caches descriptors in <out>/features.tsv; the other commands
read that store, so re-running evaluation or tree building never
re-decodes an image. Failures exit nonzero with a single
tab-separated line on stderr: ``error<TAB>kind<TAB>message``.

The extraction worker pool size defaults to the CPU count and can be
overridden with STYLETREE_THREADS; results are written in manifest
order regardless of pool size, so output bytes do not depend on
parallelism.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import features as features_mod
from .config import DEFAULT_MODE, DEFAULT_STRIDE, RunConfig, load_config, parse_kv_file
from .errors import ConfigError, StyleTreeError
from .evaluation import run_experiment
from .phylo import export_phylip, neighbor_joining, to_newick
from .raster import load_image, scan_dataset
from .sampler import sample_patches
from .similarity import normalize, symmetrize, to_similarity
from .store import (FeatureStore, StoreHeader, atomic_write_text, read_store,
                    write_matrix, write_report, write_store)
from .synth import CategorySpec, synth_dataset

STORE_NAME = "features.tsv"
THREADS_ENV = "STYLETREE_THREADS"


def _worker_count(n_tasks: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        workers = os.cpu_count() or 1
    else:
        try:
            workers = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        if workers < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1, got {workers}")
    return max(1, min(workers, n_tasks))


def _extract_sample(task):
    root, rel, cat, mode, stride, bank = task
    grid = load_image(Path(root) / rel)
    patches = sample_patches(grid, mode, stride=stride, parent=rel)
    vectors = np.vstack([features_mod.extract(p.pixels, bank) for p in patches])
    meta = [(p.index, p.x0, p.y0) for p in patches]
    return rel, cat, meta, vectors


def cmd_extract(cfg: RunConfig) -> None:
    if cfg.dataset is None:
        raise ConfigError("extract requires --dataset")
    if cfg.out is None:
        raise ConfigError("extract requires --out")
    mode = cfg.mode or DEFAULT_MODE
    stride = cfg.stride if cfg.stride is not None else DEFAULT_STRIDE
    bank = cfg.bank_version or features_mod.BANK_VERSION

    manifest = scan_dataset(cfg.dataset)
    tasks = [(str(manifest.root), rel, cat, mode, stride, bank)
             for rel, cat in manifest.samples]

    store = FeatureStore(header=StoreHeader(
        bank_version=bank, mode=mode, stride=stride, seed=cfg.seed))
    workers = _worker_count(len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_extract_sample, tasks, chunksize=4)
            for rel, cat, meta, vectors in results:
                store.add_sample(rel, cat, meta, vectors)
    else:
        for task in tasks:
            rel, cat, meta, vectors = _extract_sample(task)
            store.add_sample(rel, cat, meta, vectors)

    cfg.out.mkdir(parents=True, exist_ok=True)
    write_store(store, cfg.out / STORE_NAME)


def _load_matching_store(cfg: RunConfig) -> FeatureStore:
    if cfg.out is None:
        raise ConfigError("this command requires --out (the extract output directory)")
    store = read_store(cfg.out / STORE_NAME)
    for name, wanted, actual in [
            ("bank_version", cfg.bank_version, store.header.bank_version),
            ("mode", cfg.mode, store.header.mode),
            ("stride", cfg.stride, store.header.stride)]:
        if wanted is not None and wanted != actual:
            raise ConfigError(
                f"store/config mismatch on {name}: store has {actual!r}, "
                f"config says {wanted!r}")
    return store


def cmd_evaluate(cfg: RunConfig) -> None:
    store = _load_matching_store(cfg)
    result = run_experiment(store, seed=cfg.seed, runs=cfg.runs,
                            train_n=cfg.train_n, test_n=cfg.test_n)
    header = StoreHeader(bank_version=store.header.bank_version,
                         mode=store.header.mode, stride=store.header.stride,
                         seed=cfg.seed)
    write_report(result, header, cfg.out / "report.tsv")


def _aggregate_pipeline(cfg: RunConfig):
    store = _load_matching_store(cfg)
    result = run_experiment(store, seed=cfg.seed, runs=cfg.runs,
                            train_n=cfg.train_n, test_n=cfg.test_n)
    header = StoreHeader(bank_version=store.header.bank_version,
                         mode=store.header.mode, stride=store.header.stride,
                         seed=cfg.seed)
    norm = normalize(result.aggregate_matrix, cfg.normalization)
    return result, norm, header


def cmd_similarity(cfg: RunConfig) -> None:
    result, norm, header = _aggregate_pipeline(cfg)
    tag = {"normalization": cfg.normalization}
    write_matrix(result.categories, result.aggregate_matrix.values, header,
                 cfg.out / "M.tsv")
    write_matrix(norm.categories, norm.values, header, cfg.out / "D.tsv", extra=tag)
    sim = to_similarity(norm)
    write_matrix(sim.categories, sim.values, header, cfg.out / "S.tsv", extra=tag)


def cmd_tree(cfg: RunConfig) -> None:
    result, norm, header = _aggregate_pipeline(cfg)
    d_sym = symmetrize(norm)
    tree = neighbor_joining(d_sym, norm.categories)
    # Newick/Phylip are bit-exact interchange formats; provenance that
    # would normally ride in a header block goes to the sidecar instead.
    atomic_write_text(cfg.out / "tree.nwk", to_newick(tree))
    atomic_write_text(cfg.out / "infile.phylip", export_phylip(d_sym, norm.categories))
    meta = header.lines() + [f"# normalization\t{cfg.normalization}"]
    atomic_write_text(cfg.out / "tree.meta.tsv", "\n".join(meta) + "\n")


def cmd_synth(cfg: RunConfig, recipe: Path) -> None:
    if cfg.out is None:
        raise ConfigError("synth requires --out")
    categories: list[CategorySpec] = []
    settings = {"images": 50, "width": 500, "height": 500, "seed": cfg.seed}
    for key, value in parse_kv_file(recipe):
        if key == "category":
            parts = value.split(":")
            if len(parts) not in (3, 4):
                raise ConfigError(
                    f"{recipe}: category needs name:family:parameter[:coverage], "
                    f"got {value!r}")
            categories.append(CategorySpec(
                name=parts[0], family=parts[1], parameter=float(parts[2]),
                coverage=float(parts[3]) if len(parts) == 4 else 1.0))
        elif key in settings:
            settings[key] = int(value)
        else:
            raise ConfigError(f"{recipe}: unknown dataset key {key!r}")
    if not categories:
        raise ConfigError(f"{recipe}: no category lines")
    synth_dataset(categories, images_per_category=settings["images"],
                  width=settings["width"], height=settings["height"],
                  seed=settings["seed"], out_dir=cfg.out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="styletree",
        description="Texture-descriptor classification and style-tree pipeline")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None,
                       help="flat key=value config file; flags win")
        p.add_argument("--dataset", type=Path, default=None)
        p.add_argument("--mode", choices=("tiles", "roi"), default=None)
        p.add_argument("--stride", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--train-n", type=int, default=None, dest="train_n")
        p.add_argument("--test-n", type=int, default=None, dest="test_n")
        p.add_argument("--bank", type=str, default=None, dest="bank_version")
        p.add_argument("--normalization", choices=("ratio-rescale", "paper-literal"),
                       default=None)
        p.add_argument("--out", type=Path, default=None)

    for name, help_text in [
            ("extract", "decode a dataset and cache descriptors"),
            ("evaluate", "repeated-split accuracy report from a store"),
            ("similarity", "class distance and similarity matrices"),
            ("tree", "neighbor-joining tree and Phylip infile"),
            ("synth", "write a synthetic labeled dataset")]:
        p = sub.add_parser(name, help=help_text)
        common(p)
        if name == "synth":
            p.add_argument("recipe", type=Path, help="dataset recipe (key=value lines)")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {key: getattr(args, key) for key in (
        "dataset", "mode", "stride", "seed", "runs",
        "train_n", "test_n", "bank_version", "normalization", "out")}
    try:
        cfg = load_config(args.config, overrides)
        if args.command == "extract":
            cmd_extract(cfg)
        elif args.command == "evaluate":
            cmd_evaluate(cfg)
        elif args.command == "similarity":
            cmd_similarity(cfg)
        elif args.command == "tree":
            cmd_tree(cfg)
        else:
            cmd_synth(cfg, args.recipe)
        return 0
    except (StyleTreeError, OSError) as exc:
        print(f"error\t{type(exc).__name__}\t{exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
