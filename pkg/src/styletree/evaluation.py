"""Repeated-split evaluation harness.

Split plans are reproducible across languages, not just across Python
runs: the shuffle is Fisher-Yates over each category's sorted sample
ids, driven by SplitMix64 (Steele et al.'s 64-bit mix generator). One
stream serves one run; its state starts at

    state = (seed XOR (run_index + 1) * 0x9E3779B97F4A7C15) mod 2^64

and categories consume draws in lexicographic order, shuffling high
index down to 1 with j = next() mod (i + 1). Train takes the first
train_n shuffled ids, test the next test_n; every patch of an image
stays on one side of the split by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model as model_mod
from . import similarity as similarity_mod
from .errors import EvaluationError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Named PRNG for split plans; 64-bit state, full-period mix."""

    def __init__(self, state: int):
        self.state = state & _MASK64

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64


def _fisher_yates(items: list[str], rng: SplitMix64) -> list[str]:
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next() % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


@dataclass(frozen=True)
class SplitPlan:
    seed: int
    run_index: int
    train: dict[str, list[str]]
    test: dict[str, list[str]]


@dataclass(frozen=True)
class RunReport:
    run_index: int
    image_accuracy: float
    tile_accuracy: float
    confusion: np.ndarray
    matrix: similarity_mod.DistanceMatrix


@dataclass(frozen=True)
class ExperimentResult:
    categories: list[str]
    reports: list[RunReport]
    mean_accuracy: float
    accuracy_stddev: float
    pooled_accuracy: float
    chance_floor: float
    aggregate_matrix: similarity_mod.DistanceMatrix


def make_splits(samples_by_category: dict[str, list[str]], seed: int,
                runs: int = 20, train_n: int = 45, test_n: int = 5) -> list[SplitPlan]:
    """Per-run disjoint train/test id sets for every category."""
    if runs < 1:
        raise EvaluationError(f"runs must be >= 1, got {runs}")
    if train_n < 1 or test_n < 1:
        raise EvaluationError("train_n and test_n must be >= 1")
    need = train_n + test_n
    for cat in sorted(samples_by_category):
        have = len(samples_by_category[cat])
        if have < need:
            raise EvaluationError(
                f"category {cat!r} has {have} images, needs {need} "
                f"(train {train_n} + test {test_n})")

    plans = []
    for run in range(runs):
        rng = SplitMix64(seed ^ ((run + 1) * _GOLDEN))
        train: dict[str, list[str]] = {}
        test: dict[str, list[str]] = {}
        for cat in sorted(samples_by_category):
            shuffled = _fisher_yates(sorted(samples_by_category[cat]), rng)
            train[cat] = shuffled[:train_n]
            test[cat] = shuffled[train_n:train_n + test_n]
        plans.append(SplitPlan(seed=seed, run_index=run, train=train, test=test))
    return plans


def run_experiment(store, seed: int, runs: int = 20, train_n: int = 45,
                   test_n: int = 5) -> ExperimentResult:
    """Train/evaluate over every split and aggregate.

    ``store`` is a FeatureStore-like object exposing ``by_category()``,
    ``vectors[sample_id]`` (a 16 x bank array), and ``header``.
    """
    by_cat = store.by_category()
    categories = sorted(by_cat)
    if len(categories) < 2:
        raise EvaluationError(f"need at least 2 categories, got {len(categories)}")
    plans = make_splits(by_cat, seed=seed, runs=runs,
                        train_n=train_n, test_n=test_n)

    cat_index = {c: i for i, c in enumerate(categories)}
    reports = []
    correct_total = 0
    attempts_total = 0
    for plan in plans:
        groups = {c: np.vstack([store.vectors[sid] for sid in plan.train[c]])
                  for c in categories}
        ids = {c: list(plan.train[c]) for c in categories}
        trained = model_mod.train_model(groups, ids=ids,
                                        bank_version=store.header.bank_version)

        confusion = np.zeros((len(categories), len(categories)), dtype=np.int64)
        image_distances: list[tuple[str, np.ndarray]] = []
        tiles_correct = 0
        tiles_total = 0
        for cat in categories:
            for sid in plan.test[cat]:
                prepared = model_mod.prepare_patches(store.vectors[sid], trained)
                d = model_mod.image_distances(prepared, trained)
                predicted = categories[int(np.argmin(d))]
                confusion[cat_index[cat], cat_index[predicted]] += 1
                image_distances.append((cat, d))
                for patch in prepared:
                    tiles_correct += model_mod.predict_patch(patch, trained) == cat
                    tiles_total += 1

        attempts = int(confusion.sum())
        correct = int(np.trace(confusion))
        correct_total += correct
        attempts_total += attempts
        reports.append(RunReport(
            run_index=plan.run_index,
            image_accuracy=correct / attempts,
            tile_accuracy=tiles_correct / tiles_total,
            confusion=confusion,
            matrix=similarity_mod.build_matrix(categories, image_distances),
        ))

    accuracies = np.array([r.image_accuracy for r in reports])
    aggregate = similarity_mod.DistanceMatrix(
        categories=categories,
        values=np.mean([r.matrix.values for r in reports], axis=0))
    return ExperimentResult(
        categories=categories,
        reports=reports,
        mean_accuracy=float(accuracies.mean()),
        accuracy_stddev=float(accuracies.std(ddof=1)) if runs > 1 else 0.0,
        pooled_accuracy=correct_total / attempts_total,
        chance_floor=model_mod.chance_floor(len(categories)),
        aggregate_matrix=aggregate,
    )
