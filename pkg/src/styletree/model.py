"""Fisher-weighted nearest-distance classifier.

Training rescales every feature to [0, 100] using per-feature min/max
over all training patches, scores each feature with a Fisher
discriminant ratio on the rescaled values, and keeps the top 15% of the
bank. The distance from a patch x to a category A is the minimum over
A's training patches of sum_f w_f * (x_f - t_f)^2 with w the Fisher
scores of the selected features; an image's distance to A is the mean
of its patches' distances; prediction is the argmin over categories,
ties resolved toward the lexicographically smallest name.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractError, TrainingError

RESCALE_SPAN = 100.0
FISHER_CAP = 1e6
SELECT_NUM = 3  # keep ceil(3/20) == 15% of the bank
SELECT_DEN = 20
DEFAULT_PATCH_COUNT = 16


@dataclass
class TrainedModel:
    """Frozen training state: bounds, weights, and reference patches."""

    bank_version: str
    categories: list[str]
    train_min: np.ndarray
    train_max: np.ndarray
    fisher: np.ndarray
    selected: np.ndarray
    training: dict[str, np.ndarray]
    training_ids: dict[str, list[str]]

    @property
    def weights(self) -> np.ndarray:
        return self.fisher[self.selected]

    def with_fisher(self, fisher: np.ndarray) -> "TrainedModel":
        return replace(self, fisher=np.asarray(fisher, dtype=np.float64))


def rescale(raw: np.ndarray, train_min: np.ndarray, train_max: np.ndarray) -> np.ndarray:
    """Map features onto [0, 100] by the training bounds, clamping outliers.

    A degenerate feature (train_min == train_max) maps to 0 everywhere.
    """
    raw = np.asarray(raw, dtype=np.float64)
    span = train_max - train_min
    live = span > 0.0
    out = np.zeros_like(raw)
    scaled = RESCALE_SPAN * (raw - train_min) / np.where(live, span, 1.0)
    out[..., live] = np.clip(scaled[..., live], 0.0, RESCALE_SPAN)
    return out


def fisher_scores(groups: list[np.ndarray]) -> np.ndarray:
    """Per-feature between/within variance ratio on rescaled values.

    ``groups`` holds one (n_patches, n_features) array per category.
    Between-variance uses the mean of the category means and a C-1
    denominator; within-variance averages the per-category sample
    variances (n-1). A feature with zero within-variance scores the cap
    1e6 if its category means differ, else 0.
    """
    if len(groups) < 2:
        raise TrainingError(f"need at least 2 categories, got {len(groups)}")
    widths = {g.shape[1] for g in groups}
    if len(widths) != 1:
        raise TrainingError(f"inconsistent feature widths {sorted(widths)}")
    for g in groups:
        if g.shape[0] < 2:
            raise TrainingError("every category needs at least 2 training patches")

    means = np.stack([g.mean(axis=0) for g in groups])
    grand = means.mean(axis=0)
    between = ((means - grand) ** 2).sum(axis=0) / (len(groups) - 1)
    within = np.stack([g.var(axis=0, ddof=1) for g in groups]).mean(axis=0)

    scores = np.zeros(means.shape[1])
    live = within > 0.0
    scores[live] = between[live] / within[live]
    scores[~live & (between > 0.0)] = FISHER_CAP
    return scores


def select(scores: np.ndarray) -> np.ndarray:
    """Indices of the top 15% scores (ceil), ascending.

    The cutoff is exact integer arithmetic, ceil(3n/20), so n on a 15%
    boundary never drifts on float rounding. Ties at the cutoff keep the
    lower feature index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    n = scores.shape[0]
    if n == 0:
        raise TrainingError("empty score vector")
    keep = (SELECT_NUM * n + SELECT_DEN - 1) // SELECT_DEN
    order = np.lexsort((np.arange(n), -scores))
    return np.sort(order[:keep])


def train_model(groups: dict[str, np.ndarray],
                ids: dict[str, list[str]] | None = None,
                bank_version: str = "v1") -> TrainedModel:
    """Build a model from raw per-category patch matrices."""
    categories = sorted(groups)
    raw = [np.asarray(groups[c], dtype=np.float64) for c in categories]
    stacked = np.vstack(raw)
    train_min = stacked.min(axis=0)
    train_max = stacked.max(axis=0)

    rescaled = [rescale(g, train_min, train_max) for g in raw]
    fisher = fisher_scores(rescaled)
    selected = select(fisher)

    training = {c: r[:, selected] for c, r in zip(categories, rescaled)}
    training_ids = {c: list((ids or {}).get(c, [])) for c in categories}
    return TrainedModel(bank_version=bank_version, categories=categories,
                        train_min=train_min, train_max=train_max,
                        fisher=fisher, selected=selected,
                        training=training, training_ids=training_ids)


def weighted_distance(a: np.ndarray, b: np.ndarray, weights: np.ndarray) -> float:
    """sum_f w_f * (a_f - b_f)^2; lengths must agree."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if not (a.shape == b.shape == w.shape):
        raise ContractError(f"length mismatch {a.shape}/{b.shape}/{w.shape}")
    d = a - b
    return float((w * d * d).sum())


def patch_category_distance(x: np.ndarray, category: str, model: TrainedModel) -> float:
    """Minimum weighted distance from a rescaled+selected patch to a category."""
    try:
        t = model.training[category]
    except KeyError:
        raise TrainingError(f"unknown category {category!r}") from None
    if t.shape[0] == 0:
        raise TrainingError(f"category {category!r} has no training patches")
    d = t - x
    return float((d * d * model.weights).sum(axis=1).min())


def image_category_distance(patches: np.ndarray, category: str, model: TrainedModel,
                            patch_count: int = DEFAULT_PATCH_COUNT) -> float:
    """Mean of per-patch distances; the patch count is a hard contract."""
    patches = np.asarray(patches, dtype=np.float64)
    if patches.shape[0] != patch_count:
        raise ContractError(
            f"image must contribute exactly {patch_count} patches, got {patches.shape[0]}")
    return float(np.mean(
        [patch_category_distance(p, category, model) for p in patches]))


def prepare_patches(raw_patches: np.ndarray, model: TrainedModel) -> np.ndarray:
    """Rescale raw bank vectors by the model bounds and slice the selection."""
    return rescale(np.asarray(raw_patches, dtype=np.float64),
                   model.train_min, model.train_max)[:, model.selected]


def image_distances(prepared: np.ndarray, model: TrainedModel,
                    patch_count: int = DEFAULT_PATCH_COUNT) -> np.ndarray:
    """Distance from one image to every category, in model category order."""
    return np.array([image_category_distance(prepared, c, model, patch_count)
                     for c in model.categories])


def predict(prepared: np.ndarray, model: TrainedModel,
            patch_count: int = DEFAULT_PATCH_COUNT) -> str:
    """Category with the smallest image distance; first (lexicographic) on ties."""
    d = image_distances(prepared, model, patch_count)
    return model.categories[int(np.argmin(d))]


def predict_patch(x: np.ndarray, model: TrainedModel) -> str:
    """Nearest category for a single prepared patch (tile-vote diagnostic)."""
    d = [patch_category_distance(x, c, model) for c in model.categories]
    return model.categories[int(np.argmin(d))]


def selection_count(n: int) -> int:
    """ceil(15% of n) without float arithmetic."""
    return (SELECT_NUM * n + SELECT_DEN - 1) // SELECT_DEN


def chance_floor(n_categories: int) -> float:
    return 1.0 / n_categories
