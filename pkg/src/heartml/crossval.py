"""Stratified k-fold cross-validation with pooled confusion aggregation.

Folds come from one seeded shuffle followed by a round-robin deal that
rotates a single fold pointer across the class groups, so both the total and
the per-class fold sizes differ by at most one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, CrossValidationError, HeartmlError, TooFewInstancesError
from .metrics import ConfusionMatrix, MetricsReport, metrics_report


@dataclass(frozen=True)
class CVPlan:
    k: int
    seed: int
    stratified: bool
    folds: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for fold in self.folds:
            for idx in fold:
                if idx in seen:
                    raise ValueError(f"instance {idx} assigned to two folds")
                seen.add(idx)
        if seen != set(range(len(seen))):
            raise ValueError("folds do not partition a 0..n-1 index range")
        sizes = [len(f) for f in self.folds]
        if sizes and max(sizes) - min(sizes) > 1:
            raise ValueError(f"fold sizes differ by more than 1: {sizes}")

    @property
    def n(self) -> int:
        return sum(len(f) for f in self.folds)


def make_cv_plan(dataset: Dataset, k: int = 10, *, seed: int, stratified: bool = True) -> CVPlan:
    """Deterministic fold assignment for the dataset.

    Raises TooFewInstancesError when n < k and ConfigError when k < 2.
    """
    n = len(dataset)
    if k < 2:
        raise ConfigError(f"cross-validation needs k >= 2 folds, got {k}")
    if n < k:
        raise TooFewInstancesError(n, k)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    order = rng.permutation(n)
    folds: list[list[int]] = [[] for _ in range(k)]
    if stratified:
        target = dataset.schema.target_index
        n_classes = len(dataset.schema.class_labels)
        # Class groups in declaration order, each in shuffled order; rows with
        # a missing class go last so they cannot skew the stratified classes.
        groups = [[] for _ in range(n_classes + 1)]
        for idx in order:
            v = dataset.rows[idx][target]
            groups[n_classes if v is None else int(v)].append(int(idx))
        pointer = 0
        for group in groups:
            for idx in group:
                folds[pointer].append(idx)
                pointer = (pointer + 1) % k
    else:
        for position, idx in enumerate(order):
            folds[position % k].append(int(idx))
    return CVPlan(k, seed, stratified, tuple(tuple(f) for f in folds))


@dataclass(frozen=True)
class CVResult:
    pooled: ConfusionMatrix
    metrics: MetricsReport
    fold_matrices: tuple[ConfusionMatrix, ...]


def cross_validate(dataset: Dataset, trainer, plan: CVPlan) -> CVResult:
    """Train on k-1 folds, score the held-out fold, pool the matrices.

    ``trainer`` is any callable Dataset -> model where the model has a
    ``predict_label(row) -> class index`` method. Training failures are
    re-raised as CrossValidationError carrying the fold index. Test rows with
    a missing class are skipped (they cannot be scored).
    """
    if len(dataset.schema.class_labels) != 2:
        raise ConfigError("confusion-matrix evaluation needs a two-category target")
    if plan.n != len(dataset):
        raise ConfigError(f"plan covers {plan.n} instances, dataset has {len(dataset)}")
    target = dataset.schema.target_index
    fold_matrices = []
    for i, fold in enumerate(plan.folds):
        held_out = set(fold)
        train_indices = [idx for idx in range(len(dataset)) if idx not in held_out]
        try:
            model = trainer(dataset.select_rows(train_indices))
        except HeartmlError as exc:
            raise CrossValidationError(i, exc) from exc
        pairs = []
        for idx in fold:
            actual = dataset.rows[idx][target]
            if actual is None:
                continue
            pairs.append((int(actual), model.predict_label(dataset.rows[idx])))
        fold_matrices.append(ConfusionMatrix.from_pairs(pairs))
    pooled = ConfusionMatrix.zero()
    for m in fold_matrices:
        pooled = pooled + m
    return CVResult(pooled, metrics_report(pooled), tuple(fold_matrices))
