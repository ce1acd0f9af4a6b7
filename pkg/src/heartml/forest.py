"""Random forest: bagged unpruned trees with per-node feature subsampling and
majority voting. Per-tree randomness comes from a splittable seed scheme
(master seed, tree index), so training is reproducible regardless of how many
trees are trained or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .columns import ColumnView
from .dataset import Dataset
from .errors import ConfigError, NoInstancesError, SchemaMismatchError
from .schema import Schema
from .tree import DecisionTree, _argmax, _grow


@dataclass(frozen=True)
class RandomForestModel:
    schema: Schema
    trees: tuple[DecisionTree, ...]
    k_per_split: int
    seed: int
    min_leaf: int
    bootstrap: bool

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def vote_counts(self, row) -> list[int]:
        counts = [0] * len(self.schema.class_labels)
        for tree in self.trees:
            counts[tree.predict_label(row)] += 1
        return counts

    def predict_row(self, row) -> list[float]:
        if len(row) != len(self.schema):
            raise SchemaMismatchError(f"expected {len(self.schema)} values, got {len(row)}")
        votes = self.vote_counts(row)
        return [v / len(self.trees) for v in votes]

    def predict_label(self, row) -> int:
        return _argmax(self.predict_row(row))


def default_k_per_split(n_features: int) -> int:
    """The forest default: floor(log2(M)) + 1 candidate features per split."""
    return int(math.floor(math.log2(n_features))) + 1


def rf_train(dataset: Dataset, *, trees: int = 100, k_per_split: int | None = None,
             seed: int, min_leaf: int = 1, bootstrap: bool = True,
             allow_zero_gain_splits: bool = False) -> RandomForestModel:
    """Train ``trees`` unpruned trees, each on a bootstrap resample.

    ``bootstrap=False`` is a test hook that trains every tree on the full
    dataset, making a 1-tree forest with k_per_split = M the plain unpruned
    tree.
    """
    if trees < 1:
        raise ConfigError(f"trees must be >= 1, got {trees}")
    if min_leaf < 1:
        raise ConfigError(f"min_leaf must be >= 1, got {min_leaf}")
    n_features = len(dataset.schema.feature_indices)
    if n_features == 0:
        raise ConfigError("dataset has no feature attributes")
    if k_per_split is None:
        k_per_split = default_k_per_split(n_features)
    if not 1 <= k_per_split <= n_features:
        raise ConfigError(f"k_per_split must be in [1, {n_features}], got {k_per_split}")

    view = ColumnView.from_dataset(dataset)
    rows = view.known_rows()
    if rows.size == 0:
        raise NoInstancesError()
    n = rows.size
    uniform = tuple(1.0 / view.n_classes for _ in range(view.n_classes))

    grown = []
    for t in range(trees):
        rng = np.random.default_rng(np.random.SeedSequence([seed, t]))
        if bootstrap:
            sample = rows[np.sort(rng.integers(0, n, size=n))]
        else:
            sample = rows
        root = _grow(view, sample, uniform, min_leaf, allow_zero_gain_splits,
                     rng=rng, k_features=k_per_split)
        grown.append(DecisionTree(dataset.schema, root, min_leaf=min_leaf, cf=0.25,
                                  pruned=False, allow_zero_gain=allow_zero_gain_splits))
    return RandomForestModel(
        schema=dataset.schema,
        trees=tuple(grown),
        k_per_split=k_per_split,
        seed=seed,
        min_leaf=min_leaf,
        bootstrap=bootstrap,
    )
