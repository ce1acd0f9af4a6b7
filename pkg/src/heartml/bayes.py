"""Naive Bayes: frequency priors, Laplace-smoothed nominal likelihoods,
per-class Gaussian numeric likelihoods. Prediction runs in the log domain and
skips missing features entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dataset import Dataset
from .errors import EmptyClassError, NoInstancesError, SchemaMismatchError
from .schema import Schema

# Stddev floor: 1e-3 of the attribute's global range, or this when the range is 0.
_MIN_STDDEV = 1e-9


@dataclass(frozen=True)
class NaiveBayesModel:
    """Immutable trained model.

    ``nominal_counts[i]`` (per nominal feature): per-class tuples of observed
    category counts, missing excluded. ``gaussians[i]`` (per numeric feature):
    per-class (mean, stddev) with the floored stddev, or None when the
    attribute had no known training values at all.
    """

    schema: Schema
    smoothing: float
    class_counts: tuple[int, ...]
    priors: tuple[float, ...]
    nominal_counts: tuple[tuple[tuple[int, ...], ...] | None, ...]
    gaussians: tuple[tuple[tuple[float, float], ...] | None, ...]

    def _check_row(self, row) -> tuple:
        if len(row) != len(self.schema):
            raise SchemaMismatchError(f"expected {len(self.schema)} values, got {len(row)}")
        try:
            return tuple(a.check_value(v) for a, v in zip(self.schema.attributes, row))
        except ValueError as exc:
            raise SchemaMismatchError(str(exc)) from exc

    def log_posteriors(self, row) -> list[float]:
        """Unnormalized log posterior per class (-inf for impossible classes)."""
        row = self._check_row(row)
        out = []
        for c, prior in enumerate(self.priors):
            if prior == 0.0:
                out.append(-math.inf)
                continue
            logp = math.log(prior)
            for i in self.schema.feature_indices:
                v = row[i]
                if v is None:
                    continue
                if self.nominal_counts[i] is not None:
                    counts = self.nominal_counts[i][c]
                    known = sum(counts)
                    denom = known + self.smoothing * len(counts)
                    if denom == 0.0:
                        continue
                    num = counts[int(v)] + self.smoothing
                    logp += math.log(num / denom) if num > 0 else -math.inf
                elif self.gaussians[i] is not None:
                    mean, std = self.gaussians[i][c]
                    logp += -0.5 * math.log(2.0 * math.pi * std * std) - (v - mean) ** 2 / (2.0 * std * std)
            out.append(logp)
        return out

    def predict_row(self, row) -> list[float]:
        """Normalized posterior distribution over classes."""
        logs = self.log_posteriors(row)
        peak = max(logs)
        if peak == -math.inf:
            return [1.0 / len(logs)] * len(logs)
        weights = [math.exp(lp - peak) for lp in logs]
        total = sum(weights)
        return [w / total for w in weights]

    def predict_label(self, row) -> int:
        dist = self.predict_row(row)
        return dist.index(max(dist))


def nb_train(dataset: Dataset, smoothing: float = 1.0) -> NaiveBayesModel:
    """Train on rows whose class is known; every declared class needs >= 1.

    Raises NoInstancesError on an empty dataset and EmptyClassError when a
    declared target category has no instances.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be >= 0")
    schema = dataset.schema
    target = schema.target_index
    rows = [row for row in dataset.rows if row[target] is not None]
    if not rows:
        raise NoInstancesError()
    n_classes = len(schema.class_labels)
    class_counts = [0] * n_classes
    for row in rows:
        class_counts[int(row[target])] += 1
    for label, count in zip(schema.class_labels, class_counts):
        if count == 0:
            raise EmptyClassError(label)
    total = len(rows)
    priors = tuple(c / total for c in class_counts)

    nominal_counts: list = [None] * len(schema)
    gaussians: list = [None] * len(schema)
    for i in schema.feature_indices:
        attr = schema.attributes[i]
        if attr.is_nominal:
            counts = [[0] * len(attr.categories) for _ in range(n_classes)]
            for row in rows:
                v = row[i]
                if v is not None:
                    counts[int(row[target])][int(v)] += 1
            nominal_counts[i] = tuple(tuple(c) for c in counts)
        else:
            known_all = [row[i] for row in rows if row[i] is not None]
            if not known_all:
                continue
            global_range = max(known_all) - min(known_all)
            floor = 1e-3 * global_range if global_range > 0 else _MIN_STDDEV
            global_mean = sum(known_all) / len(known_all)
            per_class = []
            for c in range(n_classes):
                vals = [row[i] for row in rows if row[i] is not None and int(row[target]) == c]
                if vals:
                    mean = sum(vals) / len(vals)
                    if len(vals) >= 2:
                        var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
                        std = math.sqrt(var)
                    else:
                        std = 0.0
                else:
                    mean, std = global_mean, 0.0
                per_class.append((mean, max(std, floor)))
            gaussians[i] = tuple(per_class)

    return NaiveBayesModel(
        schema=schema,
        smoothing=float(smoothing),
        class_counts=tuple(class_counts),
        priors=priors,
        nominal_counts=tuple(nominal_counts),
        gaussians=tuple(gaussians),
    )
