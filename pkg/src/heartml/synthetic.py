"""Synthetic dataset generation from per-class distribution parameters.

A generation spec gives class priors plus, for every feature, either a
per-class Gaussian (numeric) or a per-class category distribution (nominal).
Class counts come from the largest-remainder rounding of ``n * prior`` so the
realized split is as close to the priors as integers allow. Rows are emitted
grouped by class, each drawn from a single ``numpy`` generator seeded from the
run seed, which makes output a pure function of (spec, n, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import InvalidSpecError
from .schema import Schema


@dataclass(frozen=True)
class GaussianParams:
    means: tuple[float, ...]   # one per class
    stddevs: tuple[float, ...]


@dataclass(frozen=True)
class CategoricalParams:
    probs: tuple[tuple[float, ...], ...]  # [class][category]


@dataclass(frozen=True)
class SyntheticSpec:
    """Validated generation parameters for one schema."""

    schema: Schema
    class_priors: tuple[float, ...]
    params: tuple[GaussianParams | CategoricalParams | None, ...]  # by attribute index, None at target

    @classmethod
    def from_json(cls, obj, schema: Schema) -> "SyntheticSpec":
        if not isinstance(obj, dict):
            raise InvalidSpecError("generation spec must be a JSON object")
        unknown = set(obj) - {"class_priors", "attributes"}
        if unknown:
            raise InvalidSpecError(f"unknown spec keys: {sorted(unknown)}")
        n_classes = len(schema.class_labels)
        priors = _check_distribution(obj.get("class_priors"), n_classes, "class_priors")
        attrs_obj = obj.get("attributes")
        if not isinstance(attrs_obj, dict):
            raise InvalidSpecError("spec needs an 'attributes' object")
        feature_names = {schema.attributes[i].name for i in schema.feature_indices}
        missing = sorted(feature_names - set(attrs_obj))
        if missing:
            raise InvalidSpecError(f"spec missing attributes: {missing}")
        extra = sorted(set(attrs_obj) - feature_names)
        if extra:
            raise InvalidSpecError(f"spec has unknown attributes: {extra}")

        params: list[GaussianParams | CategoricalParams | None] = [None] * len(schema)
        for i in schema.feature_indices:
            attr = schema.attributes[i]
            spec = attrs_obj[attr.name]
            if not isinstance(spec, dict):
                raise InvalidSpecError(f"{attr.name}: parameters must be an object")
            if attr.is_numeric:
                if set(spec) != {"mean", "stddev"}:
                    raise InvalidSpecError(f"{attr.name}: numeric attribute needs exactly 'mean' and 'stddev'")
                means = _check_floats(spec["mean"], n_classes, f"{attr.name}.mean")
                stddevs = _check_floats(spec["stddev"], n_classes, f"{attr.name}.stddev")
                if any(s < 0 for s in stddevs):
                    raise InvalidSpecError(f"{attr.name}.stddev: must be non-negative")
                params[i] = GaussianParams(means, stddevs)
            else:
                if set(spec) != {"probs"}:
                    raise InvalidSpecError(f"{attr.name}: nominal attribute needs exactly 'probs'")
                rows = spec["probs"]
                if not isinstance(rows, list) or len(rows) != n_classes:
                    raise InvalidSpecError(f"{attr.name}.probs: need one row per class ({n_classes})")
                table = tuple(
                    _check_distribution(row, len(attr.categories), f"{attr.name}.probs[{c}]")
                    for c, row in enumerate(rows)
                )
                params[i] = CategoricalParams(table)
        return cls(schema, priors, tuple(params))


def _check_floats(value, length: int, what: str) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != length:
        raise InvalidSpecError(f"{what}: need a list of {length} numbers")
    out = []
    for x in value:
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(float(x)):
            raise InvalidSpecError(f"{what}: {x!r} is not a finite number")
        out.append(float(x))
    return tuple(out)


def _check_distribution(value, length: int, what: str) -> tuple[float, ...]:
    probs = _check_floats(value, length, what)
    if any(p < 0 for p in probs):
        raise InvalidSpecError(f"{what}: probabilities must be non-negative")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise InvalidSpecError(f"{what}: probabilities must sum to 1, got {sum(probs)}")
    return probs


def largest_remainder_counts(n: int, weights) -> list[int]:
    """Integer apportionment of n by the largest-remainder method, ties to the lower index."""
    exact = [n * w for w in weights]
    counts = [math.floor(e) for e in exact]
    order = sorted(range(len(counts)), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return counts


def _draw_category(rng: np.random.Generator, probs: tuple[float, ...]) -> int:
    u = rng.random() * sum(probs)
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


def generate_synthetic(spec: SyntheticSpec, n: int, seed: int, *, name: str = "synthetic") -> Dataset:
    """Generate n rows from the spec, grouped by class in declaration order."""
    schema = spec.schema
    counts = largest_remainder_counts(n, spec.class_priors)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    rows = []
    target = schema.target_index
    for c, count in enumerate(counts):
        for _ in range(count):
            row: list = []
            for i, attr in enumerate(schema.attributes):
                if i == target:
                    row.append(c)
                    continue
                p = spec.params[i]
                if isinstance(p, GaussianParams):
                    row.append(float(rng.normal(p.means[c], p.stddevs[c])))
                else:
                    assert isinstance(p, CategoricalParams)
                    row.append(_draw_category(rng, p.probs[c]))
            rows.append(tuple(row))
    return Dataset(schema, tuple(rows), name=name)


def heart_synthetic_params() -> dict:
    """Built-in generation parameters shaped like the Cleveland heart data.

    Class 0 is the healthy profile, class 1 the disease profile; numeric means
    and spreads and the category mixes follow the well-known dataset summary
    statistics.
    """
    return {
        "class_priors": [0.4310018903591682, 0.5689981096408318],
        "attributes": {
            "Age": {"mean": [52.6, 56.6], "stddev": [9.5, 8.0]},
            "Sex": {"probs": [[0.44, 0.56], [0.17, 0.83]]},
            "Cp": {"probs": [[0.10, 0.25, 0.41, 0.24], [0.05, 0.06, 0.13, 0.76]]},
            "Trestbps": {"mean": [129.3, 134.6], "stddev": [16.2, 18.8]},
            "Chol": {"mean": [242.6, 251.5], "stddev": [53.6, 49.6]},
            "Fbs": {"probs": [[0.85, 0.15], [0.86, 0.14]]},
            "Restecg": {"probs": [[0.56, 0.01, 0.43], [0.39, 0.03, 0.58]]},
            "Thalach": {"mean": [158.4, 139.3], "stddev": [19.2, 22.7]},
            "Exang": {"probs": [[0.86, 0.14], [0.45, 0.55]]},
            "OldPeak": {"mean": [0.58, 1.57], "stddev": [0.78, 1.30]},
            "Slope": {"probs": [[0.65, 0.29, 0.06], [0.29, 0.58, 0.13]]},
            "Ca": {"mean": [0.27, 1.13], "stddev": [0.63, 1.01]},
            "Thal": {"probs": [[0.79, 0.07, 0.14], [0.34, 0.10, 0.56]]},
        },
    }
