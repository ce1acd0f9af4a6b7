"""Tabular schema: attribute declarations and the built-in heart-disease layout.

Cell values are carried as plain Python objects: ``int`` category index for
nominal attributes, ``float`` for numeric attributes, ``None`` for missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

Value = int | float | None

NOMINAL = "nominal"
NUMERIC = "numeric"


class Role(str, Enum):
    FEATURE = "feature"
    TARGET = "target"


@dataclass(frozen=True)
class AttributeSpec:
    """One column: a name, a kind (nominal with categories, or numeric) and a role."""

    name: str
    kind: str
    categories: tuple[str, ...] = ()
    role: Role = Role.FEATURE

    def __post_init__(self):
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        if "\n" in self.name or "\r" in self.name:
            raise ValueError(f"attribute name {self.name!r} contains a line break")
        if self.kind == NOMINAL:
            if not self.categories:
                raise ValueError(f"nominal attribute {self.name!r} declares no categories")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"nominal attribute {self.name!r} has duplicate category labels")
            for label in self.categories:
                if not label:
                    raise ValueError(f"nominal attribute {self.name!r} has an empty category label")
                if "\n" in label or "\r" in label:
                    raise ValueError(f"category label {label!r} of {self.name!r} contains a line break")
        elif self.kind == NUMERIC:
            if self.categories:
                raise ValueError(f"numeric attribute {self.name!r} must not declare categories")
        else:
            raise ValueError(f"unknown attribute kind {self.kind!r}")

    @property
    def is_nominal(self) -> bool:
        return self.kind == NOMINAL

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def check_value(self, value: Value) -> Value:
        """Validate one cell against this attribute; returns the normalized value.

        Integers are widened to floats for numeric attributes. Raises ValueError
        on out-of-range category indices and non-finite numerics.
        """
        if value is None:
            return None
        if self.is_nominal:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{self.name}: nominal value must be a category index, got {value!r}")
            if not 0 <= value < len(self.categories):
                raise ValueError(f"{self.name}: category index {value} out of range")
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{self.name}: numeric value must be a real number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"{self.name}: numeric value must be finite, got {value!r}")
        return value


@dataclass(frozen=True)
class Schema:
    """Ordered attribute list with exactly one nominal target."""

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self):
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate attribute names: {dup}")
        targets = [a for a in self.attributes if a.role == Role.TARGET]
        if len(targets) != 1:
            raise ValueError(f"schema must declare exactly one target attribute, found {len(targets)}")
        if not targets[0].is_nominal:
            raise ValueError(f"target attribute {targets[0].name!r} must be nominal")

    def __len__(self) -> int:
        return len(self.attributes)

    @property
    def target_index(self) -> int:
        for i, a in enumerate(self.attributes):
            if a.role == Role.TARGET:
                return i
        raise AssertionError("unreachable: schema always has a target")

    @property
    def target(self) -> AttributeSpec:
        return self.attributes[self.target_index]

    @property
    def class_labels(self) -> tuple[str, ...]:
        return self.target.categories

    @property
    def feature_indices(self) -> tuple[int, ...]:
        t = self.target_index
        return tuple(i for i in range(len(self.attributes)) if i != t)

    def index_of(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise KeyError(name)

    def attribute(self, name: str) -> AttributeSpec:
        return self.attributes[self.index_of(name)]


def nominal(name: str, categories, role: Role = Role.FEATURE) -> AttributeSpec:
    return AttributeSpec(name, NOMINAL, tuple(str(c) for c in categories), role)


def numeric(name: str) -> AttributeSpec:
    return AttributeSpec(name, NUMERIC)


def heart_schema() -> Schema:
    """The built-in 14-attribute heart-disease schema.

    Eight nominal attributes (Sex, Cp, Fbs, Restecg, Exang, Slope, Thal and the
    Target class, 1 = infected / 0 = not infected) and six numeric ones (Age,
    Trestbps, Chol, Thalach, OldPeak, Ca), in the conventional column order.
    """
    return Schema((
        numeric("Age"),
        nominal("Sex", ["0", "1"]),
        nominal("Cp", ["1", "2", "3", "4"]),
        numeric("Trestbps"),
        numeric("Chol"),
        nominal("Fbs", ["0", "1"]),
        nominal("Restecg", ["0", "1", "2"]),
        numeric("Thalach"),
        nominal("Exang", ["0", "1"]),
        numeric("OldPeak"),
        nominal("Slope", ["1", "2", "3"]),
        numeric("Ca"),
        nominal("Thal", ["3", "6", "7"]),
        nominal("Target", ["0", "1"], role=Role.TARGET),
    ))
