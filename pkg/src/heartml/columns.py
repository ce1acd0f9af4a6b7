"""Array-backed view of a Dataset for fast induction.

Nominal columns become int64 arrays with -1 for missing; numeric columns
become float64 arrays with NaN for missing. Classifiers index these with row
subsets instead of walking Python tuples.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset
from .schema import Schema


class ColumnView:
    """Per-column numpy arrays plus the class vector for one dataset."""

    __slots__ = ("schema", "n_rows", "columns", "y")

    def __init__(self, schema: Schema, columns: list[np.ndarray], y: np.ndarray):
        self.schema = schema
        self.columns = columns
        self.y = y
        self.n_rows = int(y.shape[0])

    @classmethod
    def from_dataset(cls, dataset: Dataset) -> "ColumnView":
        schema = dataset.schema
        n = len(dataset)
        columns: list[np.ndarray] = []
        for i, attr in enumerate(schema.attributes):
            if attr.is_nominal:
                col = np.fromiter(
                    (-1 if row[i] is None else int(row[i]) for row in dataset.rows),
                    dtype=np.int64, count=n,
                )
            else:
                col = np.fromiter(
                    (np.nan if row[i] is None else float(row[i]) for row in dataset.rows),
                    dtype=np.float64, count=n,
                )
            columns.append(col)
        y = columns[schema.target_index]
        return cls(schema, columns, y)

    @property
    def n_classes(self) -> int:
        return len(self.schema.class_labels)

    def is_nominal(self, index: int) -> bool:
        return self.schema.attributes[index].is_nominal

    def n_categories(self, index: int) -> int:
        return len(self.schema.attributes[index].categories)

    def known_rows(self) -> np.ndarray:
        """Indices of rows whose class is known."""
        return np.flatnonzero(self.y >= 0)
