"""In-memory dataset: a schema plus validated rows, with subsetting helpers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyClassError, MissingTargetError, SchemaMismatchError
from .schema import NUMERIC, AttributeSpec, Role, Schema, Value


@dataclass(frozen=True)
class Dataset:
    """Immutable table of rows conforming to a schema.

    Rows hold ``int`` category indices for nominal cells, ``float`` for numeric
    cells and ``None`` for missing. The relation name is carried for display
    and serialization but ignored by equality.
    """

    schema: Schema
    rows: tuple[tuple[Value, ...], ...]
    name: str = field(default="data", compare=False)

    def __post_init__(self):
        width = len(self.schema)
        checked = []
        for r, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {r}: expected {width} values, got {len(row)}")
            try:
                checked.append(tuple(a.check_value(v) for a, v in zip(self.schema.attributes, row)))
            except ValueError as exc:
                raise ValueError(f"row {r}: {exc}") from exc
        object.__setattr__(self, "rows", tuple(checked))

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def n_attributes(self) -> int:
        return len(self.schema)

    def column(self, index: int) -> tuple[Value, ...]:
        return tuple(row[index] for row in self.rows)

    def class_of(self, row_index: int) -> int | None:
        v = self.rows[row_index][self.schema.target_index]
        return None if v is None else int(v)

    def class_counts(self) -> list[int]:
        """Instance count per target category, in declaration order."""
        counts = [0] * len(self.schema.class_labels)
        t = self.schema.target_index
        for row in self.rows:
            v = row[t]
            if v is not None:
                counts[int(v)] += 1
        return counts

    def missing_counts(self) -> list[int]:
        """Missing-cell count per attribute, in declaration order."""
        counts = [0] * len(self.schema)
        for row in self.rows:
            for i, v in enumerate(row):
                if v is None:
                    counts[i] += 1
        return counts

    def select_rows(self, indices) -> "Dataset":
        rows = tuple(self.rows[i] for i in indices)
        return Dataset(self.schema, rows, name=self.name)

    def select_features(self, feature_indices) -> "Dataset":
        """Project onto the given feature columns; the target is always kept.

        Feature order follows the original schema regardless of the order given.
        """
        t = self.schema.target_index
        wanted = set(feature_indices)
        bad = wanted - set(self.schema.feature_indices)
        if bad:
            raise SchemaMismatchError(f"not feature indices: {sorted(bad)}")
        keep = [i for i in range(len(self.schema)) if i in wanted or i == t]
        schema = Schema(tuple(self.schema.attributes[i] for i in keep))
        rows = tuple(tuple(row[i] for i in keep) for row in self.rows)
        return Dataset(schema, rows, name=self.name)

    def require_nonempty_classes(self) -> None:
        """Raise EmptyClassError if any declared target category has no instances."""
        for label, count in zip(self.schema.class_labels, self.class_counts()):
            if count == 0:
                raise EmptyClassError(label)

    def require_known_targets(self) -> None:
        """Raise MissingTargetError on the first row whose target cell is missing."""
        t = self.schema.target_index
        for r, row in enumerate(self.rows, start=1):
            if row[t] is None:
                raise MissingTargetError(r)


def nominal_to_numeric_view(dataset: Dataset) -> Dataset:
    """Re-type every nominal feature as numeric, value = its category index.

    The target stays nominal; instance count, attribute order and missing
    cells are preserved exactly.
    """
    t = dataset.schema.target_index
    attrs = tuple(
        AttributeSpec(a.name, NUMERIC) if a.is_nominal and i != t else a
        for i, a in enumerate(dataset.schema.attributes)
    )
    schema = Schema(attrs)
    rows = tuple(
        tuple(
            float(v) if v is not None and attrs[i].is_numeric and dataset.schema.attributes[i].is_nominal else v
            for i, v in enumerate(row)
        )
        for row in dataset.rows
    )
    return Dataset(schema, rows, name=dataset.name)


def feature_indices_by_name(schema: Schema, names) -> list[int]:
    """Resolve feature names to schema indices, rejecting the target and unknowns."""
    out = []
    for name in names:
        idx = schema.index_of(name)
        if schema.attributes[idx].role == Role.TARGET:
            raise SchemaMismatchError(f"{name!r} is the target attribute, not a feature")
        out.append(idx)
    return out
