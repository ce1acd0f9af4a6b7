"""CSV ingestion against a known schema.

The header row is matched to schema attribute names; columns may appear in any
order and are reordered to the schema. Empty cells and ``?`` are missing.
"""

from __future__ import annotations

import csv as _csv
import io

from .dataset import Dataset
from .errors import (
    ArityMismatchError,
    MalformedHeaderError,
    MissingColumnError,
    NonNumericCellError,
    UnknownCategoryError,
)
from .schema import Schema


def parse_csv(text: str, schema: Schema, *, name: str = "data") -> Dataset:
    """Parse CSV text into a Dataset with the given schema.

    Raises MissingColumnError / MalformedHeaderError for header problems and
    the row-level format errors for bad cells.
    """
    reader = _csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedHeaderError("empty CSV: no header row") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        dup = sorted({h for h in header if header.count(h) > 1})
        raise MalformedHeaderError(f"duplicate CSV columns: {dup}", line=1)
    known = {a.name for a in schema.attributes}
    extra = [h for h in header if h not in known]
    if extra:
        raise MalformedHeaderError(f"unknown CSV columns: {extra}", line=1)
    for attr in schema.attributes:
        if attr.name not in header:
            raise MissingColumnError(attr.name)
    order = [header.index(a.name) for a in schema.attributes]

    rows = []
    for row_no, record in enumerate(reader, start=1):
        if not record or (len(record) == 1 and record[0].strip() == ""):
            continue  # skip blank lines
        if len(record) != len(header):
            raise ArityMismatchError(row_no, len(header), len(record))
        row = []
        for attr, src in zip(schema.attributes, order):
            token = record[src].strip()
            if token in ("", "?"):
                row.append(None)
            elif attr.is_nominal:
                try:
                    row.append(attr.categories.index(token))
                except ValueError:
                    raise UnknownCategoryError(row_no, attr.name, token) from None
            else:
                try:
                    value = float(token)
                except ValueError:
                    raise NonNumericCellError(row_no, attr.name, token) from None
                try:
                    row.append(attr.check_value(value))
                except ValueError:
                    raise NonNumericCellError(row_no, attr.name, token) from None
        rows.append(tuple(row))
    return Dataset(schema, tuple(rows), name=name)


def write_csv(dataset: Dataset) -> str:
    """Serialize a Dataset to CSV with a header row (missing cells empty)."""
    from .arff import format_numeric

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow([a.name for a in dataset.schema.attributes])
    for row in dataset.rows:
        out = []
        for attr, v in zip(dataset.schema.attributes, row):
            if v is None:
                out.append("")
            elif attr.is_nominal:
                out.append(attr.categories[int(v)])
            else:
                out.append(format_numeric(v))
        writer.writerow(out)
    return buf.getvalue()
