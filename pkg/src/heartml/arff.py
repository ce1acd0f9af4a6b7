"""ARFF reader/writer for the subset used here.

Supported: ``@relation``, ``@attribute`` (numeric/real/integer and nominal
``{...}`` types), ``@data`` with dense comma-separated rows, ``%`` comments,
``?`` for missing, and single-quoted tokens with backslash escapes. Keywords
are case-insensitive. Sparse rows, string, date and relational attributes are
out of scope and rejected.

By default the last attribute is the class. A ``% target: <name>`` comment
before ``@data`` overrides that, and the writer emits one whenever the class
is not the last column, so any dataset round-trips.
"""

from __future__ import annotations

import re

from .dataset import Dataset
from .errors import (
    ArityMismatchError,
    MalformedHeaderError,
    NonNumericCellError,
    UnknownCategoryError,
)
from .schema import NOMINAL, NUMERIC, AttributeSpec, Role, Schema

_NUMERIC_TYPES = {"numeric", "real", "integer"}
_UNSUPPORTED_TYPES = {"string", "date", "relational"}

_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", "\\": "\\", "'": "'", '"': '"', "%": "%"}
_ESCAPE_OUT = {"\\": "\\\\", "'": "\\'", "\n": "\\n", "\r": "\\r", "\t": "\\t", "%": "\\%"}

_TARGET_DIRECTIVE = re.compile(r"^\s*target\s*:\s*(.*?)\s*$", re.IGNORECASE)


def _read_quoted(text: str, start: int, line_no: int) -> tuple[str, int]:
    """Read a quoted token starting at the opening quote; returns (value, index past closing quote)."""
    quote = text[start]
    out = []
    i = start + 1
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text):
                raise MalformedHeaderError("dangling backslash in quoted token", line=line_no)
            out.append(_ESCAPES.get(text[i + 1], text[i + 1]))
            i += 2
        elif c == quote:
            return "".join(out), i + 1
        else:
            out.append(c)
            i += 1
    raise MalformedHeaderError("unterminated quoted token", line=line_no)


def _strip_comment(line: str) -> str:
    """Drop an unquoted % comment; quotes are respected."""
    i = 0
    quote = None
    while i < len(line):
        c = line[i]
        if quote:
            if c == "\\":
                i += 1
            elif c == quote:
                quote = None
        elif c in "'\"":
            quote = c
        elif c == "%":
            return line[:i]
        i += 1
    return line


def _split_csv(line: str, line_no: int) -> list[tuple[str, bool]]:
    """Split a data line on commas; returns (token, was_quoted) pairs."""
    fields: list[tuple[str, bool]] = []
    i = 0
    n = len(line)
    while True:
        while i < n and line[i] in " \t":
            i += 1
        if i < n and line[i] in "'\"":
            token, i = _read_quoted(line, i, line_no)
            quoted = True
            while i < n and line[i] in " \t":
                i += 1
            if i < n and line[i] != ",":
                raise MalformedHeaderError(f"unexpected text after quoted token: {line[i:]!r}", line=line_no)
        else:
            j = i
            while j < n and line[j] != ",":
                j += 1
            token = line[i:j].strip()
            quoted = False
            i = j
        fields.append((token, quoted))
        if i >= n:
            return fields
        i += 1  # skip the comma


def _parse_attribute(rest: str, line_no: int) -> AttributeSpec:
    rest = rest.strip()
    if not rest:
        raise MalformedHeaderError("@attribute needs a name and a type", line=line_no)
    if rest[0] in "'\"":
        name, i = _read_quoted(rest, 0, line_no)
    else:
        m = re.match(r"\S+", rest)
        name, i = m.group(0), m.end()
    type_part = rest[i:].strip()
    if not name:
        raise MalformedHeaderError("attribute name is empty", line=line_no)
    if not type_part:
        raise MalformedHeaderError(f"attribute {name!r} has no type", line=line_no)
    if type_part.startswith("{"):
        if not type_part.endswith("}"):
            raise MalformedHeaderError(f"attribute {name!r}: unclosed category list", line=line_no)
        body = type_part[1:-1]
        labels = [t for t, _ in _split_csv(body, line_no)] if body.strip() else []
        if not labels or any(label == "" for label in labels):
            raise MalformedHeaderError(f"attribute {name!r}: empty category label", line=line_no)
        if len(set(labels)) != len(labels):
            raise MalformedHeaderError(f"attribute {name!r}: duplicate category labels", line=line_no)
        return AttributeSpec(name, NOMINAL, tuple(labels))
    kind = type_part.lower()
    if kind in _NUMERIC_TYPES:
        return AttributeSpec(name, NUMERIC)
    if kind.split()[0] in _UNSUPPORTED_TYPES:
        raise MalformedHeaderError(f"attribute {name!r}: unsupported type {type_part!r}", line=line_no)
    raise MalformedHeaderError(f"attribute {name!r}: unknown type {type_part!r}", line=line_no)


def parse_arff(text: str, *, target: str | None = None) -> Dataset:
    """Parse ARFF text into a Dataset.

    ``target`` overrides both the ``% target:`` directive and the last-column
    default. Raises MalformedHeaderError, UnknownCategoryError,
    ArityMismatchError or NonNumericCellError on bad input.
    """
    relation: str | None = None
    attrs: list[AttributeSpec] = []
    directive_target: str | None = None
    rows: list[tuple] = []
    schema: Schema | None = None
    in_data = False
    data_row = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("%"):
            if not in_data:
                m = _TARGET_DIRECTIVE.match(stripped[1:])
                if m:
                    directive_target = m.group(1)
            continue
        line = _strip_comment(raw).strip()
        if not line:
            continue

        if not in_data and line.startswith("@"):
            m = re.match(r"@(\w+)\b", line)
            keyword = m.group(1).lower() if m else ""
            rest = line[m.end():] if m else ""
            if keyword == "relation":
                if relation is not None:
                    raise MalformedHeaderError("duplicate @relation", line=line_no)
                if attrs:
                    raise MalformedHeaderError("@relation must precede @attribute", line=line_no)
                rest = rest.strip()
                if not rest:
                    raise MalformedHeaderError("@relation needs a name", line=line_no)
                if rest[0] in "'\"":
                    relation, i = _read_quoted(rest, 0, line_no)
                    if rest[i:].strip():
                        raise MalformedHeaderError("unexpected text after relation name", line=line_no)
                else:
                    relation = rest
            elif keyword == "attribute":
                if relation is None:
                    raise MalformedHeaderError("@attribute before @relation", line=line_no)
                attr = _parse_attribute(rest, line_no)
                if any(a.name == attr.name for a in attrs):
                    raise MalformedHeaderError(f"duplicate attribute name {attr.name!r}", line=line_no)
                attrs.append(attr)
            elif keyword == "data":
                if rest.strip():
                    raise MalformedHeaderError("unexpected text after @data", line=line_no)
                if not attrs:
                    raise MalformedHeaderError("@data before any @attribute", line=line_no)
                schema = _resolve_schema(attrs, target, directive_target, line_no)
                in_data = True
            else:
                raise MalformedHeaderError(f"unknown declaration {line.split()[0]!r}", line=line_no)
            continue

        if not in_data:
            raise MalformedHeaderError(f"unexpected text before @data: {line!r}", line=line_no)

        if line.startswith("{"):
            raise MalformedHeaderError("sparse data rows are not supported", line=line_no)
        data_row += 1
        assert schema is not None
        fields = _split_csv(line, line_no)
        if len(fields) != len(schema):
            raise ArityMismatchError(data_row, len(schema), len(fields))
        row = []
        for attr, (token, quoted) in zip(schema.attributes, fields):
            if token == "?" and not quoted:
                row.append(None)
            elif attr.is_nominal:
                try:
                    row.append(attr.categories.index(token))
                except ValueError:
                    raise UnknownCategoryError(data_row, attr.name, token) from None
            else:
                try:
                    value = float(token)
                except ValueError:
                    raise NonNumericCellError(data_row, attr.name, token) from None
                try:
                    row.append(attr.check_value(value))
                except ValueError:
                    raise NonNumericCellError(data_row, attr.name, token) from None
        rows.append(tuple(row))

    if relation is None:
        raise MalformedHeaderError("missing @relation")
    if not in_data:
        raise MalformedHeaderError("missing @data")
    assert schema is not None
    return Dataset(schema, tuple(rows), name=relation)


def _resolve_schema(attrs: list[AttributeSpec], override: str | None,
                    directive: str | None, line_no: int) -> Schema:
    target_name = override if override is not None else directive
    if target_name is None:
        target_idx = len(attrs) - 1
    else:
        matches = [i for i, a in enumerate(attrs) if a.name == target_name]
        if not matches:
            raise MalformedHeaderError(f"target attribute {target_name!r} not declared", line=line_no)
        target_idx = matches[0]
    chosen = attrs[target_idx]
    if not chosen.is_nominal:
        raise MalformedHeaderError(f"target attribute {chosen.name!r} must be nominal", line=line_no)
    final = [
        AttributeSpec(a.name, a.kind, a.categories, Role.TARGET if i == target_idx else Role.FEATURE)
        for i, a in enumerate(attrs)
    ]
    return Schema(tuple(final))


_SAFE_TOKEN = re.compile(r"[^\s,%'\"{}\\?]+$")


def _quote(token: str) -> str:
    """Quote a name or value if it contains anything that would confuse the parser."""
    if token and _SAFE_TOKEN.match(token) and not token.startswith("@"):
        return token
    body = "".join(_ESCAPE_OUT.get(c, c) for c in token)
    return f"'{body}'"


def format_numeric(value: float) -> str:
    """Render a float compactly: integral values without the trailing .0."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def write_arff(dataset: Dataset, *, comments: tuple[str, ...] = ()) -> str:
    """Serialize a Dataset to ARFF text (deterministic, newline-terminated)."""
    lines = [f"% {c}" if c else "%" for c in comments]
    lines.append(f"@relation {_quote(dataset.name)}")
    if dataset.schema.target_index != len(dataset.schema) - 1:
        lines.append(f"% target: {dataset.schema.target.name}")
    for attr in dataset.schema.attributes:
        if attr.is_nominal:
            cats = ",".join(_quote(c) for c in attr.categories)
            lines.append(f"@attribute {_quote(attr.name)} {{{cats}}}")
        else:
            lines.append(f"@attribute {_quote(attr.name)} numeric")
    lines.append("@data")
    for row in dataset.rows:
        cells = []
        for attr, v in zip(dataset.schema.attributes, row):
            if v is None:
                cells.append("?")
            elif attr.is_nominal:
                cells.append(_quote(attr.categories[int(v)]))
            else:
                cells.append(format_numeric(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
