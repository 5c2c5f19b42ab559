"""Tabular data ingestion and per-column metadata inference.

Loads CSV/TSV/JSON-records tables, infers a data type for every column
(quantitative, nominal, ordinal, temporal), and computes the value domain
the attribute matcher and the chart generator consume.  A loaded
:class:`Dataset` is immutable by convention: nothing in the engine writes
to it after construction, so it is safe to share across analyses.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from .errors import EmptyTable, MalformedTable, UnreadableSource

DATA_TYPES = ("quantitative", "nominal", "ordinal", "temporal")

# Fraction of non-null cells that must parse for a column to be promoted
# from nominal to quantitative/temporal.  Tolerates stray sentinel strings.
PARSE_THRESHOLD = 0.95

# Temporal detection pattern list.  Bare 4-digit years additionally require
# a temporal hint in the column name, otherwise they stay quantitative.
ISO_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2})?)?$")
US_DATE_RE = re.compile(r"^\d{1,2}/\d{1,2}/\d{4}$")
YEAR_RE = re.compile(r"^[12]\d{3}$")
TEMPORAL_NAME_HINTS = ("year", "date", "time", "month", "day")


@dataclass
class AttributeMetadata:
    """Metadata for one column: its type, value domain, and alternate names."""

    name: str
    data_type: str
    domain: list
    aliases: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dataType": self.data_type,
            "domain": list(self.domain),
            "aliases": list(self.aliases),
        }


@dataclass
class Dataset:
    """An ingested table plus per-attribute metadata."""

    id: str
    rows: list[dict]
    attributes: list[AttributeMetadata]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def attribute(self, name: str) -> AttributeMetadata | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None

    def attribute_names(self) -> list[str]:
        return [a.name for a in self.attributes]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "rowCount": self.row_count,
            "attributes": [a.to_dict() for a in self.attributes],
            "rows": self.rows,
        }

    def export(self, format: str = "csv") -> str:
        """Serialize back to text in the given format (csv, tsv, json-records)."""
        names = self.attribute_names()
        if format == "json-records":
            return json.dumps(self.rows, ensure_ascii=False)
        if format not in ("csv", "tsv"):
            raise ValueError(f"unsupported export format: {format}")
        out = io.StringIO()
        writer = csv.writer(out, delimiter="\t" if format == "tsv" else ",", lineterminator="\n")
        writer.writerow(names)
        for row in self.rows:
            writer.writerow(["" if row[n] is None else row[n] for n in names])
        return out.getvalue()


def _is_number(text: str) -> bool:
    try:
        float(text)
    except (TypeError, ValueError):
        return False
    return True


def _matches_temporal(text: str, name_hinted: bool) -> bool:
    if ISO_DATE_RE.match(text) or US_DATE_RE.match(text):
        return True
    return bool(name_hinted and YEAR_RE.match(text))


def infer_attribute_type(column_values: list, column_name: str = "") -> str:
    """Classify a column as quantitative, temporal, or nominal.

    Quantitative requires >=95% of non-null values to parse as numbers;
    temporal requires >=95% to match the documented date/year patterns
    (bare years count only when the column name carries a temporal hint).
    Everything else is nominal.  Ordinal is never inferred; it comes from
    an explicit configuration override.
    """
    non_null = [str(v) for v in column_values if v is not None and str(v).strip() != ""]
    if not non_null:
        return "nominal"
    hinted = any(h in column_name.lower() for h in TEMPORAL_NAME_HINTS)
    temporal_hits = sum(1 for v in non_null if _matches_temporal(v.strip(), hinted))
    if temporal_hits / len(non_null) >= PARSE_THRESHOLD:
        return "temporal"
    numeric_hits = sum(1 for v in non_null if _is_number(v.strip()))
    if numeric_hits / len(non_null) >= PARSE_THRESHOLD:
        return "quantitative"
    return "nominal"


def _coerce_number(text: str):
    value = float(text)
    return int(value) if value.is_integer() else value


def _temporal_sort_key(value: str):
    text = str(value).strip()
    if YEAR_RE.match(text):
        return (0, int(text), "")
    if US_DATE_RE.match(text):
        month, day, year = text.split("/")
        return (0, int(year) * 10000 + int(month) * 100 + int(day), "")
    return (1, 0, text)


def _build_attribute(name: str, raw_values: list, config: dict) -> tuple[AttributeMetadata, list]:
    """Infer metadata for one column and return it with the coerced cells."""
    aliases = list((config.get("aliases") or {}).get(name, []))
    ordinal_order = (config.get("ordinal") or {}).get(name)

    cleaned = [None if v is None or str(v).strip() == "" else str(v).strip() for v in raw_values]
    data_type = infer_attribute_type(cleaned, name)
    if ordinal_order is not None:
        data_type = "ordinal"

    if data_type == "quantitative":
        cells: list = [None if v is None else _coerce_number(v) for v in cleaned]
        present = [c for c in cells if c is not None]
        domain = [min(present), max(present)] if present else []
    elif data_type == "temporal":
        cells = cleaned
        present = [c for c in cells if c is not None]
        domain = [min(present, key=_temporal_sort_key), max(present, key=_temporal_sort_key)] if present else []
    else:
        cells = cleaned
        seen: dict[str, None] = {}
        for c in cells:
            if c is not None and c not in seen:
                seen[c] = None
        domain = list(seen)
        if ordinal_order is not None:
            # configured order wins; unseen extras keep appearance order
            domain = [v for v in ordinal_order] + [v for v in domain if v not in ordinal_order]

    return AttributeMetadata(name=name, data_type=data_type, domain=domain, aliases=aliases), cells


def _read_source(source) -> str:
    if hasattr(source, "read"):
        return source.read()
    text = str(source)
    if "\n" in text or text.lstrip()[:1] in ("[", "{"):
        return text
    if os.path.exists(text):
        try:
            with open(text, "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise UnreadableSource(f"cannot read {text}: {exc}") from exc
    # A short newline-free string that is not a path on disk is ambiguous;
    # treat it as a missing file rather than a one-cell table.
    raise UnreadableSource(f"source not found: {text}")


def _parse_delimited(text: str, delimiter: str) -> tuple[list[str], list[list]]:
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [row for row in reader if row]
    if not rows:
        raise EmptyTable("no rows in source")
    header, data = rows[0], rows[1:]
    if not header or all(h.strip() == "" for h in header):
        raise EmptyTable("no columns in source")
    if len(set(header)) != len(header):
        raise MalformedTable("duplicate column headers")
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise MalformedTable(f"row {i + 1} has {len(row)} cells, expected {len(header)}")
    if not data:
        raise EmptyTable("no data rows in source")
    return [h.strip() for h in header], data


def _parse_json_records(text: str) -> tuple[list[str], list[list]]:
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTable(f"invalid JSON: {exc}") from exc
    if not isinstance(records, list) or not records:
        raise EmptyTable("expected a non-empty JSON array of records")
    header: list[str] = []
    for rec in records:
        if not isinstance(rec, dict):
            raise MalformedTable("every JSON record must be an object")
        for key in rec:
            if key not in header:
                header.append(key)
    if not header:
        raise EmptyTable("records carry no fields")
    data = [[None if rec.get(k) is None else str(rec.get(k)) for k in header] for rec in records]
    return header, data


def load_dataset(source, format: str = "csv", *, config: dict | None = None,
                 dataset_id: str | None = None) -> Dataset:
    """Load a table from a file path, file object, or in-memory text.

    ``config`` may supply developer metadata per attribute:
    ``{"aliases": {attr: [names]}, "ordinal": {attr: [ordered values]}}``.
    """
    config = config or {}
    text = _read_source(source)
    if format == "csv":
        header, data = _parse_delimited(text, ",")
    elif format == "tsv":
        header, data = _parse_delimited(text, "\t")
    elif format == "json-records":
        header, data = _parse_json_records(text)
    else:
        raise ValueError(f"unsupported format: {format}")

    attributes: list[AttributeMetadata] = []
    columns: list[list] = []
    for idx, name in enumerate(header):
        meta, cells = _build_attribute(name, [row[idx] for row in data], config)
        attributes.append(meta)
        columns.append(cells)

    rows = [{name: columns[i][r] for i, name in enumerate(header)} for r in range(len(data))]
    if dataset_id is None:
        base = getattr(source, "name", None) or (str(source) if os.path.exists(str(source)) else "inline")
        dataset_id = os.path.splitext(os.path.basename(str(base)))[0]
    return Dataset(id=dataset_id, rows=rows, attributes=attributes)


def value_vocabulary(dataset: Dataset) -> dict[str, list[str]]:
    """Distinct values per nominal/ordinal attribute, first-appearance order."""
    vocab: dict[str, list[str]] = {}
    for attr in dataset.attributes:
        if attr.data_type not in ("nominal", "ordinal"):
            continue
        seen: dict[str, None] = {}
        for row in dataset.rows:
            value = row[attr.name]
            if value is not None and value not in seen:
                seen[value] = None
        vocab[attr.name] = list(seen)
    return vocab


SAMPLE_NAMES = ("houses", "olympics", "movies", "players")


def load_sample(name: str, *, config: dict | None = None) -> Dataset:
    """Load one of the bundled demo tables by name."""
    if name not in SAMPLE_NAMES:
        raise UnreadableSource(f"unknown sample dataset: {name}")
    text = resources.files("convoviz").joinpath(f"data/samples/{name}.csv").read_text(encoding="utf-8")
    return load_dataset(text, "csv", config=config, dataset_id=name)
