"""Schema-described CSV ingestion and synthetic registry generation.

A registry is described by a data dictionary (a YAML document listing the
columns, their kinds and, for categorical columns, the allowed labels).
CSV files are parsed against that dictionary; cells that cannot possibly be
interpreted (bad integers, bad dates, wrong arity) are hard errors, while
soft violations (label outside ``allowed_values``, integer out of range)
are collected by :func:`validate` as data.

The synthetic generator plants per-column category counts or probabilities
and is deterministic for a fixed seed (NumPy ``default_rng``, PCG64).
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import yaml

from .errors import DictionaryError, ParseError, SpecError

KINDS = ("categorical", "integer", "date", "identifier")

# Declared per column in the dictionary; dates are stored canonically as ISO.
DATE_FORMATS = {
    "YYYY-MM-DD": "%Y-%m-%d",
    "DD/MM/YYYY": "%d/%m/%Y",
}

MISSING_TOKENS = ("", "na")


def is_missing(cell: str) -> bool:
    return cell.strip().lower() in MISSING_TOKENS


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str
    allowed_values: Optional[tuple[str, ...]] = None
    date_format: str = "YYYY-MM-DD"
    min_value: Optional[int] = None
    max_value: Optional[int] = None


@dataclass(frozen=True)
class DataDictionary:
    columns: tuple[ColumnSpec, ...]

    def __post_init__(self):
        if not self.columns:
            raise DictionaryError("dictionary declares no columns")
        seen = set()
        for pos, col in enumerate(self.columns):
            if not col.name:
                raise DictionaryError(f"column {pos}: empty name")
            if col.name in seen:
                raise DictionaryError(f"column {pos} ({col.name!r}): duplicate name")
            seen.add(col.name)
            if col.kind not in KINDS:
                raise DictionaryError(
                    f"column {pos} ({col.name!r}): unknown kind {col.kind!r}"
                )
            if col.allowed_values is not None:
                if len(col.allowed_values) == 0:
                    raise DictionaryError(
                        f"column {pos} ({col.name!r}): empty allowed_values"
                    )
                if len(set(col.allowed_values)) != len(col.allowed_values):
                    raise DictionaryError(
                        f"column {pos} ({col.name!r}): duplicate allowed value"
                    )
            if col.kind == "date" and col.date_format not in DATE_FORMATS:
                raise DictionaryError(
                    f"column {pos} ({col.name!r}): unsupported date format "
                    f"{col.date_format!r}"
                )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class RawTable:
    dictionary: DataDictionary
    rows: tuple[Mapping[str, str], ...]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_values(self, name: str) -> list[str]:
        if name not in self.dictionary.names:
            raise KeyError(name)
        return [r[name] for r in self.rows]


@dataclass(frozen=True)
class Issue:
    row: int
    column: str
    message: str


def load_dictionary(source: str) -> DataDictionary:
    """Parse a dictionary document (YAML text) into a DataDictionary.

    The document holds a top-level ``columns`` list; each entry carries
    ``name``, ``kind`` and optionally ``allowed_values``, ``date_format``
    and ``min``/``max`` bounds for integer columns.
    """
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise DictionaryError(f"unparseable dictionary document: {exc}") from exc
    if not isinstance(doc, dict) or "columns" not in doc:
        raise DictionaryError("dictionary document must contain a 'columns' list")
    entries = doc["columns"]
    if not isinstance(entries, list) or not entries:
        raise DictionaryError("'columns' must be a non-empty list")
    cols = []
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict) or "name" not in entry or "kind" not in entry:
            raise DictionaryError(f"column {pos}: needs 'name' and 'kind'")
        allowed = entry.get("allowed_values")
        if allowed is not None:
            allowed = tuple(str(v) for v in allowed)
        cols.append(
            ColumnSpec(
                name=str(entry["name"]),
                kind=str(entry["kind"]),
                allowed_values=allowed,
                date_format=str(entry.get("date_format", "YYYY-MM-DD")),
                min_value=entry.get("min"),
                max_value=entry.get("max"),
            )
        )
    return DataDictionary(columns=tuple(cols))


def load_dictionary_file(path) -> DataDictionary:
    with open(path, "r", encoding="utf-8") as fh:
        return load_dictionary(fh.read())


def _canonical_cell(cell: str, col: ColumnSpec, line_no: int) -> str:
    cell = cell.strip()
    if is_missing(cell):
        return ""
    if col.kind == "integer":
        try:
            int(cell)
        except ValueError:
            raise ParseError(
                f"line {line_no}, column {col.name!r}: unparseable integer {cell!r}"
            ) from None
        return cell
    if col.kind == "date":
        fmt = DATE_FORMATS[col.date_format]
        try:
            parsed = _dt.datetime.strptime(cell, fmt)
        except ValueError:
            raise ParseError(
                f"line {line_no}, column {col.name!r}: date {cell!r} does not "
                f"match {col.date_format}"
            ) from None
        return parsed.date().isoformat()
    return cell


def parse_csv_text(text: str, dictionary: DataDictionary) -> RawTable:
    """Parse CSV text (UTF-8, comma, double-quote) against a dictionary."""
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file: header line required") from None
    header = [h.strip() for h in header]
    expected = set(dictionary.names)
    got = set(header)
    missing = sorted(expected - got)
    extra = sorted(got - expected)
    if missing:
        raise ParseError(f"header lacks column(s): {', '.join(missing)}")
    if extra:
        raise ParseError(f"header has unknown column(s): {', '.join(extra)}")
    positions = {name: header.index(name) for name in dictionary.names}

    rows = []
    for line_no, cells in enumerate(reader, start=2):
        if len(cells) != len(header):
            raise ParseError(
                f"line {line_no}: expected {len(header)} cells, got {len(cells)}"
            )
        row = {}
        for col in dictionary.columns:
            row[col.name] = _canonical_cell(cells[positions[col.name]], col, line_no)
        rows.append(row)
    return RawTable(dictionary=dictionary, rows=tuple(rows))


def parse_csv(path, dictionary: DataDictionary) -> RawTable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_csv_text(fh.read(), dictionary)


def serialize_csv(raw: RawTable) -> str:
    """Render a RawTable back to CSV text; parse→serialize→parse round-trips."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(raw.dictionary.names)
    for row in raw.rows:
        writer.writerow([row[name] for name in raw.dictionary.names])
    return buf.getvalue()


def write_csv(raw: RawTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize_csv(raw))


def validate(raw: RawTable) -> list[Issue]:
    """Check every non-missing cell against its column's kind and constraints.

    Issues are data, not failures; the list is sorted by (row, column
    position) and empty iff the table is clean.
    """
    issues = []
    col_pos = {c.name: i for i, c in enumerate(raw.dictionary.columns)}
    for row_idx, row in enumerate(raw.rows):
        for col in raw.dictionary.columns:
            cell = row[col.name]
            if is_missing(cell):
                continue
            if col.kind == "integer":
                try:
                    value = int(cell)
                except ValueError:
                    issues.append(Issue(row_idx, col.name, f"not an integer: {cell!r}"))
                    continue
                if col.min_value is not None and value < col.min_value:
                    issues.append(
                        Issue(row_idx, col.name, f"{value} below minimum {col.min_value}")
                    )
                elif col.max_value is not None and value > col.max_value:
                    issues.append(
                        Issue(row_idx, col.name, f"{value} above maximum {col.max_value}")
                    )
            elif col.kind == "date":
                try:
                    _dt.date.fromisoformat(cell)
                except ValueError:
                    issues.append(Issue(row_idx, col.name, f"not an ISO date: {cell!r}"))
            elif col.allowed_values is not None and cell not in col.allowed_values:
                issues.append(
                    Issue(row_idx, col.name, f"value {cell!r} not in allowed_values")
                )
    issues.sort(key=lambda i: (i.row, col_pos[i.column]))
    return issues


@dataclass(frozen=True)
class SynthSpec:
    """Planted per-column category proportions for synthetic registries.

    ``columns`` maps column name to either probabilities (summing to 1)
    in ``sampled`` mode or integer counts (summing to ``n_rows``) in
    ``exact-counts`` mode.  ``joint`` optionally plants a joint
    distribution over a tuple of columns; remaining columns stay
    independent.
    """

    n_rows: int
    columns: Mapping[str, Mapping[str, float]]
    seed: int = 0
    mode: str = "sampled"  # sampled | exact-counts
    joint: Optional[tuple[tuple[str, ...], Mapping[tuple[str, ...], float]]] = None
    # PRNG algorithm identifier, recorded so counts reproduce across tools.
    algorithm: str = field(default="numpy-pcg64", init=False)

    def __post_init__(self):
        if self.n_rows < 1:
            raise SpecError("n_rows must be positive")
        if self.mode not in ("sampled", "exact-counts"):
            raise SpecError(f"unknown planting mode {self.mode!r}")
        if not self.columns:
            raise SpecError("at least one column required")
        for name, dist in self.columns.items():
            if not dist:
                raise SpecError(f"column {name!r}: empty distribution")
            total = sum(dist.values())
            if self.mode == "exact-counts":
                if any(v != int(v) or v < 0 for v in dist.values()):
                    raise SpecError(f"column {name!r}: counts must be non-negative integers")
                if int(total) != self.n_rows:
                    raise SpecError(
                        f"column {name!r}: counts sum to {int(total)}, expected {self.n_rows}"
                    )
            else:
                if abs(total - 1.0) > 1e-9:
                    raise SpecError(
                        f"column {name!r}: probabilities sum to {total}, expected 1"
                    )


def _planted_column(rng: np.random.Generator, dist: Mapping[str, float],
                    n: int, exact: bool) -> list[str]:
    labels = list(dist.keys())
    if exact:
        values = []
        for lab in labels:
            values.extend([lab] * int(dist[lab]))
        values = np.array(values, dtype=object)
        rng.shuffle(values)
        return list(values)
    probs = np.array([dist[lab] for lab in labels], dtype=float)
    probs = probs / probs.sum()
    idx = rng.choice(len(labels), size=n, p=probs)
    return [labels[i] for i in idx]


def generate_synthetic(spec: SynthSpec) -> RawTable:
    """Generate a registry-shaped RawTable; deterministic for a fixed seed.

    In exact-counts mode the realized per-column counts equal the planted
    counts exactly (values are laid out then shuffled).
    """
    rng = np.random.default_rng(spec.seed)
    exact = spec.mode == "exact-counts"
    joint_cols: tuple[str, ...] = ()
    data: dict[str, list[str]] = {}

    if spec.joint is not None:
        joint_cols, joint_dist = spec.joint
        cells = list(joint_dist.keys())
        flat = {"\x1f".join(c): joint_dist[c] for c in cells}
        combined = _planted_column(rng, flat, spec.n_rows, exact)
        for pos, name in enumerate(joint_cols):
            data[name] = [v.split("\x1f")[pos] for v in combined]

    for name, dist in spec.columns.items():
        if name in joint_cols:
            continue
        data[name] = _planted_column(rng, dist, spec.n_rows, exact)

    names = list(spec.columns.keys())
    columns = tuple(
        ColumnSpec(name=name, kind="categorical",
                   allowed_values=tuple(spec.columns[name].keys()))
        for name in names
    )
    dictionary = DataDictionary(columns=columns)
    rows = tuple(
        {name: data[name][i] for name in names} for i in range(spec.n_rows)
    )
    return RawTable(dictionary=dictionary, rows=rows)
