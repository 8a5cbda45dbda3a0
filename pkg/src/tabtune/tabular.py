"""Column-typed tabular data: CSV ingestion, row filtering, train/test
splitting, and a synthetic student-records generator for desk-scale runs.

Storage conventions: numeric cells are float64 (NaN where missing),
categorical cells are indices into the column's sorted level list (-1 where
missing). The per-column boolean masks in ``Table.missing`` are authoritative;
the sentinel values are never fed to any statistic.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TARGET = "target"

#: Field contents treated as a missing cell on load.
MISSING_MARKERS = ("", "NA")

_DECIMAL_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")


class CsvParseError(ValueError):
    """Malformed CSV content (ragged rows, missing header)."""


class SchemaError(ValueError):
    """Table content violates the schema contract."""


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str
    categories: tuple[str, ...] = ()


@dataclass(frozen=True)
class Table:
    schema: tuple[ColumnSchema, ...]
    columns: dict[str, np.ndarray]
    missing: dict[str, np.ndarray]
    n_rows: int

    def column_schema(self, name: str) -> ColumnSchema:
        for col in self.schema:
            if col.name == name:
                return col
        raise SchemaError(f"unknown column {name!r}")

    @property
    def target(self) -> ColumnSchema:
        return next(col for col in self.schema if col.kind == TARGET)

    def feature_schemas(self) -> tuple[ColumnSchema, ...]:
        return tuple(col for col in self.schema if col.kind != TARGET)

    def take(self, indices) -> "Table":
        """Row subset in the given order; schema is shared unchanged."""
        indices = np.asarray(indices)
        columns = {name: col[indices] for name, col in self.columns.items()}
        missing = {name: mask[indices] for name, mask in self.missing.items()}
        return make_table(self.schema, columns, missing)

    def row_values(self, row: int) -> tuple:
        """One row as (value or None) per column, categoricals as level strings."""
        out = []
        for col in self.schema:
            if self.missing[col.name][row]:
                out.append(None)
            elif col.kind == NUMERIC:
                out.append(float(self.columns[col.name][row]))
            else:
                out.append(col.categories[int(self.columns[col.name][row])])
        return tuple(out)


def make_table(schema, columns, missing) -> Table:
    """Validate invariants, freeze the arrays, and assemble a Table."""
    schema = tuple(schema)
    targets = [col for col in schema if col.kind == TARGET]
    if len(targets) != 1:
        raise SchemaError(f"expected exactly one target column, found {len(targets)}")
    if len(targets[0].categories) != 2:
        raise SchemaError(
            f"target column {targets[0].name!r} must have exactly 2 categories, "
            f"found {len(targets[0].categories)}"
        )
    n_rows = None
    cols = {}
    masks = {}
    for col in schema:
        if col.kind not in (NUMERIC, CATEGORICAL, TARGET):
            raise SchemaError(f"column {col.name!r}: unknown kind {col.kind!r}")
        if col.kind != NUMERIC:
            if list(col.categories) != sorted(set(col.categories)):
                raise SchemaError(f"column {col.name!r}: categories must be sorted and distinct")
        values = np.asarray(columns[col.name], dtype=float if col.kind == NUMERIC else np.int64)
        mask = np.asarray(missing[col.name], dtype=bool)
        if n_rows is None:
            n_rows = len(values)
        if len(values) != n_rows or len(mask) != n_rows:
            raise SchemaError(f"column {col.name!r}: length mismatch")
        if col.kind != NUMERIC and n_rows:
            present = values[~mask]
            if present.size and (present.min() < 0 or present.max() >= len(col.categories)):
                raise SchemaError(f"column {col.name!r}: level index out of range")
        values.setflags(write=False)
        mask.setflags(write=False)
        cols[col.name] = values
        masks[col.name] = mask
    return Table(schema=schema, columns=cols, missing=masks, n_rows=n_rows or 0)


@dataclass(frozen=True)
class SplitPair:
    train: Table
    test: Table
    seed: int
    train_fraction: float


def _is_decimal(text: str) -> bool:
    return bool(_DECIMAL_RE.fullmatch(text.strip()))


def load_csv(path, target_column: str) -> Table:
    """Load an RFC-4180-style CSV with a header row into a typed Table.

    A column is numeric iff every non-missing cell parses as a decimal
    number; anything else is categorical. Empty fields and the literal
    "NA" are missing. The target column must carry exactly two distinct
    values and no missing cells.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: empty file, header row required") from None
        raw_rows = []
        for row_number, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise CsvParseError(
                    f"{path}: row {row_number} has {len(row)} fields, expected {len(header)}"
                )
            raw_rows.append(row)
    if len(set(header)) != len(header):
        raise SchemaError(f"{path}: duplicate column names in header")
    if target_column not in header:
        raise SchemaError(f"{path}: target column {target_column!r} not in header")

    schema = []
    columns = {}
    missing = {}
    for j, name in enumerate(header):
        raw = [row[j] for row in raw_rows]
        mask = np.array([cell in MISSING_MARKERS for cell in raw], dtype=bool)
        present = [cell for cell, m in zip(raw, mask) if not m]
        if name == target_column:
            levels = sorted(set(present))
            if mask.any():
                raise SchemaError(f"{path}: target column {name!r} has missing values")
            if len(levels) != 2:
                raise SchemaError(
                    f"{path}: target column {name!r} has {len(levels)} distinct values, expected 2"
                )
            index = {level: i for i, level in enumerate(levels)}
            values = np.array([index[cell] for cell in raw], dtype=np.int64)
            schema.append(ColumnSchema(name, TARGET, tuple(levels)))
        elif all(_is_decimal(cell) for cell in present):
            values = np.array(
                [float(cell) if not m else math.nan for cell, m in zip(raw, mask)]
            )
            schema.append(ColumnSchema(name, NUMERIC))
        else:
            levels = sorted(set(present))
            index = {level: i for i, level in enumerate(levels)}
            values = np.array(
                [index[cell] if not m else -1 for cell, m in zip(raw, mask)], dtype=np.int64
            )
            schema.append(ColumnSchema(name, CATEGORICAL, tuple(levels)))
        columns[name] = values
        missing[name] = mask
    return make_table(schema, columns, missing)


def write_csv(table: Table, path) -> None:
    """Serialize back to CSV; missing cells become empty fields."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([col.name for col in table.schema])
        for i in range(table.n_rows):
            row = []
            for col in table.schema:
                if table.missing[col.name][i]:
                    row.append("")
                elif col.kind == NUMERIC:
                    row.append(repr(float(table.columns[col.name][i])))
                else:
                    row.append(col.categories[int(table.columns[col.name][i])])
            writer.writerow(row)


def filter_rows(table: Table, column: str, allowed) -> Table:
    """Keep rows whose categorical value is in ``allowed``, order preserved.

    Missing cells never match. Schema is unchanged.
    """
    col = table.column_schema(column)
    if col.kind == NUMERIC:
        raise SchemaError(f"column {column!r} is numeric, filtering needs a categorical column")
    allowed = set(allowed)
    keep_levels = [i for i, level in enumerate(col.categories) if level in allowed]
    keep = ~table.missing[column] & np.isin(table.columns[column], keep_levels)
    return table.take(np.nonzero(keep)[0])


def split_train_test(table: Table, train_fraction: float, seed: int) -> SplitPair:
    """Deterministic seeded shuffle split; train size rounds half up."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if table.n_rows < 2:
        raise ValueError(f"need at least 2 rows to split, got {table.n_rows}")
    perm = np.random.default_rng(seed).permutation(table.n_rows)
    n_train = int(math.floor(train_fraction * table.n_rows + 0.5))
    return SplitPair(
        train=table.take(perm[:n_train]),
        test=table.take(perm[n_train:]),
        seed=seed,
        train_fraction=train_fraction,
    )


# Synthetic student records. The generative rule is fixed and documented in
# generate_synthetic; it imitates the shape of an institutional student file
# (demographics, major, enrollment load, graduation flag), not any real data.

_SEX_LEVELS = ("F", "M")
_SEX_P = (0.5, 0.5)
_RACE_LEVELS = ("asian", "black", "hispanic", "other", "white")
_RACE_P = (0.12, 0.14, 0.20, 0.09, 0.45)
_MAJOR_LEVELS = ("CE", "CS", "IT", "SE")
_MAJOR_P = (0.20, 0.45, 0.15, 0.20)
_MAJOR_BOOST = {"CE": 0.10, "CS": 0.20, "IT": -0.10, "SE": 0.0}
_TARGET_LEVELS = ("no", "yes")
_MISSING_RATE = 0.02


def synthetic_schema() -> tuple[ColumnSchema, ...]:
    return (
        ColumnSchema("entry_gpa", NUMERIC),
        ColumnSchema("credits_attempted", NUMERIC),
        ColumnSchema("age", NUMERIC),
        ColumnSchema("sex", CATEGORICAL, _SEX_LEVELS),
        ColumnSchema("race_ethnicity", CATEGORICAL, _RACE_LEVELS),
        ColumnSchema("first_major", CATEGORICAL, _MAJOR_LEVELS),
        ColumnSchema("graduated", TARGET, _TARGET_LEVELS),
    )


def generate_synthetic(n_rows: int, seed: int, positive_rate: float = 0.5) -> Table:
    """Generate a student-record-shaped table with a learnable label.

    Generative rule (fixed): draw demographics and enrollment features, form
    the latent score

        1.5*(entry_gpa - 3.0) + 0.05*(credits_attempted - 30)
        - 0.12*(age - 18.6) + major_boost + N(0, 0.9)

    and mark ``graduated = yes`` for the rows whose score reaches the
    empirical (1 - positive_rate) quantile, so the observed label frequency
    tracks ``positive_rate``. Afterwards roughly 2% of feature cells are
    masked missing. Deterministic per (n_rows, seed, positive_rate).
    """
    if n_rows < 0:
        raise ValueError("n_rows must be non-negative")
    if not 0.0 < positive_rate < 1.0:
        raise ValueError(f"positive_rate must lie in (0, 1), got {positive_rate}")
    schema = synthetic_schema()
    if n_rows == 0:
        empty_num = np.zeros(0)
        empty_cat = np.zeros(0, dtype=np.int64)
        empty_mask = np.zeros(0, dtype=bool)
        columns = {
            col.name: (empty_num if col.kind == NUMERIC else empty_cat) for col in schema
        }
        return make_table(schema, columns, {col.name: empty_mask for col in schema})

    rng = np.random.default_rng(seed)
    gpa = np.clip(rng.normal(3.0, 0.45, n_rows), 1.5, 4.0)
    credits = np.clip(rng.normal(30.0, 7.0, n_rows), 6.0, 48.0)
    age = np.clip(rng.normal(18.6, 1.8, n_rows), 16.0, 35.0)
    sex = rng.choice(len(_SEX_LEVELS), n_rows, p=_SEX_P).astype(np.int64)
    race = rng.choice(len(_RACE_LEVELS), n_rows, p=_RACE_P).astype(np.int64)
    major = rng.choice(len(_MAJOR_LEVELS), n_rows, p=_MAJOR_P).astype(np.int64)

    boost = np.array([_MAJOR_BOOST[level] for level in _MAJOR_LEVELS])[major]
    score = (
        1.5 * (gpa - 3.0)
        + 0.05 * (credits - 30.0)
        - 0.12 * (age - 18.6)
        + boost
        + rng.normal(0.0, 0.9, n_rows)
    )
    threshold = np.quantile(score, 1.0 - positive_rate)
    graduated = (score >= threshold).astype(np.int64)

    feature_names = [col.name for col in schema if col.kind != TARGET]
    miss = rng.random((n_rows, len(feature_names))) < _MISSING_RATE

    columns = {
        "entry_gpa": gpa,
        "credits_attempted": credits,
        "age": age,
        "sex": sex,
        "race_ethnicity": race,
        "first_major": major,
        "graduated": graduated,
    }
    missing = {name: miss[:, j].copy() for j, name in enumerate(feature_names)}
    missing["graduated"] = np.zeros(n_rows, dtype=bool)
    for name in feature_names:
        mask = missing[name]
        if columns[name].dtype == np.int64:
            values = columns[name].copy()
            values[mask] = -1
            columns[name] = values
        else:
            values = columns[name].copy()
            values[mask] = math.nan
            columns[name] = values
    return make_table(schema, columns, missing)
