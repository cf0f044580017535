"""Loading delimited datasets and turning them into decision tables."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Mapping, Optional, Sequence, Union

import numpy as np

from .core import DecisionTable, dense_codes

__all__ = [
    "DataError",
    "MissingValueError",
    "RawDataset",
    "DiscretizationSpec",
    "load_delimited",
    "apply_missing_policy",
    "discretize_and_encode",
    "equal_width_codes",
    "equal_frequency_codes",
    "dump_encoded",
    "load_table",
]

log = logging.getLogger(__name__)

Strategy = Literal["equal_width", "equal_frequency", "none"]
PathLike = Union[str, Path]

# integer columns with at most this many distinct values count as categorical
CATEGORICAL_INT_LIMIT = 10


class DataError(ValueError):
    """Malformed input data."""


class MissingValueError(DataError):
    def __init__(self, rows: Sequence[int]):
        self.rows = list(rows)
        shown = ", ".join(str(r) for r in self.rows[:20])
        more = "" if len(self.rows) <= 20 else f" (+{len(self.rows) - 20} more)"
        super().__init__(f"missing values in rows {shown}{more}")


@dataclass
class RawDataset:
    """Verbatim string cells; ``None`` marks a missing cell."""

    column_names: list[str]
    cells: list[list[Optional[str]]]
    decision_column: int = -1
    dropped_rows: int = 0

    def __post_init__(self) -> None:
        width = len(self.column_names)
        for i, row in enumerate(self.cells):
            if len(row) != width:
                raise DataError(f"row {i} has {len(row)} cells, expected {width}")
        if width and not -width <= self.decision_column < width:
            raise DataError(f"decision column {self.decision_column} out of range")
        self.decision_column %= max(width, 1)

    @property
    def num_rows(self) -> int:
        return len(self.cells)

    def missing_rows(self) -> list[int]:
        return [i for i, row in enumerate(self.cells) if any(c is None for c in row)]


@dataclass(frozen=True)
class DiscretizationSpec:
    """How numeric condition columns are binned.

    ``overrides`` maps a column name to a ``(strategy, bins)`` pair.
    Integer columns with few distinct values are treated as categorical
    unless overridden.
    """

    strategy: Strategy = "equal_frequency"
    bins: int = 3
    overrides: Mapping[str, tuple[Strategy, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for strategy, bins in [(self.strategy, self.bins), *self.overrides.values()]:
            if strategy not in ("equal_width", "equal_frequency", "none"):
                raise ValueError(f"unknown discretization strategy {strategy!r}")
            if strategy != "none" and bins < 2:
                raise ValueError("at least 2 bins are needed")

    def for_column(self, name: str) -> tuple[Strategy, int]:
        return self.overrides.get(name, (self.strategy, self.bins))


def load_delimited(path: PathLike, delimiter: str = ",", has_header: bool = True,
                   missing_marker: str = "?", decision_column: int = -1,
                   drop_columns: Sequence[int] = ()) -> RawDataset:
    """Read a delimited text file; blank lines are skipped, cells are stripped.

    ``decision_column`` and ``drop_columns`` index the file's columns; dropped
    columns (record identifiers, say) never reach the table.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(n, [c.strip() for c in r]) for n, r in
                enumerate(csv.reader(fh, delimiter=delimiter), start=1)
                if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path} is empty")
    width = len(rows[0][1])
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} cells, found {len(row)}")
    if has_header:
        names = rows[0][1]
        rows = rows[1:]
    else:
        names = [f"col{j}" for j in range(width)]
    if not rows:
        raise DataError(f"{path} has a header but no data rows")
    if not -width <= decision_column < width:
        raise DataError(f"decision column {decision_column} out of range")
    dcol = decision_column % width
    drop = set()
    for j in drop_columns:
        if not -width <= j < width or j % width == dcol:
            raise DataError(f"cannot drop column {j}")
        drop.add(j % width)
    keep = [j for j in range(width) if j not in drop]
    cells = [[None if row[j] == missing_marker else row[j] for j in keep] for _, row in rows]
    return RawDataset([names[j] for j in keep], cells, keep.index(dcol))


def apply_missing_policy(raw: RawDataset,
                         policy: Literal["drop_rows", "reject"] = "drop_rows") -> RawDataset:
    """Drop incomplete rows or refuse them; the drop count lands in ``dropped_rows``."""
    bad = raw.missing_rows()
    if policy == "reject":
        if bad:
            raise MissingValueError(bad)
        return raw
    if policy != "drop_rows":
        raise ValueError(f"unknown missing-value policy {policy!r}")
    skip = set(bad)
    kept = [list(row) for i, row in enumerate(raw.cells) if i not in skip]
    if bad:
        log.info("dropped %d rows with missing values", len(bad))
    return RawDataset(list(raw.column_names), kept, raw.decision_column,
                      raw.dropped_rows + len(bad))


def _as_floats(values: Sequence[str]) -> Optional[np.ndarray]:
    try:
        return np.array([float(v) for v in values])
    except (TypeError, ValueError):
        return None


def equal_width_codes(x: np.ndarray, bins: int) -> np.ndarray:
    """Bin index over ``bins`` equal slices of ``[min, max]``; the last slice is closed."""
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        return np.zeros(x.shape[0], dtype=np.int64)
    edges = lo + (hi - lo) * np.arange(1, bins) / bins
    return np.searchsorted(edges, x, side="right").astype(np.int64)


def equal_frequency_codes(x: np.ndarray, bins: int) -> np.ndarray:
    """Bin index by the ``bins``-quantile cut points; tied cut points merge."""
    cuts = np.unique(np.quantile(x, np.arange(1, bins) / bins))
    cuts = cuts[(cuts >= x.min()) & (cuts < x.max())]
    return np.searchsorted(cuts, x, side="left").astype(np.int64)


def discretize_and_encode(raw: RawDataset,
                          spec: DiscretizationSpec = DiscretizationSpec()) -> DecisionTable:
    """Bin numeric condition columns, code everything densely.

    A column is numeric when every cell parses as a float.  Integer-valued
    columns with at most ``CATEGORICAL_INT_LIMIT`` distinct values are
    left unbinned unless the spec overrides them by name.  The decision
    column is always coded by first appearance and never binned.
    """
    if raw.missing_rows():
        raise MissingValueError(raw.missing_rows())
    if raw.num_rows == 0:
        raise DataError("no rows left to encode")
    dcol = raw.decision_column
    cond_cols = [j for j in range(len(raw.column_names)) if j != dcol]
    conditions = np.zeros((raw.num_rows, len(cond_cols)), dtype=np.int64)
    for out_j, j in enumerate(cond_cols):
        name = raw.column_names[j]
        column = [row[j] for row in raw.cells]
        strategy, bins = spec.for_column(name)
        x = _as_floats(column)
        if x is not None and name not in spec.overrides:
            distinct = np.unique(x)
            if np.all(distinct == np.round(distinct)) and distinct.size <= CATEGORICAL_INT_LIMIT:
                strategy = "none"
        if x is None or strategy == "none":
            if x is not None:
                # numeric but unbinned: code in ascending value order
                conditions[:, out_j] = np.unique(x, return_inverse=True)[1].reshape(-1)
            else:
                conditions[:, out_j] = dense_codes(column)
            continue
        if np.unique(x).size == 1:
            log.warning("column %s is constant; using a single code", name)
            continue
        codes = (equal_width_codes(x, bins) if strategy == "equal_width"
                 else equal_frequency_codes(x, bins))
        conditions[:, out_j] = np.unique(codes, return_inverse=True)[1].reshape(-1)
    decisions = np.array(dense_codes(row[dcol] for row in raw.cells), dtype=np.int64)
    return DecisionTable(conditions, decisions,
                         tuple(raw.column_names[j] for j in cond_cols),
                         raw.column_names[dcol])


def load_table(path: PathLike, spec: DiscretizationSpec = DiscretizationSpec(),
               missing_policy: Literal["drop_rows", "reject"] = "drop_rows",
               **load_kwargs) -> DecisionTable:
    """``load_delimited`` -> ``apply_missing_policy`` -> ``discretize_and_encode``."""
    raw = load_delimited(path, **load_kwargs)
    return discretize_and_encode(apply_missing_policy(raw, missing_policy), spec)


def dump_encoded(table: DecisionTable, delimiter: str = ",") -> str:
    """Integer-coded table as delimited text with a header row."""
    lines = [delimiter.join([*table.attr_names, table.decision_name])]
    for row, d in zip(table.conditions.tolist(), table.decisions.tolist()):
        lines.append(delimiter.join(str(v) for v in [*row, d]))
    return "\n".join(lines) + "\n"
