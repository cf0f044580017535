"""Crisp rough-set primitives over integer-coded decision tables.

Attribute subsets are plain ``frozenset``s of 0-based column indices and
object sets are ``frozenset``s of row indices.  Everything here is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import numpy as np

__all__ = [
    "DecisionTable",
    "InvalidSubsetError",
    "TableError",
    "SubsetEvaluator",
    "block_labels",
    "partition",
    "decision_partition",
    "lower_approx",
    "upper_approx",
    "regions",
    "positive_region_size",
    "dependency",
    "dependency_fraction",
    "entropy",
    "mask_of",
    "subset_of",
]

# keys stay below this bound before being re-densified
_KEY_LIMIT = 1 << 62


class TableError(ValueError):
    """Raised when a decision table violates its structural invariants."""


class InvalidSubsetError(IndexError):
    """Raised when an attribute or object index falls outside the table."""


@dataclass(frozen=True, eq=False)
class DecisionTable:
    """Objects x condition attributes plus one decision column.

    ``conditions`` is an ``(n_objects, n_attrs)`` integer array whose columns
    are densely coded in ``[0, cardinality)``; ``decisions`` is densely coded
    the same way.  Use :meth:`encode` to build a table from arbitrary values.
    """

    conditions: np.ndarray
    decisions: np.ndarray
    attr_names: tuple[str, ...] = ()
    decision_name: str = "d"
    cardinalities: tuple[int, ...] = field(init=False)
    num_classes: int = field(init=False)

    def __post_init__(self) -> None:
        cond = np.asarray(self.conditions)
        dec = np.asarray(self.decisions)
        if cond.ndim != 2:
            raise TableError("condition matrix must be two-dimensional")
        if dec.ndim != 1 or dec.shape[0] != cond.shape[0]:
            raise TableError(
                f"decision column has {dec.shape[0] if dec.ndim == 1 else dec.shape} "
                f"entries for {cond.shape[0]} objects"
            )
        if cond.shape[0] == 0:
            raise TableError("decision table has no objects")
        if not (np.issubdtype(cond.dtype, np.integer) or cond.size == 0):
            raise TableError("condition codes must be integers")
        if not np.issubdtype(dec.dtype, np.integer):
            raise TableError("decision codes must be integers")
        cond = cond.astype(np.int64, copy=True)
        dec = dec.astype(np.int64, copy=True)
        cards = []
        for j in range(cond.shape[1]):
            cards.append(_check_dense(cond[:, j], f"column {j}"))
        n_classes = _check_dense(dec, "decision column")
        names = tuple(self.attr_names) or tuple(f"a{j}" for j in range(cond.shape[1]))
        if len(names) != cond.shape[1]:
            raise TableError(f"{len(names)} attribute names for {cond.shape[1]} columns")
        cond.setflags(write=False)
        dec.setflags(write=False)
        object.__setattr__(self, "conditions", cond)
        object.__setattr__(self, "decisions", dec)
        object.__setattr__(self, "attr_names", names)
        object.__setattr__(self, "cardinalities", tuple(cards))
        object.__setattr__(self, "num_classes", n_classes)

    @classmethod
    def encode(
        cls,
        rows: Sequence[Sequence[Hashable]],
        decisions: Sequence[Hashable],
        attr_names: Sequence[str] = (),
        decision_name: str = "d",
    ) -> "DecisionTable":
        """Build a table from arbitrary hashable cell values.

        Each column is coded by order of first appearance.
        """
        n = len(decisions)
        if len(rows) != n:
            raise TableError(f"{len(rows)} rows but {n} decision values")
        width = len(rows[0]) if n else 0
        for i, row in enumerate(rows):
            if len(row) != width:
                raise TableError(f"row {i} has {len(row)} cells, expected {width}")
        cond = np.zeros((n, width), dtype=np.int64)
        for j in range(width):
            cond[:, j] = dense_codes([row[j] for row in rows])
        return cls(cond, np.asarray(dense_codes(decisions), dtype=np.int64),
                   tuple(attr_names), decision_name)

    @property
    def num_objects(self) -> int:
        return int(self.conditions.shape[0])

    @property
    def num_condition_attrs(self) -> int:
        return int(self.conditions.shape[1])

    @property
    def all_attrs(self) -> frozenset[int]:
        return frozenset(range(self.num_condition_attrs))

    def __repr__(self) -> str:
        return (f"DecisionTable(objects={self.num_objects}, "
                f"attrs={self.num_condition_attrs}, classes={self.num_classes})")


def dense_codes(values: Iterable[Hashable]) -> list[int]:
    """Code values by order of first appearance."""
    seen: dict[Hashable, int] = {}
    return [seen.setdefault(v, len(seen)) for v in values]


def _check_dense(col: np.ndarray, what: str) -> int:
    if col.size == 0:
        return 0
    if col.min() < 0:
        raise TableError(f"{what} has negative codes")
    present = np.unique(col)
    if present[-1] != present.size - 1:
        raise TableError(f"{what} codes are not dense in [0, {present.size})")
    return int(present.size)


def _validate_attrs(table: DecisionTable, attrs: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(int(a) for a in attrs)))
    n = table.num_condition_attrs
    for a in out:
        if a < 0 or a >= n:
            raise InvalidSubsetError(f"attribute index {a} outside [0, {n})")
    return out


def _validate_objects(table: DecisionTable, objs: Iterable[int]) -> frozenset[int]:
    out = frozenset(int(o) for o in objs)
    n = table.num_objects
    for o in out:
        if o < 0 or o >= n:
            raise InvalidSubsetError(f"object index {o} outside [0, {n})")
    return out


def mask_of(attrs: Iterable[int]) -> int:
    """Bitmask with bit ``a`` set for every attribute ``a``."""
    m = 0
    for a in attrs:
        m |= 1 << int(a)
    return m


def subset_of(mask: int) -> frozenset[int]:
    out = []
    a = 0
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return frozenset(out)


def block_labels(table: DecisionTable, attrs: Iterable[int]) -> tuple[np.ndarray, int]:
    """Dense block id per object for ``U/IND(attrs)`` and the block count.

    Objects are keyed by their code tuple folded into a mixed-radix integer;
    the key is re-densified whenever the radix would overflow.
    """
    cols = _validate_attrs(table, attrs)
    n = table.num_objects
    if not cols:
        return np.zeros(n, dtype=np.int64), 1
    cond = table.conditions
    cards = table.cardinalities
    key = cond[:, cols[0]].copy()
    bound = cards[cols[0]]
    for a in cols[1:]:
        if bound * cards[a] >= _KEY_LIMIT:
            _, key = np.unique(key, return_inverse=True)
            bound = int(key.max()) + 1
        key = key * cards[a] + cond[:, a]
        bound *= cards[a]
    uniq, inv = np.unique(key, return_inverse=True)
    return inv.astype(np.int64, copy=False).reshape(n), int(uniq.size)


def _blocks_from_labels(labels: np.ndarray) -> list[frozenset[int]]:
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(i)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def partition(table: DecisionTable, attrs: Iterable[int]) -> list[frozenset[int]]:
    """``U/IND(attrs)`` as blocks ordered by their smallest object."""
    labels, _ = block_labels(table, attrs)
    return _blocks_from_labels(labels)


def decision_partition(table: DecisionTable) -> list[frozenset[int]]:
    return _blocks_from_labels(table.decisions)


def lower_approx(table: DecisionTable, attrs: Iterable[int],
                 target: Iterable[int]) -> frozenset[int]:
    """Union of the ``attrs``-blocks contained in ``target``."""
    x = _validate_objects(table, target)
    out: set[int] = set()
    for block in partition(table, attrs):
        if block <= x:
            out |= block
    return frozenset(out)


def upper_approx(table: DecisionTable, attrs: Iterable[int],
                 target: Iterable[int]) -> frozenset[int]:
    """Union of the ``attrs``-blocks meeting ``target``."""
    x = _validate_objects(table, target)
    out: set[int] = set()
    for block in partition(table, attrs):
        if not block.isdisjoint(x):
            out |= block
    return frozenset(out)


def regions(table: DecisionTable, attrs: Iterable[int]
            ) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Positive, negative and boundary regions of the decision w.r.t. ``attrs``.

    The negative region is always empty here because the decision classes
    cover the universe; it is computed anyway.
    """
    attrs = _validate_attrs(table, attrs)
    lower: set[int] = set()
    upper: set[int] = set()
    for cls in decision_partition(table):
        lower |= lower_approx(table, attrs, cls)
        upper |= upper_approx(table, attrs, cls)
    universe = frozenset(range(table.num_objects))
    return frozenset(lower), universe - upper, frozenset(upper - lower)


def _pos_count_from_labels(labels: np.ndarray, n_blocks: int,
                           decisions: np.ndarray, n_classes: int) -> int:
    pairs = np.unique(labels * n_classes + decisions)
    per_block = np.bincount(pairs // n_classes, minlength=n_blocks)
    return int(np.count_nonzero(per_block[labels] == 1))


def positive_region_size(table: DecisionTable, attrs: Iterable[int]) -> int:
    """``|POS_attrs(D)|``: objects whose block is decision-pure."""
    labels, n_blocks = block_labels(table, attrs)
    return _pos_count_from_labels(labels, n_blocks, table.decisions,
                                  max(table.num_classes, 1))


def dependency_fraction(table: DecisionTable, attrs: Iterable[int]) -> Fraction:
    return Fraction(positive_region_size(table, attrs), table.num_objects)


def dependency(table: DecisionTable, attrs: Iterable[int]) -> float:
    """Degree ``gamma`` in [0, 1] to which the decision depends on ``attrs``."""
    return float(dependency_fraction(table, attrs))


def entropy(table: DecisionTable, attrs: Iterable[int]) -> float:
    """Conditional entropy (base 2) of the decision given ``U/IND(attrs)``."""
    labels, n_blocks = block_labels(table, attrs)
    k = max(table.num_classes, 1)
    counts = np.bincount(labels * k + table.decisions,
                         minlength=n_blocks * k).reshape(n_blocks, k).astype(float)
    sizes = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / sizes
        terms = np.where(counts > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    h = -(sizes[:, 0] / table.num_objects * terms.sum(axis=1)).sum()
    return float(max(h, 0.0))


class SubsetEvaluator:
    """Memoised positive-region sizes keyed by attribute bitmask.

    ``calls`` counts the distinct subsets actually evaluated.  Every
    search algorithm works through one of these so that equal subsets are
    never recomputed and evaluation counts stay comparable.
    """

    def __init__(self, table: DecisionTable):
        self.table = table
        self.n_attrs = table.num_condition_attrs
        self.n_objects = table.num_objects
        self.full_mask = (1 << self.n_attrs) - 1
        self.calls = 0
        self._pos: dict[int, int] = {}
        self._entropy: dict[int, float] = {}
        # the empty subset is a single block: pure iff the decision is constant
        self._pos[0] = self.n_objects if table.num_classes <= 1 else 0
        self.full_pos = self.pos_count(self.full_mask)

    def pos_count(self, mask: int) -> int:
        got = self._pos.get(mask)
        if got is None:
            self.calls += 1
            got = positive_region_size(self.table, subset_of(mask))
            self._pos[mask] = got
        return got

    def gamma(self, mask: int) -> float:
        return self.pos_count(mask) / self.n_objects

    def is_reduct(self, mask: int) -> bool:
        return self.pos_count(mask) == self.full_pos

    def entropy(self, mask: int) -> float:
        got = self._entropy.get(mask)
        if got is None:
            self.calls += 1
            got = entropy(self.table, subset_of(mask))
            self._entropy[mask] = got
        return got
