"""Greedy reduct search (QuickReduct, EBR) and the exhaustive minimal-reduct oracle."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import DecisionTable, SubsetEvaluator, positive_region_size, subset_of

__all__ = [
    "ReductOutcome",
    "ReductSizeError",
    "ENTROPY_TOL",
    "DEFAULT_ORACLE_CAP",
    "quick_reduct",
    "ebr",
    "exhaustive_min_reduct",
]

ENTROPY_TOL = 1e-12
DEFAULT_ORACLE_CAP = 24


class ReductSizeError(ValueError):
    """The table has more attributes than the exhaustive search will accept."""


@dataclass(frozen=True)
class ReductOutcome:
    """Result of one reduct search.

    ``feasible`` is False only when a stochastic search never visited a
    subset preserving the full positive region and fell back to its best
    infeasible candidate.  ``trace`` holds the best-so-far score after each
    iteration (its meaning is algorithm specific).
    """

    subset: frozenset[int]
    gamma: float
    evaluations: int
    algorithm_id: str
    seed: Optional[int] = None
    feasible: bool = True
    trace: tuple[float, ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma {self.gamma} outside [0, 1]")
        if self.evaluations < 1:
            raise ValueError("an outcome needs at least one evaluation")

    @property
    def cardinality(self) -> int:
        return len(self.subset)

    def sorted_subset(self) -> list[int]:
        return sorted(self.subset)


def quick_reduct(table: DecisionTable) -> ReductOutcome:
    """Greedy forward selection on the dependency degree.

    Each round adds the attribute giving the largest gamma, lowest index on
    ties, until gamma matches that of the full attribute set.  If no
    candidate strictly improves on the current subset (possible when
    attributes only help jointly) the best candidate is added anyway so the
    loop always terminates.
    """
    start = time.perf_counter()
    ev = SubsetEvaluator(table)
    n = table.num_condition_attrs
    r = 0
    pos_r = ev.pos_count(r)
    trace = [pos_r / ev.n_objects]
    while pos_r != ev.full_pos:
        best, best_pos = None, pos_r
        fallback, fallback_pos = None, -1
        for x in range(n):
            if r >> x & 1:
                continue
            p = ev.pos_count(r | 1 << x)
            if p > best_pos:
                best, best_pos = x, p
            if p > fallback_pos:
                fallback, fallback_pos = x, p
        if best is None:
            best, best_pos = fallback, fallback_pos
        r |= 1 << best
        pos_r = best_pos
        trace.append(pos_r / ev.n_objects)
    return ReductOutcome(subset_of(r), pos_r / ev.n_objects, ev.calls, "quickreduct",
                         trace=tuple(trace), elapsed=time.perf_counter() - start)


def ebr(table: DecisionTable) -> ReductOutcome:
    """Greedy forward selection minimising conditional entropy.

    Stops once the subset's entropy is within ``ENTROPY_TOL`` of the full
    set's.  Ties go to the lowest attribute index.
    """
    start = time.perf_counter()
    ev = SubsetEvaluator(table)
    n = table.num_condition_attrs
    e_full = ev.entropy(ev.full_mask)
    r = 0
    e_r = ev.entropy(r)
    trace = [e_r]
    while abs(e_r - e_full) > ENTROPY_TOL:
        best, best_e = None, e_r
        fallback, fallback_e = None, float("inf")
        for x in range(n):
            if r >> x & 1:
                continue
            e = ev.entropy(r | 1 << x)
            if e < best_e - ENTROPY_TOL:
                best, best_e = x, e
            if e < fallback_e - ENTROPY_TOL:
                fallback, fallback_e = x, e
        if best is None:
            best, best_e = fallback, fallback_e
        r |= 1 << best
        e_r = best_e
        trace.append(e_r)
    return ReductOutcome(subset_of(r), ev.gamma(r), ev.calls, "ebr",
                         trace=tuple(trace), elapsed=time.perf_counter() - start)


def exhaustive_min_reduct(table: DecisionTable,
                          max_attrs_cap: int = DEFAULT_ORACLE_CAP) -> ReductOutcome:
    """Minimum-cardinality reduct by enumeration in order of increasing size.

    Subsets of one size are visited in lexicographic order, so the first hit
    is the lexicographically smallest minimal reduct; nothing larger than it
    is ever evaluated.
    """
    n = table.num_condition_attrs
    if n > max_attrs_cap:
        raise ReductSizeError(
            f"{n} attributes exceeds the exhaustive search cap of {max_attrs_cap}")
    start = time.perf_counter()
    full_pos = positive_region_size(table, range(n))
    calls = 1
    for k in range(n + 1):
        for combo in itertools.combinations(range(n), k):
            calls += 1
            if positive_region_size(table, combo) == full_pos:
                return ReductOutcome(frozenset(combo), full_pos / table.num_objects,
                                     calls, "oracle",
                                     elapsed=time.perf_counter() - start)
    raise AssertionError("the full attribute set is always a reduct")  # pragma: no cover

