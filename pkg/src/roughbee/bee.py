"""BeeRSAR: artificial bee colony search for minimal rough-set reducts.

A food source is a real vector of length N (the number of condition
attributes) with components in ``[1, N]``.  Truncating every component to
an integer and keeping the distinct values gives the attribute subset the
source stands for, so many positions decode to the same subset and the
colony moves through subset space by nudging one component at a time.

Sources are compared on :func:`bee_objective` (larger is better).  The
``1/(1+f)`` transform only shapes the onlookers' roulette wheel, where it is
applied to each source's shortfall from the colony's best objective.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import DecisionTable, SubsetEvaluator, mask_of, subset_of
from .deterministic import ReductOutcome

__all__ = [
    "BeeConfig",
    "FoodSource",
    "ColonyState",
    "RoughBeeColony",
    "decode_position",
    "neighbor_source",
    "abc_fitness",
    "selection_probabilities",
    "scout_reinit",
    "bee_objective",
    "bee_rsar",
    "bee_rsar_runs",
]


@dataclass(frozen=True)
class BeeConfig:
    """Colony parameters.

    ``dimension`` and ``upper_bound`` default to the table's attribute
    count and ``abandonment_limit`` to ``(colony_size // 2) * dimension``;
    call :meth:`resolve` to fill them in.
    """

    colony_size: int = 10
    dimension: Optional[int] = None
    lower_bound: float = 1.0
    upper_bound: Optional[float] = None
    max_cycles: int = 1000
    runs: int = 3
    abandonment_limit: Optional[int] = None

    def __post_init__(self) -> None:
        if self.colony_size < 2 or self.colony_size % 2:
            raise ValueError("colony_size must be an even number >= 2")
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be at least 1")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.dimension is not None and self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.upper_bound is not None and not self.lower_bound < self.upper_bound:
            # a single-attribute table has lower == upper == 1
            if not (self.dimension == 1 and self.lower_bound == self.upper_bound):
                raise ValueError("lower_bound must be below upper_bound")
        if self.abandonment_limit is not None and self.abandonment_limit < 0:
            raise ValueError("abandonment_limit must be non-negative")

    @property
    def num_sources(self) -> int:
        return self.colony_size // 2

    def resolve(self, n_attrs: int) -> "BeeConfig":
        dim = self.dimension if self.dimension is not None else n_attrs
        if dim != n_attrs:
            raise ValueError(f"config dimension {dim} != {n_attrs} condition attributes")
        upper = float(dim) if self.upper_bound is None else self.upper_bound
        limit = self.abandonment_limit
        if limit is None:
            limit = self.num_sources * dim
        return replace(self, dimension=dim, upper_bound=upper, abandonment_limit=limit)


@dataclass
class FoodSource:
    position: np.ndarray
    objective: float
    fitness: float
    trial_count: int
    decoded: frozenset[int]


@dataclass
class ColonyState:
    sources: list[FoodSource]
    best_so_far: FoodSource
    cycle: int


def decode_position(position: Sequence[float], n: int) -> frozenset[int]:
    """0-based attribute subset encoded by ``position``.

    Components are truncated toward zero and clamped to ``[1, n]``
    (1.76 -> feature 1); duplicates collapse.
    """
    if len(position) == 0:
        raise ValueError("cannot decode an empty position")
    return frozenset(_feature(x, n) - 1 for x in position)


def _feature(x: float, n: int) -> int:
    k = int(x)
    return 1 if k < 1 else (n if k > n else k)


def neighbor_source(source, partner, j: int, phi: float,
                    lower_bound: float = -math.inf,
                    upper_bound: float = math.inf) -> np.ndarray:
    """Copy of ``source``'s position with component ``j`` moved relative to ``partner``."""
    x = np.array(getattr(source, "position", source), dtype=float)
    xk = np.asarray(getattr(partner, "position", partner), dtype=float)
    v = x[j] + phi * (x[j] - xk[j])
    x[j] = min(max(v, lower_bound), upper_bound)
    return x


def abc_fitness(objective: float) -> float:
    if objective >= 0:
        return 1.0 / (1.0 + objective)
    return 1.0 + abs(objective)


def selection_probabilities(fitnesses: Sequence[float]) -> np.ndarray:
    """Roulette probabilities proportional to fitness; uniform if all are zero."""
    fit = np.asarray(fitnesses, dtype=float)
    if fit.size == 0:
        raise ValueError("no fitness values")
    if np.any(fit < 0):
        raise ValueError("fitness values must be non-negative")
    total = fit.sum()
    if total == 0:
        return np.full(fit.size, 1.0 / fit.size)
    return fit / total


def scout_reinit(cfg: BeeConfig, rand_draws: Sequence[float]) -> np.ndarray:
    if cfg.dimension is None or cfg.upper_bound is None:
        raise ValueError("scout_reinit needs a resolved BeeConfig")
    draws = np.asarray(rand_draws, dtype=float)
    if draws.shape != (cfg.dimension,):
        raise ValueError(f"expected {cfg.dimension} draws, got {draws.shape}")
    return cfg.lower_bound + (cfg.upper_bound - cfg.lower_bound) * draws


def _objective(ev: SubsetEvaluator, mask: int) -> float:
    pos = ev.pos_count(mask)
    if pos == ev.full_pos:
        return pos / ev.n_objects + (ev.n_attrs - bin(mask).count("1")) / ev.n_attrs
    return pos / ev.n_objects


def bee_objective(table: DecisionTable, subset: Iterable[int],
                  evaluator: Optional[SubsetEvaluator] = None) -> float:
    """Score of a subset: its gamma, plus a parsimony bonus once it is a reduct.

    A reduct ``R`` scores ``gamma_C + (|C| - |R|) / |C|``, anything else
    just its gamma, so no non-reduct ever outranks a reduct.
    """
    mask = mask_of(subset)
    if mask == 0:
        raise ValueError("bee objective is undefined for the empty subset")
    if mask >> table.num_condition_attrs:
        raise IndexError("attribute index outside the table")
    return _objective(evaluator or SubsetEvaluator(table), mask)


class RoughBeeColony:
    """One BeeRSAR run as a steppable state machine.

    Positions are kept as Python lists alongside the integer feature each
    component decodes to and a per-value count, so a one-component move
    re-decodes in constant time.
    """

    def __init__(self, table: DecisionTable, cfg: BeeConfig, seed: int,
                 evaluator: Optional[SubsetEvaluator] = None):
        self.table = table
        self.cfg = cfg.resolve(table.num_condition_attrs)
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.ev = evaluator or SubsetEvaluator(table)
        self.n = self.cfg.dimension
        self.lo = float(self.cfg.lower_bound)
        self.hi = float(self.cfg.upper_bound)
        self.limit = self.cfg.abandonment_limit
        self._obj_cache: dict[int, float] = {}
        s = self.cfg.num_sources
        self.pos: list[list[float]] = []
        self.feat: list[list[int]] = []
        self.counts: list[list[int]] = []
        self.mask: list[int] = []
        self.obj: list[float] = []
        self.trial: list[int] = [0] * s
        for _ in range(s):
            self._place(len(self.pos), self.rng.random(self.n))
        i = max(range(s), key=lambda k: self.obj[k])
        self.best_pos = list(self.pos[i])
        self.best_mask = self.mask[i]
        self.best_obj = self.obj[i]
        self.cycle = 0
        self.trace: list[float] = []

    def objective(self, mask: int) -> float:
        got = self._obj_cache.get(mask)
        if got is None:
            got = self._obj_cache[mask] = _objective(self.ev, mask)
        return got

    def _place(self, i: int, draws) -> None:
        position = scout_reinit(self.cfg, draws).tolist()
        feats = [_feature(x, self.n) for x in position]
        counts = [0] * (self.n + 1)
        for f in feats:
            counts[f] += 1
        mask = mask_of(f - 1 for f in feats)
        if i == len(self.pos):
            self.pos.append(position)
            self.feat.append(feats)
            self.counts.append(counts)
            self.mask.append(mask)
            self.obj.append(self.objective(mask))
        else:
            self.pos[i], self.feat[i], self.counts[i] = position, feats, counts
            self.mask[i] = mask
            self.obj[i] = self.objective(mask)
        self.trial[i] = 0

    def _move(self, i: int, u_partner: float, u_dim: float, u_phi: float) -> None:
        s = len(self.pos)
        k = i
        if s > 1:
            k = int(u_partner * (s - 1))
            if k >= i:
                k += 1
        j = int(u_dim * self.n)
        pos_i = self.pos[i]
        xi = pos_i[j]
        v = xi + (2.0 * u_phi - 1.0) * (xi - self.pos[k][j])
        v = self.lo if v < self.lo else (self.hi if v > self.hi else v)
        feat_i = self.feat[i]
        old_f = feat_i[j]
        new_f = int(v)
        new_f = 1 if new_f < 1 else (self.n if new_f > self.n else new_f)
        mask = self.mask[i]
        if new_f != old_f:
            mask |= 1 << (new_f - 1)
            if self.counts[i][old_f] == 1:
                mask &= ~(1 << (old_f - 1))
        obj = self._obj_cache.get(mask)
        if obj is None:
            obj = self.objective(mask)
        cur = self.obj[i]
        if obj >= cur:
            # equal-score moves are taken (neutral drift) but do not reset the trial counter
            self.trial[i] = 0 if obj > cur else self.trial[i] + 1
            pos_i[j] = v
            if new_f != old_f:
                feat_i[j] = new_f
                counts = self.counts[i]
                counts[old_f] -= 1
                counts[new_f] += 1
            self.mask[i] = mask
            self.obj[i] = obj
        else:
            self.trial[i] += 1

    def employed_phase(self, draws: Optional[list[float]] = None) -> None:
        s = len(self.pos)
        if draws is None:
            draws = self.rng.random(3 * s).tolist()
        for i in range(s):
            self._move(i, draws[3 * i], draws[3 * i + 1], draws[3 * i + 2])

    def probabilities(self) -> np.ndarray:
        top = max(self.obj)
        return selection_probabilities([abc_fitness(top - f) for f in self.obj])

    def onlooker_phase(self, draws: Optional[list[float]] = None) -> None:
        s = len(self.pos)
        if draws is None:
            draws = self.rng.random(4 * s).tolist()
        # same weights as probabilities(), kept in plain floats for speed
        top = max(self.obj)
        cum = list(itertools.accumulate(1.0 / (1.0 + (top - f)) for f in self.obj))
        total = cum[-1]
        for o in range(s):
            target = draws[4 * o] * total
            i = 0
            while i < s - 1 and cum[i] <= target:
                i += 1
            self._move(i, draws[4 * o + 1], draws[4 * o + 2], draws[4 * o + 3])

    def scout_phase(self) -> None:
        for i in range(len(self.pos)):
            if self.trial[i] > self.limit:
                self._place(i, self.rng.random(self.n))

    def memorize(self) -> None:
        i = max(range(len(self.pos)), key=lambda k: self.obj[k])
        if self.obj[i] > self.best_obj:
            self.best_obj = self.obj[i]
            self.best_mask = self.mask[i]
            self.best_pos = list(self.pos[i])

    def step(self) -> None:
        s = len(self.pos)
        draws = self.rng.random(7 * s).tolist()
        self.employed_phase(draws[:3 * s])
        self.onlooker_phase(draws[3 * s:])
        # memorize before scouting so an abandoned source's last value is not lost
        self.memorize()
        self.scout_phase()
        self.memorize()
        self.cycle += 1
        self.trace.append(self.best_obj)

    def run(self) -> ReductOutcome:
        start = time.perf_counter()
        for _ in range(self.cfg.max_cycles):
            self.step()
        return self.outcome(time.perf_counter() - start)

    def outcome(self, elapsed: float = 0.0) -> ReductOutcome:
        mask = self.best_mask
        return ReductOutcome(subset_of(mask), self.ev.gamma(mask), self.ev.calls, "beersar",
                             seed=self.seed, feasible=self.ev.is_reduct(mask),
                             trace=tuple(self.trace), elapsed=elapsed)

    def state(self) -> ColonyState:
        """Snapshot of the colony as :class:`FoodSource` records."""
        top = max(self.obj)
        sources = [
            FoodSource(np.array(self.pos[i]), self.obj[i], abc_fitness(top - self.obj[i]),
                       self.trial[i], subset_of(self.mask[i]))
            for i in range(len(self.pos))
        ]
        best = FoodSource(np.array(self.best_pos), self.best_obj, abc_fitness(0.0), 0,
                          subset_of(self.best_mask))
        return ColonyState(sources, best, self.cycle)


def bee_rsar(table: DecisionTable, cfg: BeeConfig = BeeConfig(), seed: int = 0,
             evaluator: Optional[SubsetEvaluator] = None) -> ReductOutcome:
    """Run one BeeRSAR search and return the best subset found."""
    return RoughBeeColony(table, cfg, seed, evaluator).run()


def bee_rsar_runs(table: DecisionTable, cfg: BeeConfig = BeeConfig(),
                  seed: int = 0) -> list[ReductOutcome]:
    """``cfg.runs`` independent runs seeded ``seed, seed + 1, ...``."""
    return [bee_rsar(table, cfg, seed + r) for r in range(cfg.runs)]
