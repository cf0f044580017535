"""Stochastic reduct search: genetic algorithm, ant colony and binary PSO.

All three share the same contract: ``algo(table, cfg, seed) -> ReductOutcome``.
Each run owns a private ``numpy.random.Generator`` so results depend only
on ``(table, cfg, seed)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import DecisionTable, SubsetEvaluator, subset_of
from .deterministic import ReductOutcome

__all__ = [
    "GaConfig",
    "ga_fitness",
    "gen_rsar",
    "AntConfig",
    "PheromoneGraph",
    "AntState",
    "ant_transition_probabilities",
    "ant_rsar",
    "PsoConfig",
    "Particle",
    "pso_sigmoid",
    "pso_velocity_update",
    "pso_position_update",
    "pso_rsar",
]


def _bits_to_mask(bits: Sequence[int]) -> int:
    m = 0
    for j, b in enumerate(bits):
        if b:
            m |= 1 << j
    return m


def _roulette(rng: np.random.Generator, weights: np.ndarray) -> int:
    total = float(weights.sum())
    if total <= 0.0:
        return int(rng.integers(len(weights)))
    cum = np.cumsum(weights)
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    return min(idx, len(weights) - 1)


# --------------------------------------------------------------------------
# GenRSAR
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    crossover_prob: float = 0.6
    mutation_prob: float = 0.4
    generations: int = 100

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")


def ga_fitness(table: DecisionTable, chrom: Sequence[int],
               evaluator: Optional[SubsetEvaluator] = None) -> float:
    """Dependency of the decoded subset scaled by the fraction of attributes dropped."""
    n = table.num_condition_attrs
    if len(chrom) != n:
        raise ValueError(f"chromosome length {len(chrom)} != {n} attributes")
    mask = _bits_to_mask(chrom)
    if mask == 0:
        return 0.0
    ev = evaluator or SubsetEvaluator(table)
    size = bin(mask).count("1")
    return ev.gamma(mask) * (n - size) / n


def gen_rsar(table: DecisionTable, cfg: GaConfig = GaConfig(), seed: int = 0) -> ReductOutcome:
    """Generational GA: roulette selection, one-point crossover, one-bit mutation, 1-elite.

    Returns the smallest reduct seen in any generation; if none was seen,
    the fittest chromosome with ``feasible=False``.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    ev = SubsetEvaluator(table)
    n = table.num_condition_attrs
    size = cfg.population_size

    def fitness(mask: int) -> float:
        if mask == 0:
            return 0.0
        return ev.gamma(mask) * (n - bin(mask).count("1")) / n

    pop = [_bits_to_mask(row) for row in rng.integers(0, 2, size=(size, n))]
    best_feasible: Optional[int] = None
    best_fit_mask = pop[0]
    best_fit = -1.0
    trace = []
    for _ in range(cfg.generations):
        fits = np.array([fitness(m) for m in pop])
        for m, f in zip(pop, fits.tolist()):
            if m and ev.is_reduct(m):
                if best_feasible is None or bin(m).count("1") < bin(best_feasible).count("1"):
                    best_feasible = m
            if f > best_fit:
                best_fit, best_fit_mask = f, m
        elite = pop[int(np.argmax(fits))]
        trace.append(float(fits.max()))
        nxt = [elite]
        while len(nxt) < size:
            a = pop[_roulette(rng, fits)]
            b = pop[_roulette(rng, fits)]
            if n > 1 and rng.random() < cfg.crossover_prob:
                cut = int(rng.integers(1, n))
                low = (1 << cut) - 1
                a, b = (a & low) | (b & ~low), (b & low) | (a & ~low)
            for child in (a, b):
                if rng.random() < cfg.mutation_prob:
                    child ^= 1 << int(rng.integers(n))
                if len(nxt) < size:
                    nxt.append(child)
        pop = nxt
    # the last offspring generation is scored too so nothing produced is wasted
    for m in pop:
        if m and ev.is_reduct(m):
            if best_feasible is None or bin(m).count("1") < bin(best_feasible).count("1"):
                best_feasible = m
    feasible = best_feasible is not None
    chosen = best_feasible if feasible else best_fit_mask
    return ReductOutcome(subset_of(chosen), ev.gamma(chosen), ev.calls, "genrsar",
                         seed=seed, feasible=feasible, trace=tuple(trace),
                         elapsed=time.perf_counter() - start)


# --------------------------------------------------------------------------
# AntRSAR
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AntConfig:
    num_ants: Optional[int] = None  # None: one ant per attribute
    alpha: float = 1.0
    beta: float = 2.0
    evaporation_rho: float = 0.1
    iterations: int = 50

    def __post_init__(self) -> None:
        if self.num_ants is not None and self.num_ants < 1:
            raise ValueError("num_ants must be positive")
        if not 0.0 < self.evaporation_rho < 1.0:
            raise ValueError("evaporation_rho must lie in (0, 1)")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")


@dataclass
class PheromoneGraph:
    tau: np.ndarray
    eta: np.ndarray
    alpha: float = 1.0
    beta: float = 2.0
    evaporation_rho: float = 0.1

    def __post_init__(self) -> None:
        self.tau = np.asarray(self.tau, dtype=float)
        self.eta = np.asarray(self.eta, dtype=float)
        n = self.tau.shape[0]
        if self.tau.shape != (n, n) or self.eta.shape != (n, n):
            raise ValueError("tau and eta must be square matrices of equal size")
        if np.any(self.tau <= 0):
            raise ValueError("pheromone levels must be strictly positive")
        if np.any(self.eta < 0):
            raise ValueError("heuristic desirability must be non-negative")

    def evaporate_and_deposit(self, path: Sequence[tuple[int, int]], amount: float) -> None:
        self.tau *= 1.0 - self.evaporation_rho
        for i, j in path:
            self.tau[i, j] += amount
            self.tau[j, i] += amount


@dataclass(frozen=True)
class AntState:
    current_feature: int
    visited: frozenset[int]
    unvisited: frozenset[int]

    def __post_init__(self) -> None:
        if self.visited & self.unvisited:
            raise ValueError("visited and unvisited features overlap")


def ant_transition_probabilities(graph: PheromoneGraph, state: AntState) -> np.ndarray:
    """Probability of moving to each unvisited feature, in ascending index order.

    Falls back to a uniform distribution when every weight is zero.
    """
    if not state.unvisited:
        raise ValueError("ant has no unvisited features")
    cand = sorted(state.unvisited)
    i = state.current_feature
    w = graph.tau[i, cand] ** graph.alpha * graph.eta[i, cand] ** graph.beta
    total = w.sum()
    if not total > 0.0 or not np.isfinite(total):
        return np.full(len(cand), 1.0 / len(cand))
    return w / total


def _pair_desirability(ev: SubsetEvaluator) -> np.ndarray:
    n = ev.n_attrs
    eta = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            eta[i, j] = eta[j, i] = ev.gamma(1 << i | 1 << j)
        eta[i, i] = ev.gamma(1 << i)
    return eta


def ant_rsar(table: DecisionTable, cfg: AntConfig = AntConfig(), seed: int = 0) -> ReductOutcome:
    """Ant colony search over the attribute graph.

    Each ant walks from a random start feature, adding one feature per step
    by the transition rule, until its subset preserves the full positive
    region.  After every iteration pheromone evaporates and the
    iteration-best path is reinforced by ``gamma / |subset|``.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    ev = SubsetEvaluator(table)
    n = table.num_condition_attrs
    num_ants = cfg.num_ants or n
    graph = PheromoneGraph(np.ones((n, n)), _pair_desirability(ev),
                           cfg.alpha, cfg.beta, cfg.evaporation_rho)
    best: Optional[int] = None
    best_pos = -1
    trace = []
    for _ in range(cfg.iterations):
        starts = np.concatenate([rng.permutation(n) for _ in range(-(-num_ants // n))])
        it_best: Optional[tuple[int, list[tuple[int, int]]]] = None
        for k in range(num_ants):
            cur = int(starts[k])
            mask = 1 << cur
            visited = {cur}
            path: list[tuple[int, int]] = []
            while not ev.is_reduct(mask) and len(visited) < n:
                state = AntState(cur, frozenset(visited),
                                 frozenset(range(n)) - visited)
                probs = ant_transition_probabilities(graph, state)
                nxt = sorted(state.unvisited)[_roulette(rng, probs)]
                path.append((cur, nxt))
                visited.add(nxt)
                mask |= 1 << nxt
                cur = nxt
            if it_best is None or _better_subset(ev, mask, it_best[0]):
                it_best = (mask, path)
        mask, path = it_best
        if best is None or _better_subset(ev, mask, best):
            best = mask
        best_pos = ev.pos_count(best)
        graph.evaporate_and_deposit(path, ev.gamma(mask) / bin(mask).count("1"))
        trace.append(float(bin(best).count("1")))
    feasible = best_pos == ev.full_pos
    return ReductOutcome(subset_of(best), ev.gamma(best), ev.calls, "antrsar",
                         seed=seed, feasible=feasible, trace=tuple(trace),
                         elapsed=time.perf_counter() - start)


def _better_subset(ev: SubsetEvaluator, a: int, b: int) -> bool:
    """Feasible beats infeasible, then fewer attributes, then larger gamma."""
    fa, fb = ev.is_reduct(a), ev.is_reduct(b)
    if fa != fb:
        return fa
    ca, cb = bin(a).count("1"), bin(b).count("1")
    if fa:
        return ca < cb
    pa, pb = ev.pos_count(a), ev.pos_count(b)
    return pa > pb or (pa == pb and ca < cb)


# --------------------------------------------------------------------------
# PSO-RSAR
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 20
    phi1: float = 2.0
    phi2: float = 2.0
    w_start: float = 1.0
    w_end: float = 0.1
    iterations: int = 100
    v_max: float = 4.0

    def __post_init__(self) -> None:
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be at least 1")
        if not self.w_start >= self.w_end >= 0.0:
            raise ValueError("inertia must satisfy w_start >= w_end >= 0")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.v_max <= 0:
            raise ValueError("v_max must be positive")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.position = np.asarray(self.position, dtype=np.int8)
        self.velocity = np.asarray(self.velocity, dtype=float)
        if self.best_position is None:
            self.best_position = self.position.copy()
        self.best_position = np.asarray(self.best_position, dtype=np.int8)
        if not (len(self.position) == len(self.velocity) == len(self.best_position)):
            raise ValueError("position, velocity and best position lengths differ")


def pso_sigmoid(v):
    """Logistic function, overflow-safe for large ``|v|``."""
    v = np.clip(v, -700.0, 700.0)
    out = 1.0 / (1.0 + np.exp(-v))
    return float(out) if np.ndim(out) == 0 else out


def pso_velocity_update(particle: Particle, gbest: Sequence[int], w: float,
                        phi1: float, phi2: float, r1, r2,
                        v_max: float = PsoConfig.v_max) -> np.ndarray:
    p = particle.position.astype(float)
    v = (w * particle.velocity
         + phi1 * np.asarray(r1) * (particle.best_position - p)
         + phi2 * np.asarray(r2) * (np.asarray(gbest, dtype=float) - p))
    return np.clip(v, -v_max, v_max)


def pso_position_update(velocity: Sequence[float], rho_draws: Sequence[float]) -> np.ndarray:
    velocity = np.asarray(velocity, dtype=float)
    rho_draws = np.asarray(rho_draws, dtype=float)
    if velocity.shape != rho_draws.shape:
        raise ValueError(f"{velocity.shape[0]} velocities but {rho_draws.shape[0]} draws")
    return (rho_draws < pso_sigmoid(velocity)).astype(np.int8)


def _pso_rank(ev: SubsetEvaluator, mask: int) -> tuple[int, int, int]:
    ones = bin(mask).count("1")
    pos = ev.pos_count(mask)
    return (1 if pos == ev.full_pos else 0, pos, -ones)


def _pso_score(ev: SubsetEvaluator, mask: int) -> float:
    if ev.is_reduct(mask):
        return 1.0 + (ev.n_attrs - bin(mask).count("1")) / ev.n_attrs
    return ev.gamma(mask)


def pso_rsar(table: DecisionTable, cfg: PsoConfig = PsoConfig(), seed: int = 0) -> ReductOutcome:
    """Binary PSO where feasible positions rank by how few attributes they select.

    A position is feasible when its subset's positive region equals that
    of the full attribute set.  Infeasible positions always rank below
    feasible ones (then by positive-region size, then by fewer ones).
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    ev = SubsetEvaluator(table)
    n = table.num_condition_attrs
    swarm = []
    for _ in range(cfg.swarm_size):
        pos = rng.integers(0, 2, size=n).astype(np.int8)
        vel = rng.uniform(-cfg.v_max, cfg.v_max, size=n)
        swarm.append(Particle(pos, vel))
    best_rank = [_pso_rank(ev, _bits_to_mask(p.position)) for p in swarm]
    g = max(range(cfg.swarm_size), key=lambda i: best_rank[i])
    gbest, gbest_rank = swarm[g].best_position.copy(), best_rank[g]
    trace = []
    span = max(cfg.iterations - 1, 1)
    for t in range(cfg.iterations):
        w = cfg.w_start - (cfg.w_start - cfg.w_end) * t / span
        for i, particle in enumerate(swarm):
            r1, r2, rho = rng.random((3, n))
            particle.velocity = pso_velocity_update(particle, gbest, w, cfg.phi1, cfg.phi2,
                                                    r1, r2, cfg.v_max)
            particle.position = pso_position_update(particle.velocity, rho)
            rank = _pso_rank(ev, _bits_to_mask(particle.position))
            if rank > best_rank[i]:
                best_rank[i] = rank
                particle.best_position = particle.position.copy()
        g = max(range(cfg.swarm_size), key=lambda i: best_rank[i])
        if best_rank[g] > gbest_rank:
            gbest, gbest_rank = swarm[g].best_position.copy(), best_rank[g]
        trace.append(_pso_score(ev, _bits_to_mask(gbest)))
    mask = _bits_to_mask(gbest)
    return ReductOutcome(subset_of(mask), ev.gamma(mask), ev.calls, "psorsar",
                         seed=seed, feasible=gbest_rank[0] == 1, trace=tuple(trace),
                         elapsed=time.perf_counter() - start)
