import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roughbee.bee import (
    BeeConfig,
    RoughBeeColony,
    abc_fitness,
    bee_objective,
    bee_rsar,
    bee_rsar_runs,
    decode_position,
    neighbor_source,
    scout_reinit,
    selection_probabilities,
)
from roughbee.core import SubsetEvaluator

from oracles import bf_gamma, random_table

SHORT = BeeConfig(max_cycles=200)


class TestDecode:
    def test_worked_example(self):
        assert decode_position([1.45, 1.76, 3.33, 1.01], 4) == {0, 2}

    def test_duplicates_collapse(self):
        assert decode_position([2.0, 2.0, 2.0], 3) == {1}

    def test_out_of_range_components_clamp(self):
        assert decode_position([0.2, 4.9], 4) == {0, 3}
        assert decode_position([-3.0, 9.0], 4) == {0, 3}

    def test_empty(self):
        with pytest.raises(ValueError):
            decode_position([], 3)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 12).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.floats(1.0, float(n)), min_size=1,
                                                 max_size=n))))
    def test_reencoding_is_stable(self, case):
        n, position = case
        subset = decode_position(position, n)
        assert subset
        assert decode_position([float(i + 1) for i in subset], n) == subset
        assert all(0 <= i < n for i in subset)


class TestNeighbor:
    def test_zero_phi(self):
        np.testing.assert_array_equal(neighbor_source([1.5, 2.5], [3.0, 1.0], 1, 0.0),
                                      [1.5, 2.5])

    def test_arithmetic(self):
        np.testing.assert_array_equal(neighbor_source([2.0, 1.0], [1.0, 1.0], 0, 1.0),
                                      [3.0, 1.0])

    def test_clamped(self):
        out = neighbor_source([4.0, 2.0], [1.0, 2.0], 0, 0.5, lower_bound=1, upper_bound=4)
        assert out[0] == 4.0 and out[1] == 2.0


class TestFitnessAndProbabilities:
    def test_abc_fitness(self):
        assert abc_fitness(0.0) == 1.0
        assert abc_fitness(3.0) == 0.25
        assert abc_fitness(-0.5) == 1.5

    def test_probabilities(self):
        np.testing.assert_allclose(selection_probabilities([1, 1]), [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(selection_probabilities([3, 1]), [0.75, 0.25], atol=1e-12)
        np.testing.assert_allclose(selection_probabilities([5]), [1.0], atol=1e-12)
        np.testing.assert_allclose(selection_probabilities([0, 0]), [0.5, 0.5])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0, 1e6), min_size=1, max_size=20))
    def test_probabilities_sum_to_one(self, fits):
        p = selection_probabilities(fits)
        assert abs(p.sum() - 1.0) <= 1e-12 and np.all(p >= 0)


class TestScout:
    cfg = BeeConfig().resolve(5)

    def test_endpoints(self):
        np.testing.assert_array_equal(scout_reinit(self.cfg, [0.0] * 5), [1.0] * 5)
        np.testing.assert_array_equal(scout_reinit(self.cfg, [1.0] * 5), [5.0] * 5)

    def test_midpoint(self):
        assert scout_reinit(self.cfg, [0.5] * 5)[0] == 3.0

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            scout_reinit(self.cfg, [0.5] * 3)


class TestObjective:
    def test_examples(self, t0, t1):
        assert bee_objective(t0, {0}) == 1.5
        assert bee_objective(t1, {0}) == 0.5
        assert bee_objective(t0, {0, 1}) == 1.0

    def test_t0_ranking_by_enumeration(self, t0):
        scores = {s: bee_objective(t0, s) for s in [(0,), (1,), (0, 1)]}
        assert max(scores, key=scores.get) == (0,)

    def test_empty_subset(self, t0):
        with pytest.raises(ValueError):
            bee_objective(t0, set())

    def test_reducts_outrank_non_reducts(self):
        t = random_table(np.random.default_rng(1), 20, 5, consistent=True)
        full = bf_gamma(t, range(5))
        red, non = [], []
        for k in range(1, 6):
            for s in itertools.combinations(range(5), k):
                (red if bf_gamma(t, s) == full else non).append(bee_objective(t, s))
        assert min(red) > max(non, default=-1)


class TestConfig:
    def test_resolve_defaults(self):
        cfg = BeeConfig().resolve(8)
        assert (cfg.dimension, cfg.upper_bound, cfg.abandonment_limit) == (8, 8.0, 40)
        assert cfg.colony_size == 10 and cfg.max_cycles == 1000 and cfg.runs == 3

    def test_odd_colony(self):
        with pytest.raises(ValueError):
            BeeConfig(colony_size=7)

    def test_dimension_mismatch(self, t0):
        with pytest.raises(ValueError):
            bee_rsar(t0, BeeConfig(dimension=3), 0)


class TestBeeRsar:
    def test_t0(self, t0):
        for seed in range(3):
            out = bee_rsar(t0, BeeConfig(), seed)
            assert out.subset == {0} and out.gamma == 1.0

    def test_t1(self, t1):
        for seed in range(3):
            out = bee_rsar(t1, BeeConfig(), seed)
            assert out.subset == {0, 1} and out.gamma == 1.0

    def test_deterministic(self):
        t = random_table(np.random.default_rng(3), 30, 8, consistent=True)
        assert bee_rsar(t, SHORT, 17) == bee_rsar(t, SHORT, 17)

    def test_runs_use_consecutive_seeds(self, t1):
        outs = bee_rsar_runs(t1, BeeConfig(max_cycles=20, runs=3), seed=5)
        assert [o.seed for o in outs] == [5, 6, 7]

    def test_best_so_far_never_worsens(self):
        t = random_table(np.random.default_rng(8), 30, 8, consistent=True)
        out = bee_rsar(t, SHORT, 2)
        assert all(a <= b for a, b in zip(out.trace, out.trace[1:]))

    def test_mostly_optimal_on_small_table(self):
        t = random_table(np.random.default_rng(21), 40, 10, consistent=True)
        ev = SubsetEvaluator(t)
        best = max(bee_objective(t, s, ev) for k in range(1, 11)
                   for s in itertools.combinations(range(10), k))
        hits = sum(bee_objective(t, bee_rsar(t, BeeConfig(), seed, ev).subset, ev) == best
                   for seed in range(100))
        assert hits >= 95


def test_phase_invariants():
    t = random_table(np.random.default_rng(5), 30, 8, consistent=True)
    # small limit so scouts fire often
    colony = RoughBeeColony(t, BeeConfig(abandonment_limit=3), seed=4)
    lo, hi = colony.lo, colony.hi
    best = colony.best_obj
    for _ in range(150):
        obj_before, trial_before = list(colony.obj), list(colony.trial)
        colony.employed_phase()
        for i, (o, tr) in enumerate(zip(obj_before, trial_before)):
            assert colony.obj[i] >= o
            assert colony.trial[i] == (0 if colony.obj[i] > o else tr + 1)
        obj_before = list(colony.obj)
        colony.onlooker_phase()
        assert all(a >= b for a, b in zip(colony.obj, obj_before))
        colony.memorize()
        colony.scout_phase()
        colony.memorize()
        assert colony.best_obj >= best
        best = colony.best_obj
        for i, pos in enumerate(colony.pos):
            assert all(lo <= x <= hi for x in pos)
            assert decode_position(pos, colony.n) == {a for a in range(8)
                                                      if colony.mask[i] >> a & 1}
            assert colony.trial[i] <= colony.limit
    state = colony.state()
    assert len(state.sources) == 5
    assert state.best_so_far.objective >= max(s.objective for s in state.sources)
