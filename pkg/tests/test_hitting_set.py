from __future__ import annotations

import math
import random
import statistics

import pytest

from ratiocycle.context import ConcreteContext
from ratiocycle.graph import WeightedDigraph
from ratiocycle.hitting_set import (
    CenterMode,
    PathFamily,
    TooLarge,
    build_path_family,
    greedy_hitting_set,
    greedy_size_bound,
    hits_all,
    sample_centers,
    sampling_probability,
    size_limit,
)
from ratiocycle.hop_paths import bellman_ford_hop_multi


def family_of(g, half):
    return build_path_family(bellman_ford_hop_multi(ConcreteContext(), g, range(g.n), half))


class TestSampling:
    def test_h1_takes_everything(self):
        c = sample_centers(7, 1, rng=random.Random(0))
        assert c.members == tuple(range(7))

    def test_probability_clamps(self):
        assert sampling_probability(2, 2) == 1.0
        assert sample_centers(2, 2, rng=random.Random(3)).members == (0, 1)

    def test_n1000_h100(self):
        assert math.ceil(size_limit(1000, 100)) == 622
        sizes = []
        for seed in range(100):
            got = sample_centers(1000, 100, rng=random.Random(seed))
            assert not isinstance(got, TooLarge)
            assert len(got) <= got.size_bound == 622
            sizes.append(len(got))
        mean = statistics.mean(sizes)
        assert abs(mean - 3 * 1000 * math.log(1000) / 100) < 10

    def test_too_large_is_a_value(self):
        class Always:
            def random(self):
                return 0.0

        got = sample_centers(100, 90, rng=Always())
        assert isinstance(got, TooLarge)
        assert got.size == 100 and got.size_bound == math.ceil(size_limit(100, 90))

    @pytest.mark.parametrize("n, h, c", [(1, 1, 1), (5, 0, 1), (5, 6, 1), (5, 2, 0.5)])
    def test_bad_params(self, n, h, c):
        with pytest.raises(ValueError):
            sample_centers(n, h, c)

    def test_deterministic_per_seed(self):
        a = sample_centers(300, 40, rng=random.Random(11))
        b = sample_centers(300, 40, rng=random.Random(11))
        assert a == b and a.mode is CenterMode.RANDOMIZED


class TestPathFamily:
    PATH = WeightedDigraph(3, ((0, 1, 1), (1, 2, 1)))

    def test_path_half2(self):
        assert family_of(self.PATH, 2).sets == (frozenset({0, 1, 2}),)

    def test_path_half1(self):
        fam = family_of(self.PATH, 1)
        assert sorted(map(sorted, fam.sets)) == [[0, 1], [1, 2]]
        assert fam.min_size == 2

    def test_k3_unit_weights_is_empty(self):
        k3 = WeightedDigraph(3, tuple((i, j, 1) for i in range(3) for j in range(3) if i != j))
        assert len(family_of(k3, 2)) == 0


class TestGreedy:
    def test_single_set(self):
        assert greedy_hitting_set([{0, 1, 2}], 3).members == (0,)

    def test_chain(self):
        assert greedy_hitting_set([{0, 1}, {1, 2}, {2, 3}], 4).members == (1, 2)

    def test_random_50_sets(self):
        rng = random.Random(2024)
        fam = PathFamily(tuple(frozenset(rng.sample(range(40), 5)) for _ in range(50)))
        got = greedy_hitting_set(fam, 40)
        assert hits_all(got.members, fam)
        assert greedy_size_bound(40, 5, 50) == 40 == got.size_bound
        assert len(got) <= 40

    def test_deterministic(self):
        rng = random.Random(8)
        fam = [frozenset(rng.sample(range(30), 4)) for _ in range(25)]
        assert greedy_hitting_set(fam, 30) == greedy_hitting_set(list(fam), 30)

    def test_empty_family(self):
        got = greedy_hitting_set([], 5)
        assert got.members == () and got.size_bound == 0

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            greedy_hitting_set([set()], 3)
