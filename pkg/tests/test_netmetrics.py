import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charrep.charnet import CoocNetwork
from charrep.errors import DataError
from charrep.fixtures import (
    oracle_betweenness,
    oracle_closeness,
    oracle_effective_size,
    oracle_weighted_degree,
    random_weighted_graph,
)
from charrep.netmetrics import (
    MetricVector,
    betweenness,
    closeness,
    effective_size,
    rank_shift,
    to_ranks,
    weighted_degree,
)


class TestPathGraph:
    # A - B - C with unit weights: every value is known in closed form.

    def test_weighted_degree(self, path_graph):
        assert weighted_degree(path_graph).scores == {"A": 1, "B": 2, "C": 1}

    def test_betweenness(self, path_graph):
        scores = betweenness(path_graph).scores
        assert scores == pytest.approx({"A": 0.0, "B": 1.0, "C": 0.0})

    def test_closeness_harmonic(self, path_graph):
        scores = closeness(path_graph).scores
        assert scores == pytest.approx({"A": 1.5, "B": 2.0, "C": 1.5})

    def test_effective_size(self, path_graph):
        scores = effective_size(path_graph).scores
        assert scores == pytest.approx({"A": 1.0, "B": 2.0, "C": 1.0})


class TestWeightedDistances:
    def test_heavy_edge_is_short(self):
        # distance uses 1/weight, so the weight-4 edge is the shortcut
        net = CoocNetwork()
        net.add_edge("A", "B", 4)
        net.add_edge("B", "C", 4)
        net.add_edge("A", "C", 1)
        # d(A, C) = min(1/1, 1/4 + 1/4) = 0.5 via B
        scores = closeness(net).scores
        assert scores["A"] == pytest.approx(1 / 0.25 + 1 / 0.5)
        assert betweenness(net).scores["B"] == pytest.approx(1.0)

    def test_tied_paths_split_credit(self):
        # square: two equal shortest paths between opposite corners
        net = CoocNetwork()
        for u, v in [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]:
            net.add_edge(u, v, 1)
        scores = betweenness(net).scores
        assert scores == pytest.approx({v: 0.5 for v in "ABCD"})

    def test_disconnected(self):
        net = CoocNetwork()
        net.add_edge("A", "B", 1)
        net.add_node("Z")
        scores = closeness(net).scores
        assert scores["Z"] == 0.0
        assert scores["A"] == 1.0


class TestOracleAgreement:
    @pytest.mark.parametrize("seed", range(5))
    def test_random_graphs(self, seed):
        net = random_weighted_graph(7, seed=seed)
        for prod, oracle in [
            (weighted_degree, oracle_weighted_degree),
            (betweenness, oracle_betweenness),
            (closeness, oracle_closeness),
            (effective_size, oracle_effective_size),
        ]:
            got = prod(net).scores
            want = oracle(net)
            assert got.keys() == want.keys()
            for v in want:
                assert got[v] == pytest.approx(want[v], abs=1e-9), (prod.__name__, v)


class TestRanks:
    def test_fractional_ties(self):
        m = MetricVector("deg", {"A": 3.0, "B": 1.0, "C": 3.0})
        assert to_ranks(m).ranks == {"A": 1.5, "C": 1.5, "B": 3.0}

    def test_rank_shift_sign(self):
        r1 = to_ranks(MetricVector("x", {"A": 1.0, "B": 2.0}))
        r2 = to_ranks(MetricVector("x", {"A": 2.0, "B": 1.0}))
        # A moved from rank 2 to rank 1: positive shift
        assert rank_shift(r1, r2) == {"A": 1.0, "B": -1.0}

    def test_rank_shift_intersection(self):
        r1 = to_ranks(MetricVector("x", {"A": 1.0, "B": 2.0}))
        r2 = to_ranks(MetricVector("x", {"B": 5.0, "C": 1.0}))
        assert set(rank_shift(r1, r2)) == {"B"}

    def test_rank_shift_empty_errors(self):
        r1 = to_ranks(MetricVector("x", {"A": 1.0}))
        r2 = to_ranks(MetricVector("x", {"B": 1.0}))
        with pytest.raises(DataError):
            rank_shift(r1, r2)

    @settings(max_examples=50, deadline=None)
    @given(st.dictionaries(st.sampled_from("ABCDEF"), st.integers(-5, 5), min_size=1))
    def test_monotone_transform_invariance(self, scores):
        m = MetricVector("x", {k: float(v) for k, v in scores.items()})
        stretched = MetricVector("x", {k: math.exp(v) for k, v in scores.items()})
        assert to_ranks(m).ranks == to_ranks(stretched).ranks

    @settings(max_examples=50, deadline=None)
    @given(st.dictionaries(st.sampled_from("ABCDEF"), st.floats(-5, 5), min_size=1))
    def test_rank_sum_conserved(self, scores):
        ranks = to_ranks(MetricVector("x", scores)).ranks
        n = len(scores)
        assert sum(ranks.values()) == pytest.approx(n * (n + 1) / 2)
