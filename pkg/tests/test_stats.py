import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charrep.axes import AxisLexicon
from charrep.errors import DataError
from charrep.fixtures import oracle_log_odds
from charrep.stats import (
    axis_summary,
    chi_square_independence,
    select_distinctive,
    weighted_log_odds,
)
from tests.conftest import make_model


class TestChiSquare:
    def test_independent_table(self):
        res = chi_square_independence([[10, 10], [10, 10]])
        assert res.statistic == 0.0
        assert res.cramers_v == 0.0
        assert res.p_value == pytest.approx(1.0)

    def test_hand_derived_case(self):
        res = chi_square_independence([[10, 20], [20, 10]])
        assert res.statistic == pytest.approx(20 / 3, abs=1e-12)
        assert res.df == 1
        assert res.cramers_v == pytest.approx(math.sqrt((20 / 3) / 60), abs=1e-12)
        assert res.p_value == pytest.approx(0.009823, abs=1e-6)

    def test_df_formula(self):
        res = chi_square_independence([[5, 5, 5], [5, 5, 5], [1, 2, 3]])
        assert res.df == 4

    def test_zero_marginal_rejected(self):
        with pytest.raises(DataError):
            chi_square_independence([[0, 0], [1, 2]])

    def test_too_small_table_rejected(self):
        with pytest.raises(DataError):
            chi_square_independence([[1, 2]])


class TestLogOdds:
    def test_identical_counts_zero(self):
        counts = {"w": 10, "x": 5}
        for res in weighted_log_odds(counts, dict(counts)):
            assert res.delta == 0.0 and res.zeta == 0.0

    def test_spec_example_matches_oracle(self):
        a = {"w": 10, "other": 90}
        b = {"w": 1, "other": 99}
        got = {r.term: r.zeta for r in weighted_log_odds(a, b, prior_scale=10)}
        want = oracle_log_odds(a, b, prior_scale=10)
        for term, (zeta, _, _) in want.items():
            assert got[term] == pytest.approx(zeta, abs=1e-9)
        assert got["w"] > 1.64  # "w" is distinctly corpus-a

    def test_sorted_by_zeta(self):
        a = {"x": 30, "y": 1, "z": 10}
        b = {"x": 1, "y": 30, "z": 10}
        results = weighted_log_odds(a, b)
        zetas = [r.zeta for r in results]
        assert zetas == sorted(zetas, reverse=True)

    @settings(max_examples=40, deadline=None)
    @given(st.dictionaries(st.sampled_from("abcde"), st.integers(1, 50), min_size=1),
           st.dictionaries(st.sampled_from("abcde"), st.integers(1, 50), min_size=1))
    def test_antisymmetry(self, counts_a, counts_b):
        if len(set(counts_a) | set(counts_b)) < 2:
            with pytest.raises(DataError):
                weighted_log_odds(counts_a, counts_b)
            return
        fwd = {r.term: r for r in weighted_log_odds(counts_a, counts_b)}
        rev = {r.term: r for r in weighted_log_odds(counts_b, counts_a)}
        for term, r in fwd.items():
            assert rev[term].delta == -r.delta
            assert rev[term].zeta == -r.zeta

    def test_default_prior_is_one_percent(self):
        a = {"w": 30, "x": 20}
        b = {"w": 20, "x": 30}
        explicit = weighted_log_odds(a, b, prior_scale=1.0)  # 1% of 100 tokens
        default = weighted_log_odds(a, b)
        for e, d in zip(explicit, default):
            assert (d.term, d.zeta, d.variance) == (e.term, e.zeta, e.variance)


class TestSelection:
    def test_all_zero_empty(self):
        results = weighted_log_odds({"w": 3, "x": 2}, {"w": 3, "x": 2})
        assert select_distinctive(results) == []

    def test_strict_threshold(self):
        from charrep.stats import LogOddsResult
        results = [LogOddsResult("a", 2.0, 0, 1), LogOddsResult("b", 1.64, 0, 1),
                   LogOddsResult("c", 1.7, 0, 1)]
        assert select_distinctive(results) == ["a", "c"]


class TestAxisSummary:
    AXIS = AxisLexicon("tone", ("l",), ("r",))

    def model(self):
        return make_model({
            "l": [1.0, 0.0], "r": [-1.0, 0.0],
            "p": [1.0, 0.0], "q": [-1.0, 0.0], "m": [0.0, 1.0],
        })

    def test_mean_and_sample_sd(self):
        # semaxis scores: p -> +1, q -> -1; mean 0, sample sd sqrt(2)
        summary = axis_summary(self.model(), ["p", "q"], self.AXIS, "semaxis",
                               context_label="ctx")
        assert summary.mean == pytest.approx(0.0, abs=1e-12)
        assert summary.sd == pytest.approx(math.sqrt(2), abs=1e-12)
        assert summary.n_terms == 2
        assert summary.context_label == "ctx"

    def test_equal_scores_sd_zero(self):
        summary = axis_summary(self.model(), ["p", "p"], self.AXIS, "semaxis")
        assert summary.sd == 0.0

    def test_oov_terms_skipped(self):
        summary = axis_summary(self.model(), ["p", "q", "zzz"], self.AXIS, "rnd")
        assert summary.n_terms == 2

    def test_too_few_terms_errors(self):
        with pytest.raises(DataError):
            axis_summary(self.model(), ["p", "zzz"], self.AXIS, "semaxis")


def test_single_term_vocabulary_rejected():
    with pytest.raises(DataError):
        weighted_log_odds({"a": 1}, {"a": 2})
