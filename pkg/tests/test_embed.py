import math

import numpy as np
import pytest
from scipy import stats

from charrep.embed import (
    EmbeddingModel,
    TrainConfig,
    _keep_probs,
    build_vocab,
    cosine,
    negative_sampling_cdf,
    sgns_pair_step,
    train,
)
from charrep.errors import DataError, OOVError
from charrep.fixtures import finite_difference_gradients, oracle_sgns_loss
from tests.conftest import make_model


class TestConfig:
    def test_lr_order_enforced(self):
        with pytest.raises(DataError):
            TrainConfig(lr_start=0.001, lr_end=0.01)

    def test_bad_dim(self):
        with pytest.raises(DataError):
            TrainConfig(dim=0)


class TestVocab:
    def test_min_count_filter(self):
        vocab = build_vocab([["a", "a", "a", "b"]], min_count=2)
        assert vocab == [("a", 3)]

    def test_min_count_one_keeps_all(self):
        vocab = build_vocab([["b", "a"]], min_count=1)
        assert dict(vocab) == {"a": 1, "b": 1}

    def test_frequency_ties_lexicographic(self):
        vocab = build_vocab([["z", "m", "a"]], min_count=1)
        assert [t for t, _ in vocab] == ["a", "m", "z"]


class TestPairStep:
    def test_orthogonal_loss_is_ln2(self):
        v = np.array([1.0, 0.0])
        u = np.array([0.0, 1.0])
        loss, _ = sgns_pair_step(v, u, np.empty((0, 2)), lr=0.01)
        assert loss == pytest.approx(math.log(2), abs=1e-12)

    def test_saturated_loss_vanishes(self):
        v = np.array([50.0, 0.0])
        u = np.array([1.0, 0.0])
        loss, _ = sgns_pair_step(v, u, np.empty((0, 2)), lr=0.01)
        assert loss < 1e-9

    def test_matches_loss_oracle(self):
        rng = np.random.default_rng(0)
        v, u = rng.normal(size=10), rng.normal(size=10)
        negs = rng.normal(size=(3, 10))
        loss, _ = sgns_pair_step(v, u, negs, lr=0.01)
        assert loss == pytest.approx(oracle_sgns_loss(v, u, negs), rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_gradients_match_finite_differences(self, seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(scale=0.5, size=10)
        u = rng.normal(scale=0.5, size=10)
        negs = rng.normal(scale=0.5, size=(4, 10))
        lr = 1e-3
        _, (v2, u2, negs2) = sgns_pair_step(v, u, negs, lr=lr)
        gv, gu, gn = finite_difference_gradients(v, u, negs)
        assert np.allclose((v - v2) / lr, gv, rtol=1e-5, atol=1e-8)
        assert np.allclose((u - u2) / lr, gu, rtol=1e-5, atol=1e-8)
        assert np.allclose((negs - negs2) / lr, gn, rtol=1e-5, atol=1e-8)


class TestSampling:
    def test_keep_probs_infinite_t_keeps_everything(self):
        p = _keep_probs(np.array([100.0, 1.0]), 101.0, math.inf)
        assert np.all(p == 1.0)

    def test_keep_probs_rare_tokens_kept(self):
        # token at exactly frequency t is always kept
        p = _keep_probs(np.array([1.0]), 1000.0, t=1e-3)
        assert p[0] >= 1.0

    def test_cdf_three_quarter_power(self):
        freqs = np.array([8.0, 1.0])
        cdf = negative_sampling_cdf(freqs)
        # 8^0.75 : 1^0.75 split
        w = 8 ** 0.75
        assert cdf[0] == pytest.approx(w / (w + 1))
        assert cdf[-1] == pytest.approx(1.0)

    def test_draws_follow_unigram_power(self):
        freqs = np.array([1000.0, 300.0, 60.0, 9.0])
        cdf = negative_sampling_cdf(freqs)
        rng = np.random.default_rng(42)
        draws = np.searchsorted(cdf, rng.random(200_000), side="right")
        observed = np.bincount(draws, minlength=4)
        weights = freqs ** 0.75
        expected = weights / weights.sum() * len(draws)
        _, p = stats.chisquare(observed, expected)
        assert p > 0.01


class TestTrain:
    UNITS = [["cat", "dog", "fish", "bird"] * 5 for _ in range(20)]

    def cfg(self, **kw):
        base = dict(dim=8, window=2, min_count=1, negative=2, epochs=2,
                    subsample_t=math.inf, seed=9)
        base.update(kw)
        return TrainConfig(**base)

    def test_deterministic(self):
        m1 = train(self.UNITS, self.cfg())
        m2 = train(self.UNITS, self.cfg())
        assert np.array_equal(m1.input_vectors, m2.input_vectors)
        assert np.array_equal(m1.output_vectors, m2.output_vectors)

    def test_zero_epochs_equal_init(self):
        m0 = train(self.UNITS, self.cfg(epochs=0))
        # init: inputs uniform within +-0.5/dim, outputs zero
        assert np.all(np.abs(m0.input_vectors) <= 0.5 / 8)
        assert np.all(m0.output_vectors == 0.0)

    def test_loss_decreases(self):
        model = train(self.UNITS, self.cfg(epochs=4))
        assert model.epoch_losses[-1] < model.epoch_losses[0]

    def test_seed_changes_vectors(self):
        m1 = train(self.UNITS, self.cfg())
        m2 = train(self.UNITS, self.cfg(seed=10))
        assert not np.array_equal(m1.input_vectors, m2.input_vectors)


class TestModelIO:
    def test_save_load_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        model = EmbeddingModel([("a", 5), ("b", 2)], rng.normal(size=(2, 3)),
                               rng.normal(size=(2, 3)))
        path = tmp_path / "m.vec"
        model.save(path)
        back = EmbeddingModel.load(path)
        assert back.vocab == model.vocab
        assert np.array_equal(back.input_vectors, model.input_vectors)
        assert np.array_equal(back.output_vectors, model.output_vectors)

    def test_oov_raises(self):
        model = make_model({"a": [1.0, 0.0]})
        with pytest.raises(OOVError):
            model.vector("zzz")


class TestCosine:
    def test_identity(self):
        model = make_model({"w": [0.3, 0.4]})
        assert cosine(model, "w", "w") == pytest.approx(1.0)

    def test_orthogonal(self):
        model = make_model({"a": [1.0, 0.0], "b": [0.0, 2.0]})
        assert cosine(model, "a", "b") == pytest.approx(0.0)

    def test_antiparallel(self):
        model = make_model({"a": [1.0, 0.0], "b": [-3.0, 0.0]})
        assert cosine(model, "a", "b") == pytest.approx(-1.0)
