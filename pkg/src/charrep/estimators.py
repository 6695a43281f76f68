"""Scikit-learn-style wrappers around the fit-shaped algorithms.

These expose get_params/set_params and the usual fitted-attribute
convention so the trainers compose with sklearn tooling; the functional
API in the sibling modules remains the primary surface.
"""

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import align as align_mod
from . import embed as embed_mod
from .coreperiphery import CorePeripheryParams, core_periphery_scores


def _check_fitted(est, attr):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet")


class SkipGramEmbedding(BaseEstimator):
    """SGNS trainer over token-sequence units."""

    def __init__(self, dim=100, window=5, min_count=5, negative=5, epochs=5,
                 lr_start=0.025, lr_end=1e-4, subsample_t=1e-3, seed=0):
        self.dim = dim
        self.window = window
        self.min_count = min_count
        self.negative = negative
        self.epochs = epochs
        self.lr_start = lr_start
        self.lr_end = lr_end
        self.subsample_t = subsample_t
        self.seed = seed

    def fit(self, X, y=None):
        """X: iterable of token sequences (one unit per element)."""
        config = embed_mod.TrainConfig(
            dim=self.dim, window=self.window, min_count=self.min_count,
            negative=self.negative, epochs=self.epochs, lr_start=self.lr_start,
            lr_end=self.lr_end, subsample_t=self.subsample_t, seed=self.seed,
        )
        self.model_ = embed_mod.train(list(X), config)
        return self

    def transform(self, words):
        """Input vectors for the given words, stacked in order."""
        _check_fitted(self, "model_")
        import numpy as np

        return np.stack([self.model_.vector(w) for w in words])

    def similarity(self, w1, w2):
        _check_fitted(self, "model_")
        return embed_mod.cosine(self.model_, w1, w2)


class CorePeripheryScorer(BaseEstimator):
    """Aggregate coreness scores via annealed core-quality maximization."""

    def __init__(self, alpha_grid=CorePeripheryParams().alpha_grid,
                 beta_grid=CorePeripheryParams().beta_grid, anneal_steps=None,
                 initial_temperature=1.0, cooling_rate=0.995, seed=0):
        self.alpha_grid = alpha_grid
        self.beta_grid = beta_grid
        self.anneal_steps = anneal_steps
        self.initial_temperature = initial_temperature
        self.cooling_rate = cooling_rate
        self.seed = seed

    def fit(self, X, y=None):
        """X: a CoocNetwork."""
        params = CorePeripheryParams(
            alpha_grid=tuple(self.alpha_grid), beta_grid=tuple(self.beta_grid),
            anneal_steps=self.anneal_steps,
            initial_temperature=self.initial_temperature,
            cooling_rate=self.cooling_rate, seed=self.seed,
        )
        self.scores_ = core_periphery_scores(X, params).scores
        return self

    def predict(self, nodes):
        _check_fitted(self, "scores_")
        return [self.scores_[v] for v in nodes]


class ProcrustesAligner(BaseEstimator):
    """Orthogonal map from a source embedding model onto a target model."""

    def fit(self, X, y):
        """X: source EmbeddingModel; y: target EmbeddingModel."""
        self.pair_ = align_mod.procrustes_align(X, y)
        self.rotation_ = self.pair_.rotation
        return self

    def transform(self, vectors):
        _check_fitted(self, "rotation_")
        return vectors @ self.rotation_

    def similarity(self, names):
        _check_fitted(self, "pair_")
        return align_mod.cross_model_similarity(self.pair_, names)
