"""Semantic-axis scoring: SemAxis and Relative Norm Distance.

An axis is a pair of opposing seed-word sets. Both methods share one sign
convention: higher values mean closer to the LEFT pole, so a single ranking
routine (1 = closest to the left pole) serves both.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError, OOVError
from .netmetrics import MetricVector, rank_shift, to_ranks

__all__ = [
    "AxisLexicon", "AxisScore", "semaxis_score", "rnd_score",
    "rank_on_axis", "rank_shift", "load_axis_lexicon",
]

METHODS = ("semaxis", "rnd")


@dataclass(frozen=True)
class AxisLexicon:
    name: str
    left: tuple
    right: tuple

    def __post_init__(self):
        if not self.left or not self.right:
            raise DataError(f"axis {self.name!r}: both poles need seed words")
        if set(self.left) & set(self.right):
            raise DataError(f"axis {self.name!r}: pole seed lists overlap")

    def swapped(self):
        return AxisLexicon(self.name, self.right, self.left)


@dataclass(frozen=True)
class AxisScore:
    word: str
    method: str
    value: float


def load_axis_lexicon(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return AxisLexicon(data["name"], tuple(data["left"]), tuple(data["right"]))


def _pole_mean(model, words, which, axis_name):
    """Mean of the length-normalized seed vectors; absent seeds are skipped."""
    vecs = []
    for w in words:
        if w in model:
            v = model.vector(w)
            n = np.linalg.norm(v)
            if n > 0:
                vecs.append(v / n)
    if not vecs:
        raise OOVError(f"axis {axis_name!r}: every {which}-pole seed is out of vocabulary")
    return np.mean(vecs, axis=0)


def semaxis_score(model, word, axis):
    """Cosine of the word vector with (left pole mean - right pole mean)."""
    v = model.vector(word)
    direction = _pole_mean(model, axis.left, "left", axis.name) - _pole_mean(
        model, axis.right, "right", axis.name
    )
    denom = np.linalg.norm(v) * np.linalg.norm(direction)
    value = 0.0 if denom == 0 else float(v @ direction / denom)
    return AxisScore(word, "semaxis", value)


def rnd_score(model, word, axis):
    """Distance-to-right-pole minus distance-to-left-pole (positive = left)."""
    v = model.vector(word)
    left = _pole_mean(model, axis.left, "left", axis.name)
    right = _pole_mean(model, axis.right, "right", axis.name)
    value = float(np.linalg.norm(v - right) - np.linalg.norm(v - left))
    return AxisScore(word, "rnd", value)


def score_on_axis(model, word, axis, method):
    if method == "semaxis":
        return semaxis_score(model, word, axis)
    if method == "rnd":
        return rnd_score(model, word, axis)
    raise DataError(f"unknown axis method: {method!r}")


def rank_on_axis(model, words, axis, method):
    """Ranks on the axis, 1 = closest to the left pole, fractional ties."""
    scores = {w: score_on_axis(model, w, axis, method).value for w in words}
    return to_ranks(MetricVector(f"{axis.name}:{method}", scores))
