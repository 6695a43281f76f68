"""Orthogonal Procrustes alignment between two embedding models.

Rows over the shared vocabulary are mean-centered and length-normalized,
then the rotation minimizing the Frobenius distance from source to target
is recovered from the SVD of the cross-covariance. Cross-model cosines of
character names (and of axis seed words, for the stability check) are
computed between rotated source vectors and target vectors.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DataError


def _preprocess(rows):
    rows = rows - rows.mean(axis=0)
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return rows / norms


@dataclass
class AlignedPair:
    rotation: np.ndarray  # dim x dim orthogonal
    source_model: object
    target_model: object
    shared_vocab: list
    source_aligned: np.ndarray  # preprocessed source rows, rotated
    target_vectors: np.ndarray  # preprocessed target rows

    def __post_init__(self):
        self._index = {tok: i for i, tok in enumerate(self.shared_vocab)}

    def shared_index(self, token):
        i = self._index.get(token)
        if i is None:
            raise DataError(f"word {token!r} is not in the shared vocabulary")
        return i


def procrustes_align(source, target):
    """Fit the orthogonal map from source to target over shared vocabulary."""
    shared = [tok for tok, _ in source.vocab if tok in target.index]
    dim = source.dim
    if target.dim != dim:
        raise AlignmentError(f"dimension mismatch: {dim} vs {target.dim}")
    if len(shared) < dim:
        raise AlignmentError(
            f"shared vocabulary has {len(shared)} tokens; need at least dim={dim}"
        )
    a = _preprocess(np.stack([source.vector(t) for t in shared]))
    b = _preprocess(np.stack([target.vector(t) for t in shared]))
    m = a.T @ b
    u, s, vt = np.linalg.svd(m)
    if s[0] == 0 or s[-1] < 1e-12 * s[0]:
        raise AlignmentError(
            f"cross-covariance is rank-deficient (smallest singular value {s[-1]:.3e})"
        )
    rotation = u @ vt
    return AlignedPair(
        rotation=rotation,
        source_model=source,
        target_model=target,
        shared_vocab=shared,
        source_aligned=a @ rotation,
        target_vectors=b,
    )


def _cosine_at(pair, token):
    i = pair.shared_index(token)
    x, y = pair.source_aligned[i], pair.target_vectors[i]
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        return 0.0
    return float(x @ y / (nx * ny))


def cross_model_similarity(pair, names):
    """Cosine between each name's rotated source vector and target vector."""
    return {name: _cosine_at(pair, name) for name in names}


@dataclass
class SeedStabilityReport:
    pole_averages: dict  # (axis name, "left"|"right") -> mean cosine
    baseline_average: float
    skipped: int  # seed/baseline words absent from the shared vocabulary


def seed_stability_report(pair, axes, baseline_words):
    """Average cross-model cosine per axis pole, plus a baseline average."""
    if not baseline_words:
        raise DataError("baseline word list is empty")
    skipped = 0
    pole_averages = {}
    for axis in axes:
        for pole, words in (("left", axis.left), ("right", axis.right)):
            present = [w for w in words if w in pair._index]
            skipped += len(words) - len(present)
            if not present:
                raise DataError(f"axis {axis.name!r}: no {pole}-pole seed in shared vocabulary")
            pole_averages[(axis.name, pole)] = float(
                np.mean([_cosine_at(pair, w) for w in present])
            )
    base_present = [w for w in baseline_words if w in pair._index]
    skipped += len(baseline_words) - len(base_present)
    if not base_present:
        raise DataError("no baseline word is in the shared vocabulary")
    baseline = float(np.mean([_cosine_at(pair, w) for w in base_present]))
    return SeedStabilityReport(pole_averages, baseline, skipped)
