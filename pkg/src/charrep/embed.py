"""Skip-gram-with-negative-sampling embeddings, trained per source corpus.

Training is plain SGD over (center, context) pairs with a dynamic window,
frequency subsampling, and unigram^0.75 negative sampling. Single-worker
training is deterministic given the seed; that is the contractual mode for
everything downstream.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import DataError, FormatError, OOVError


@dataclass
class TrainConfig:
    dim: int = 100
    window: int = 5
    min_count: int = 5
    negative: int = 5
    epochs: int = 5
    lr_start: float = 0.025
    lr_end: float = 1e-4
    subsample_t: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        for name in ("dim", "window", "min_count", "negative"):
            if getattr(self, name) < 1:
                raise DataError(f"{name} must be >= 1")
        if self.epochs < 0:
            raise DataError("epochs must be >= 0")
        if self.lr_end >= self.lr_start:
            raise DataError("lr_end must be < lr_start")


class EmbeddingModel:
    def __init__(self, vocab, input_vectors, output_vectors):
        # vocab: list of (token, frequency), row order matching the matrices
        self.vocab = list(vocab)
        self.index = {tok: i for i, (tok, _) in enumerate(self.vocab)}
        if len(self.index) != len(self.vocab):
            raise DataError("vocabulary tokens must be unique")
        self.input_vectors = np.asarray(input_vectors, dtype=np.float64)
        self.output_vectors = np.asarray(output_vectors, dtype=np.float64)
        if not (np.isfinite(self.input_vectors).all() and np.isfinite(self.output_vectors).all()):
            raise DataError("embedding matrices must be finite")

    @property
    def dim(self):
        return self.input_vectors.shape[1]

    def __contains__(self, token):
        return token in self.index

    def vector(self, token):
        i = self.index.get(token)
        if i is None:
            raise OOVError(f"word {token!r} is not in the vocabulary")
        return self.input_vectors[i]

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"sgns {len(self.vocab)} {self.dim}\n")
            for matrix in (self.input_vectors, self.output_vectors):
                for (tok, freq), row in zip(self.vocab, matrix):
                    vals = " ".join(f"{x:.17g}" for x in row)
                    fh.write(f"{tok} {freq} {vals}\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 3 or header[0] != "sgns":
                raise FormatError("expected header 'sgns <|V|> <dim>'", line=1)
            size, dim = int(header[1]), int(header[2])
            vocab = []
            mats = []
            for block in range(2):
                rows = np.empty((size, dim))
                for i in range(size):
                    lineno = 2 + block * size + i
                    parts = fh.readline().split()
                    if len(parts) != 2 + dim:
                        raise FormatError("bad vector line", line=lineno)
                    if block == 0:
                        vocab.append((parts[0], int(parts[1])))
                    rows[i] = [float(x) for x in parts[2:]]
                mats.append(rows)
        return cls(vocab, mats[0], mats[1])


def build_vocab(units, min_count):
    """Tokens with corpus frequency >= min_count, most frequent first."""
    freq = Counter()
    for unit in units:
        freq.update(unit)
    if not freq:
        raise DataError("corpus contains no tokens")
    kept = [(tok, c) for tok, c in freq.items() if c >= min_count]
    kept.sort(key=lambda kv: (-kv[1], kv[0]))
    return kept


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500, 500)))


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def sgns_pair_step(center_vec, context_vec, negative_vecs, lr):
    """One SGD step on a single (center, context, negatives) instance.

    Returns the loss *before* the update together with updated copies of
    all three inputs. Loss: -log s(u.v) - sum over negatives of log s(-un.v).
    """
    if lr <= 0:
        raise DataError("learning rate must be positive")
    v = np.array(center_vec, dtype=np.float64)
    u = np.array(context_vec, dtype=np.float64)
    negs = np.array(negative_vecs, dtype=np.float64).reshape(-1, v.shape[0])

    pos_score = float(u @ v)
    neg_scores = negs @ v
    loss = float(-_log_sigmoid(pos_score) - _log_sigmoid(-neg_scores).sum())

    g_pos = _sigmoid(pos_score) - 1.0
    g_neg = _sigmoid(neg_scores)
    grad_v = g_pos * u + g_neg @ negs
    u_new = u - lr * g_pos * v
    negs_new = negs - lr * np.outer(g_neg, v)
    v_new = v - lr * grad_v
    return loss, (v_new, u_new, negs_new)


def _keep_probs(freqs, total, t):
    """Per-token retention probabilities for frequency subsampling."""
    if not math.isfinite(t) or t <= 0:
        return np.ones(len(freqs))
    rel = freqs / total
    p = (np.sqrt(rel / t) + 1.0) * (t / rel)
    return np.minimum(p, 1.0)


def negative_sampling_cdf(freqs):
    """Cumulative distribution over the vocabulary, proportional to f^0.75."""
    weights = np.asarray(freqs, dtype=np.float64) ** 0.75
    return np.cumsum(weights / weights.sum())


def train(units, config=None):
    """Train an SGNS model over token-sequence units.

    Windows never cross unit boundaries. Deterministic for a fixed seed.
    Per-epoch mean losses are attached to the model as `epoch_losses`.
    """
    config = config or TrainConfig()
    vocab = build_vocab(units, config.min_count)
    if not vocab:
        raise DataError(f"no token reaches min_count={config.min_count}")
    index = {tok: i for i, (tok, _) in enumerate(vocab)}
    freqs = np.array([c for _, c in vocab], dtype=np.float64)
    total_tokens = freqs.sum()
    keep = _keep_probs(freqs, total_tokens, config.subsample_t)
    cdf = negative_sampling_cdf(freqs)

    unit_ids = [[index[t] for t in unit if t in index] for unit in units]
    unit_ids = [u for u in unit_ids if u]
    total_positions = config.epochs * sum(len(u) for u in unit_ids)

    rng = np.random.default_rng(config.seed % (2**63))
    w_in = (rng.random((len(vocab), config.dim)) - 0.5) / config.dim
    w_out = np.zeros((len(vocab), config.dim))

    lr_span = config.lr_start - config.lr_end
    tick = 0
    epoch_losses = []
    for _ in range(config.epochs):
        epoch_loss, epoch_pairs = 0.0, 0
        for unit in unit_ids:
            kept = []
            for w in unit:
                lr = config.lr_start - lr_span * (tick / max(total_positions, 1))
                tick += 1
                if keep[w] >= 1.0 or rng.random() < keep[w]:
                    kept.append((w, max(lr, config.lr_end)))
            for i, (center, lr) in enumerate(kept):
                reach = int(rng.integers(1, config.window + 1))
                lo, hi = max(0, i - reach), min(len(kept), i + reach + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = kept[j][0]
                    neg_ids = np.searchsorted(cdf, rng.random(config.negative))
                    neg_ids = neg_ids[neg_ids != context]

                    v = w_in[center]
                    u = w_out[context]
                    negs = w_out[neg_ids]
                    pos_score = float(u @ v)
                    neg_scores = negs @ v
                    epoch_loss += float(
                        -_log_sigmoid(pos_score) - _log_sigmoid(-neg_scores).sum()
                    )
                    epoch_pairs += 1

                    g_pos = _sigmoid(pos_score) - 1.0
                    g_neg = _sigmoid(neg_scores)
                    grad_v = g_pos * u + g_neg @ negs
                    w_out[context] = u - lr * g_pos * v
                    np.add.at(w_out, neg_ids, -lr * np.outer(g_neg, v))
                    w_in[center] = v - lr * grad_v
        epoch_losses.append(epoch_loss / max(epoch_pairs, 1))

    model = EmbeddingModel(vocab, w_in, w_out)
    model.epoch_losses = epoch_losses
    return model


def cosine(model, w1, w2):
    """Cosine similarity of two words' input vectors."""
    a, b = model.vector(w1), model.vector(w2)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(a @ b / (na * nb))
