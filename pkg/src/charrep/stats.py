"""Statistical machinery: chi-square independence with Cramer's V,
weighted log-odds with an informative Dirichlet prior, and mean/SD
summaries of axis scores over term sets.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .axes import score_on_axis
from .errors import DataError, OOVError


@dataclass
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    cramers_v: float
    n: int


@dataclass
class LogOddsResult:
    term: str
    zeta: float
    delta: float
    variance: float


@dataclass
class AxisSummary:
    context_label: str
    axis: str
    mean: float
    sd: float
    n_terms: int


def chi_square_independence(table):
    """Pearson chi-square test of independence on a contingency table.

    p-value from the upper tail of the chi-square distribution (regularized
    incomplete gamma); effect size as Cramer's V.
    """
    obs = np.asarray(table, dtype=np.float64)
    if obs.ndim != 2 or obs.shape[0] < 2 or obs.shape[1] < 2:
        raise DataError("contingency table must be at least 2x2")
    if (obs < 0).any():
        raise DataError("counts must be non-negative")
    row = obs.sum(axis=1)
    col = obs.sum(axis=0)
    if (row == 0).any() or (col == 0).any():
        raise DataError("every row and column sum must be positive")
    n = obs.sum()
    expected = np.outer(row, col) / n
    statistic = float(((obs - expected) ** 2 / expected).sum())
    df = (obs.shape[0] - 1) * (obs.shape[1] - 1)
    p_value = float(gammaincc(df / 2.0, statistic / 2.0))
    cramers_v = math.sqrt(statistic / (n * min(obs.shape[0] - 1, obs.shape[1] - 1)))
    return ChiSquareResult(statistic, df, p_value, cramers_v, int(n))


def weighted_log_odds(counts_a, counts_b, prior_scale=None):
    """Monroe-style weighted log-odds over the union vocabulary.

    The Dirichlet prior spreads `prior_scale` pseudo-counts proportionally
    to pooled frequency; by default prior_scale is 1% of the pooled token
    count. Results are sorted by zeta descending (tie: term).
    """
    n_a = sum(counts_a.values())
    n_b = sum(counts_b.values())
    pooled_total = n_a + n_b
    if pooled_total == 0:
        raise DataError("pooled corpus is empty")
    if prior_scale is None:
        prior_scale = pooled_total * 0.01
    if prior_scale <= 0:
        raise DataError("prior_scale must be positive")

    vocabulary = set(counts_a) | set(counts_b)
    if len(vocabulary) < 2:
        # With one term the "rest of corpus" mass is zero and the odds
        # ratio is undefined.
        raise DataError("log-odds needs at least two distinct terms")
    a0 = prior_scale
    out = []
    for term in vocabulary:
        y_a = counts_a.get(term, 0)
        y_b = counts_b.get(term, 0)
        alpha = prior_scale * (y_a + y_b) / pooled_total
        delta = math.log((y_a + alpha) / (n_a + a0 - y_a - alpha)) - math.log(
            (y_b + alpha) / (n_b + a0 - y_b - alpha)
        )
        variance = 1.0 / (y_a + alpha) + 1.0 / (y_b + alpha)
        out.append(LogOddsResult(term, delta / math.sqrt(variance), delta, variance))
    out.sort(key=lambda r: (-r.zeta, r.term))
    return out


def select_distinctive(results, threshold=1.64):
    """Terms with zeta strictly above the threshold, highest first."""
    return [r.term for r in sorted(results, key=lambda r: (-r.zeta, r.term))
            if r.zeta > threshold]


def axis_summary(model, terms, axis, method, context_label=""):
    """Mean and sample SD of the axis scores of the scoreable terms."""
    values = []
    for term in terms:
        try:
            values.append(score_on_axis(model, term, axis, method).value)
        except OOVError:
            continue
    if len(values) < 2:
        raise DataError(
            f"axis summary needs >= 2 scoreable terms, got {len(values)}"
        )
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1))
    return AxisSummary(context_label, axis.name, mean, sd, len(values))
