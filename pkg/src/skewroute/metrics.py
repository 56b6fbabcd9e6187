"""Skewness statistics over a retrieval score vector.

All functions are pure and reentrant. Each statistic has a fixed
orientation mapping applied by :func:`difficulty_score` so that a larger
difficulty value always means a harder query:

========== ====================
metric     difficulty value
========== ====================
entropy    H (bits)
cumulative smallest k reaching the cumulative probability
area       area under the min-max normalized curve
gini       -Gini
slope      -alpha (negated log-log decay exponent)
========== ====================
"""

from __future__ import annotations

import numpy as np

from .core import DifficultyScore, MetricKind, MetricSpec, ScoreDistribution
from .errors import (
    DegenerateDistribution,
    InvalidProbability,
    NonPositiveScore,
    TooFewScores,
)


def normalize_probability(d: ScoreDistribution) -> np.ndarray:
    """Scores divided by their sum, order preserved (descending)."""
    if d.degenerate:
        raise DegenerateDistribution("cannot normalize an all-zero score vector")
    s = np.asarray(d.scores, dtype=np.float64)
    return s / s.sum()


def entropy(d: ScoreDistribution) -> float:
    """Shannon entropy in bits of the normalized scores; 0*log(0) := 0."""
    p = normalize_probability(d)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def gini(d: ScoreDistribution) -> float:
    """Gini coefficient of the scores, in [0, (K-1)/K].

    Uses the ascending-sort rank-weighted form; re-sorts internally so the
    stored descending order does not matter.
    """
    if d.degenerate:
        raise DegenerateDistribution("Gini is undefined for an all-zero score vector")
    s = np.sort(np.asarray(d.scores, dtype=np.float64))
    k = s.size
    weights = np.arange(k, 0, -1, dtype=np.float64)  # K - i + 1 for i = 1..K
    return float((k + 1 - 2.0 * (weights @ s) / s.sum()) / k)


def cumulative_k(d: ScoreDistribution, p: float = 0.95) -> int:
    """Smallest k whose cumulative normalized score reaches ``p``.

    The cumulative sum runs over the descending score order and the
    comparison is an exact >= with no epsilon.
    """
    if not 0.0 < p < 1.0:
        raise InvalidProbability(f"cumulative probability must be in (0, 1), got {p}")
    probs = normalize_probability(d)
    csum = np.cumsum(probs)
    idx = int(np.searchsorted(csum, p, side="left"))
    # Accumulated rounding can leave the final sum a hair below 1.
    return min(idx + 1, d.k)


def minmax_area(d: ScoreDistribution) -> float:
    """Area under the min-max normalized score curve (unit spacing).

    A flat vector has no min-max range; it is defined as K, the maximum
    area, since flat is the least skewed shape.
    """
    if d.k < 2:
        raise TooFewScores("area requires at least 2 scores")
    s = np.asarray(d.scores, dtype=np.float64)
    hi, lo = s[0], s[-1]
    if hi == lo:
        return float(d.k)
    return float(((s - lo) / (hi - lo)).sum())


def powerlaw_slope(d: ScoreDistribution) -> float:
    """Decay exponent alpha from an OLS fit of log(score) vs log(rank).

    Diagnostic only; requires strictly positive scores.
    """
    if d.k < 2:
        raise TooFewScores("slope fit requires at least 2 scores")
    s = np.asarray(d.scores, dtype=np.float64)
    if np.any(s <= 0.0):
        raise NonPositiveScore("slope fit requires all scores > 0")
    x = np.log(np.arange(1, d.k + 1, dtype=np.float64))
    y = np.log(s)
    xc = x - x.mean()
    slope = float((xc @ (y - y.mean())) / (xc @ xc))
    return -slope


def difficulty_score(d: ScoreDistribution, m: MetricSpec) -> DifficultyScore:
    """Dispatch to the chosen metric and apply its difficulty orientation."""
    if m.kind is MetricKind.ENTROPY:
        return DifficultyScore(entropy(d))
    if m.kind is MetricKind.CUMULATIVE:
        return DifficultyScore(float(cumulative_k(d, m.cumulative_probability)))
    if m.kind is MetricKind.AREA:
        return DifficultyScore(minmax_area(d))
    if m.kind is MetricKind.GINI:
        return DifficultyScore(-gini(d))
    if m.kind is MetricKind.SLOPE:
        return DifficultyScore(-powerlaw_slope(d))
    raise ValueError(f"unknown metric kind {m.kind!r}")
