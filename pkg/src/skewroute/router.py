"""Threshold routing and quantile calibration.

The decision rule follows the two-arm convention "difficulty <= threshold
goes cheap"; ties at a threshold always fall to the cheaper arm, biasing
toward cost savings. With N arms the same rule generalizes to N-1 ordered
thresholds over one difficulty score.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from .core import DifficultyScore, MetricKind, RouterConfig, ScoreDistribution
from .errors import EmptyCalibrationSet, InvalidTargets
from .metrics import difficulty_score


@dataclass(frozen=True)
class Decision:
    """The routing outcome for one query."""

    arm_name: str
    arm_rank: int
    difficulty: DifficultyScore
    metric_kind: MetricKind


@dataclass(frozen=True)
class CalibrationReport:
    """Thresholds chosen from a calibration corpus plus the ratios they achieve."""

    thresholds: tuple[float, ...]
    achieved_ratios: tuple[float, ...]
    target_ratios: tuple[float, ...]


def rank_for(value: float, thresholds: Sequence[float]) -> int:
    """Arm rank = number of thresholds strictly less than the difficulty value."""
    return bisect_left(list(thresholds), value)


def decide(d: ScoreDistribution, cfg: RouterConfig) -> Decision:
    """Route one score distribution under a calibrated config."""
    v = difficulty_score(d, cfg.metric)
    rank = rank_for(v.value, cfg.thresholds)
    arm = cfg.arms[rank]
    return Decision(arm_name=arm.name, arm_rank=arm.rank, difficulty=v, metric_kind=cfg.metric.kind)


def _validate_targets(target_ratios: Sequence[float]) -> list[float]:
    ratios = [float(r) for r in target_ratios]
    if len(ratios) < 2:
        raise InvalidTargets("need at least 2 per-arm target ratios")
    if any(r < 0.0 for r in ratios):
        raise InvalidTargets("target ratios must be non-negative")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise InvalidTargets(f"target ratios must sum to 1, got {sum(ratios)}")
    masses = []
    acc = 0.0
    for r in ratios[:-1]:
        acc += r
        masses.append(acc)
    prev = 0.0
    for q in masses:
        if not prev < q < 1.0:
            raise InvalidTargets(
                "cumulative cheap-side masses must be strictly increasing within (0, 1)"
            )
        prev = q
    return ratios


def calibrate(
    difficulties: Sequence[float], target_ratios: Sequence[float]
) -> CalibrationReport:
    """Pick thresholds as empirical quantiles of difficulty scores.

    ``target_ratios`` gives the desired fraction of the corpus per arm,
    cheapest first. Threshold j is the corpus value at cumulative
    cheap-side mass q_j, using the lower-value-at-or-below-the-quantile
    convention. With tied difficulty values the cheap side may exceed its
    target; the achieved ratios in the report record the actual split.
    """
    if len(difficulties) == 0:
        raise EmptyCalibrationSet("no difficulty values to calibrate on")
    ratios = _validate_targets(target_ratios)

    values = sorted(float(v) for v in difficulties)
    n = len(values)
    thresholds = []
    acc = 0.0
    for r in ratios[:-1]:
        acc += r
        idx = int(math.ceil(acc * n - 1e-9)) - 1
        thresholds.append(values[max(idx, 0)])

    counts = [0] * len(ratios)
    for v in values:
        counts[rank_for(v, thresholds)] += 1
    achieved = tuple(c / n for c in counts)
    return CalibrationReport(
        thresholds=tuple(thresholds),
        achieved_ratios=achieved,
        target_ratios=tuple(ratios),
    )
