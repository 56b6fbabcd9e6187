"""Offline evaluation harness: Hit@1 under routing, the analytic random
baseline, average effectiveness over a budget sweep, cost accounting, and
difficulty-correlation grouping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Arm, MetricSpec, QueryRecord
from .errors import (
    InvalidConfig,
    LengthMismatch,
    MissingArm,
    MissingLabel,
    MissingSweepPoint,
    OutOfRange,
    TooFewRecords,
)
from .metrics import difficulty_score
from .router import Decision, calibrate, rank_for

INTERIOR_FRACTIONS = (0.2, 0.4, 0.6, 0.8)
DEFAULT_SWEEP_FRACTIONS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)

# Mean prompt size observed for 100 retrieved contexts; used as the default
# token count in per-query cost accounting.
DEFAULT_TOKENS_PER_QUERY = 1873.0


@dataclass(frozen=True)
class CurvePoint:
    large_fraction: float
    hit_at_1: float
    avg_cost: float


@dataclass(frozen=True)
class BudgetCurve:
    """Hit@1 and mean cost at each target fraction of large-arm calls."""

    points: tuple[CurvePoint, ...]

    def __post_init__(self):
        fracs = [p.large_fraction for p in self.points]
        if any(b <= a for a, b in zip(fracs, fracs[1:])):
            raise InvalidConfig("curve fractions must be strictly increasing")

    def point_at(self, fraction: float, tol: float = 1e-9) -> CurvePoint:
        for p in self.points:
            if abs(p.large_fraction - fraction) <= tol:
                return p
        raise MissingSweepPoint(f"curve has no point at fraction {fraction}")


@dataclass(frozen=True)
class GroupStats:
    group_index: int
    count: int
    answer_rank_mean: float
    answer_rank_quartiles: tuple[float, float, float]


@dataclass(frozen=True)
class CorrelationReport:
    """Answer-rank statistics per difficulty group, easiest group first."""

    groups: tuple[GroupStats, ...]


def hit_at_1(records: Sequence[QueryRecord], decisions: Sequence[Decision]) -> float:
    """Fraction of records whose chosen arm is labeled correct."""
    if len(records) == 0:
        raise LengthMismatch("empty record list")
    if len(records) != len(decisions):
        raise LengthMismatch(
            f"{len(records)} records but {len(decisions)} decisions"
        )
    hits = 0
    for rec, dec in zip(records, decisions):
        if dec.arm_name not in rec.correct:
            raise MissingLabel(f"record {rec.id!r} has no label for arm {dec.arm_name!r}")
        hits += bool(rec.correct[dec.arm_name])
    return hits / len(records)


def random_baseline(hit_small: float, hit_large: float, rho: float) -> float:
    """Expected Hit@1 of routing a rho-fraction uniformly at random to the
    large arm: the linear interpolation of the endpoint values.

    Hit values may be fractions in [0, 1] or percentages in [0, 100].
    """
    if not 0.0 <= rho <= 1.0:
        raise OutOfRange(f"rho must be in [0, 1], got {rho}")
    for name, h in (("hit_small", hit_small), ("hit_large", hit_large)):
        if not 0.0 <= h <= 100.0:
            raise OutOfRange(f"{name} must be in [0, 100], got {h}")
    return (1.0 - rho) * hit_small + rho * hit_large


def average_effectiveness(
    method_curve: BudgetCurve,
    hit_small: float,
    hit_large: float,
    fractions: Sequence[float] = INTERIOR_FRACTIONS,
) -> float:
    """Mean Hit@1 improvement over the random baseline at the interior
    sweep fractions."""
    deltas = []
    for rho in fractions:
        point = method_curve.point_at(rho)
        deltas.append(point.hit_at_1 - random_baseline(hit_small, hit_large, rho))
    return sum(deltas) / len(deltas)


def mean_cost(
    records: Sequence[QueryRecord],
    decisions: Sequence[Decision],
    arms: Sequence[Arm],
    tokens_per_query: float = DEFAULT_TOKENS_PER_QUERY,
) -> float:
    """Average per-query dollar cost of the chosen arms."""
    if tokens_per_query < 0.0:
        raise OutOfRange(f"tokens_per_query must be >= 0, got {tokens_per_query}")
    if len(records) != len(decisions):
        raise LengthMismatch(
            f"{len(records)} records but {len(decisions)} decisions"
        )
    cost_by_name = {a.name: a.cost_per_million_tokens for a in arms}
    total = 0.0
    for dec in decisions:
        if dec.arm_name not in cost_by_name:
            raise MissingArm(f"no cost for arm {dec.arm_name!r}")
        total += tokens_per_query * cost_by_name[dec.arm_name] / 1e6
    return total / len(decisions) if decisions else 0.0


def budget_sweep(
    records: Sequence[QueryRecord],
    metric: MetricSpec,
    fractions: Sequence[float],
    arms: Sequence[Arm],
    tokens_per_query: float = DEFAULT_TOKENS_PER_QUERY,
    calibration_records: Sequence[QueryRecord] | None = None,
) -> BudgetCurve:
    """Route the corpus at each target large-arm fraction and score it.

    Thresholds are calibrated on ``calibration_records`` when given,
    otherwise in-corpus. Fractions 0 and 1 bypass calibration entirely
    (all-cheap / all-costly).
    """
    if len(arms) != 2:
        raise InvalidConfig("budget_sweep routes between exactly two arms")
    small, large = arms
    fracs = sorted(set(float(f) for f in fractions))
    for f in fracs:
        if not 0.0 <= f <= 1.0:
            raise OutOfRange(f"sweep fraction {f} outside [0, 1]")

    difficulties = [difficulty_score(r.distribution, metric) for r in records]
    if calibration_records is None:
        cal_values = [d.value for d in difficulties]
    else:
        cal_values = [
            difficulty_score(r.distribution, metric).value for r in calibration_records
        ]

    points = []
    for rho in fracs:
        if rho == 0.0:
            decisions = [
                Decision(small.name, small.rank, d, metric.kind) for d in difficulties
            ]
        elif rho == 1.0:
            decisions = [
                Decision(large.name, large.rank, d, metric.kind) for d in difficulties
            ]
        else:
            report = calibrate(cal_values, [1.0 - rho, rho])
            decisions = []
            for d in difficulties:
                arm = arms[rank_for(d.value, report.thresholds)]
                decisions.append(Decision(arm.name, arm.rank, d, metric.kind))
        points.append(
            CurvePoint(
                large_fraction=rho,
                hit_at_1=hit_at_1(records, decisions),
                avg_cost=mean_cost(records, decisions, arms, tokens_per_query),
            )
        )
    return BudgetCurve(points=tuple(points))


def correlation_report(
    records: Sequence[QueryRecord], metric: MetricSpec, n_groups: int
) -> CorrelationReport:
    """Group records by ascending difficulty and summarize answer ranks.

    Records without an answer rank are skipped. Group sizes differ by at
    most one; the remainder is spread one-per-group from the first group.
    Quartiles use linear interpolation between closest ranks.
    """
    if n_groups < 2:
        raise InvalidConfig(f"need at least 2 groups, got {n_groups}")
    ranked = [r for r in records if r.answer_rank is not None]
    if len(ranked) < n_groups:
        raise TooFewRecords(
            f"{len(ranked)} records carry an answer rank, need at least {n_groups}"
        )
    ranked.sort(key=lambda r: difficulty_score(r.distribution, metric).value)

    base, rem = divmod(len(ranked), n_groups)
    groups = []
    start = 0
    for g in range(n_groups):
        size = base + (1 if g < rem else 0)
        chunk = ranked[start : start + size]
        start += size
        ranks = np.asarray([r.answer_rank for r in chunk], dtype=np.float64)
        q1, med, q3 = np.percentile(ranks, [25.0, 50.0, 75.0])
        groups.append(
            GroupStats(
                group_index=g,
                count=size,
                answer_rank_mean=float(ranks.mean()),
                answer_rank_quartiles=(float(q1), float(med), float(q3)),
            )
        )
    return CorrelationReport(groups=tuple(groups))
