"""Domain types and input validation shared by all other modules.

Everything here is immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import (
    EmptyScores,
    InvalidConfig,
    InvalidProbability,
    NegativeScore,
    NonFiniteScore,
)


class MetricKind(str, enum.Enum):
    """Which skewness statistic drives the routing decision."""

    AREA = "area"
    CUMULATIVE = "cumulative"
    ENTROPY = "entropy"
    GINI = "gini"
    SLOPE = "slope"


@dataclass(frozen=True)
class MetricSpec:
    """A metric kind plus its parameters.

    ``cumulative_probability`` is only consulted for the cumulative metric.
    """

    kind: MetricKind
    cumulative_probability: float = 0.95

    def __post_init__(self):
        if not 0.0 < self.cumulative_probability < 1.0:
            raise InvalidProbability(
                f"cumulative_probability must be in (0, 1), got {self.cumulative_probability}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "cumulative_probability": self.cumulative_probability}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "MetricSpec":
        return cls(
            kind=MetricKind(d["kind"]),
            cumulative_probability=float(d.get("cumulative_probability", 0.95)),
        )


@dataclass(frozen=True)
class ScoreDistribution:
    """A query's retrieval scores, sorted non-increasing.

    Construct through :func:`validate_distribution`; direct construction
    assumes already-validated input. ``degenerate`` marks an all-zero
    vector, which most metrics reject.
    """

    scores: tuple[float, ...]
    degenerate: bool = False
    shifted: bool = False

    @property
    def k(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class DifficultyScore:
    """A metric value oriented so that larger always means harder."""

    value: float


@dataclass(frozen=True)
class Arm:
    """One routing destination, e.g. a model tier or a context budget."""

    name: str
    cost_per_million_tokens: float
    rank: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "cost_per_million_tokens": self.cost_per_million_tokens,
            "rank": self.rank,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Arm":
        return cls(
            name=str(d["name"]),
            cost_per_million_tokens=float(d["cost_per_million_tokens"]),
            rank=int(d["rank"]),
        )


@dataclass(frozen=True)
class QueryRecord:
    """One corpus row: scores plus per-arm correctness labels."""

    id: str
    distribution: ScoreDistribution
    correct: Mapping[str, bool]
    answer_rank: int | None = None
    meta: Mapping[str, str] | None = None


@dataclass(frozen=True)
class RouterConfig:
    """Calibrated thresholds partitioning difficulty scores into N arms.

    Arms are ordered cheapest to costliest; ``thresholds`` holds the N-1
    difficulty-score cut points between consecutive arms.
    """

    metric: MetricSpec
    thresholds: tuple[float, ...]
    arms: tuple[Arm, ...]

    def __post_init__(self):
        if len(self.arms) < 1:
            raise InvalidConfig("at least one arm is required")
        if len(self.thresholds) != len(self.arms) - 1:
            raise InvalidConfig(
                f"expected {len(self.arms) - 1} thresholds for {len(self.arms)} arms, "
                f"got {len(self.thresholds)}"
            )
        for a, b in zip(self.thresholds, self.thresholds[1:]):
            if b < a:
                raise InvalidConfig("thresholds must be non-decreasing")
        for i, arm in enumerate(self.arms):
            if arm.rank != i:
                raise InvalidConfig("arm ranks must be a contiguous 0-based sequence")
        for a, b in zip(self.arms, self.arms[1:]):
            if b.cost_per_million_tokens < a.cost_per_million_tokens:
                raise InvalidConfig("arm costs must be non-decreasing in rank")

    def to_dict(self) -> dict[str, Any]:
        return {
            "metric": self.metric.to_dict(),
            "thresholds": list(self.thresholds),
            "arms": [a.to_dict() for a in self.arms],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RouterConfig":
        return cls(
            metric=MetricSpec.from_dict(d["metric"]),
            thresholds=tuple(float(t) for t in d["thresholds"]),
            arms=tuple(Arm.from_dict(a) for a in d["arms"]),
        )


def validate_distribution(
    raw_scores: Iterable[float], *, shift_to_zero: bool = False
) -> ScoreDistribution:
    """Validate raw retrieval scores into a :class:`ScoreDistribution`.

    Scores are sorted non-increasing. NaN and infinities are rejected.
    Negative scores are rejected unless ``shift_to_zero`` is set, in which
    case the minimum is subtracted and the result is marked ``shifted``.
    An all-zero vector is accepted but flagged ``degenerate``.
    """
    scores = [float(s) for s in raw_scores]
    if not scores:
        raise EmptyScores("score vector is empty")
    for s in scores:
        if not math.isfinite(s):
            raise NonFiniteScore(f"score {s!r} is not finite")
    lo = min(scores)
    shifted = False
    if lo < 0.0:
        if not shift_to_zero:
            raise NegativeScore(
                f"negative score {lo!r}; pass shift_to_zero=True to opt in to shifting"
            )
        scores = [s - lo for s in scores]
        shifted = True
    scores.sort(reverse=True)
    degenerate = scores[0] == 0.0
    return ScoreDistribution(scores=tuple(scores), degenerate=degenerate, shifted=shifted)
