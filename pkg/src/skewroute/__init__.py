"""Training-free query routing for retrieval-augmented generation, driven
by the skewness of retrieval score distributions."""

__version__ = "0.1.0"

from .core import (
    Arm,
    DifficultyScore,
    MetricKind,
    MetricSpec,
    QueryRecord,
    RouterConfig,
    ScoreDistribution,
    validate_distribution,
)
from .metrics import (
    cumulative_k,
    difficulty_score,
    entropy,
    gini,
    minmax_area,
    normalize_probability,
    powerlaw_slope,
)
from .router import CalibrationReport, Decision, calibrate, decide

__all__ = [
    "Arm",
    "CalibrationReport",
    "Decision",
    "DifficultyScore",
    "MetricKind",
    "MetricSpec",
    "QueryRecord",
    "RouterConfig",
    "ScoreDistribution",
    "calibrate",
    "cumulative_k",
    "decide",
    "difficulty_score",
    "entropy",
    "gini",
    "minmax_area",
    "normalize_probability",
    "powerlaw_slope",
    "validate_distribution",
]
