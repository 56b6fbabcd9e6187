"""Single-core routing latency measurement."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import Arm, MetricKind, MetricSpec, RouterConfig, validate_distribution
from .errors import InvalidSpec
from .router import decide

# Number of pre-generated score vectors cycled through while timing, so the
# measurement is not dominated by one lucky cache-resident input.
_POOL_SIZE = 64


@dataclass(frozen=True)
class LatencyReport:
    metric_kind: MetricKind
    k: int
    iterations: int
    median_ms: float
    mean_ms: float
    p95_ms: float


def measure_latency(
    kind: MetricKind, k: int = 100, iterations: int = 100_000, seed: int = 0
) -> LatencyReport:
    """Time individual routing decisions and report per-query latency in ms."""
    if k < 1:
        raise InvalidSpec(f"k must be >= 1, got {k}")
    if iterations < 1:
        raise InvalidSpec(f"iterations must be >= 1, got {iterations}")

    rng = np.random.default_rng(seed)
    pool = [
        validate_distribution(rng.random(k) + 1e-6) for _ in range(_POOL_SIZE)
    ]
    cfg = RouterConfig(
        metric=MetricSpec(kind=kind),
        thresholds=(0.0,),
        arms=(Arm("small", 0.0, 0), Arm("large", 0.0, 1)),
    )

    # Warm up caches and any lazy numpy setup before timing.
    for d in pool:
        decide(d, cfg)

    times_ns = np.empty(iterations, dtype=np.float64)
    for i in range(iterations):
        d = pool[i % _POOL_SIZE]
        start = time.perf_counter_ns()
        decide(d, cfg)
        times_ns[i] = time.perf_counter_ns() - start

    ms = times_ns / 1e6
    return LatencyReport(
        metric_kind=kind,
        k=k,
        iterations=iterations,
        median_ms=float(np.median(ms)),
        mean_ms=float(ms.mean()),
        p95_ms=float(np.percentile(ms, 95.0)),
    )
