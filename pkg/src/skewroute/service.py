"""Low-latency HTTP sidecar serving routing decisions.

Endpoints: POST /route and GET /healthz. The router config is loaded once
at startup (typically the calibration.json written by ``skewroute
calibrate``) and immutable afterwards; every request is a pure function
call with no cross-request state, so decisions are identical to the
offline ``skewroute route`` command for the same scores and config.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .core import MetricKind, MetricSpec, RouterConfig, validate_distribution
from .errors import SkewRouteError
from .router import decide


class RouteRequest(BaseModel):
    scores: list[float]
    metric: str | None = None


class RouteResponse(BaseModel):
    arm: str
    difficulty: float
    metric: str
    latency_us: int


class HealthResponse(BaseModel):
    status: str
    config_digest: str


def config_digest(cfg: RouterConfig) -> str:
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path: str | Path) -> RouterConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return RouterConfig.from_dict(json.load(fh))


def create_app(config: RouterConfig | None = None) -> FastAPI:
    """Build the sidecar app. With no config, both endpoints answer 503."""
    app = FastAPI(title="skewroute", version="0.1.0")
    digest = config_digest(config) if config is not None else ""

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        if config is None:
            raise HTTPException(status_code=503, detail="no router config loaded")
        return HealthResponse(status="ok", config_digest=digest)

    @app.post("/route", response_model=RouteResponse)
    def route(req: RouteRequest) -> RouteResponse:
        if config is None:
            raise HTTPException(status_code=503, detail="no router config loaded")
        start = time.perf_counter_ns()
        if req.metric is None:
            spec = config.metric
        else:
            try:
                kind = MetricKind(req.metric)
            except ValueError:
                raise HTTPException(
                    status_code=422, detail=f"unknown metric {req.metric!r}"
                )
            if kind is config.metric.kind:
                spec = config.metric
            else:
                spec = MetricSpec(kind=kind)
        try:
            dist = validate_distribution(req.scores)
            decision = decide(dist, RouterConfig(spec, config.thresholds, config.arms))
        except SkewRouteError as e:
            raise HTTPException(status_code=400, detail=str(e))
        latency_us = (time.perf_counter_ns() - start) // 1000
        return RouteResponse(
            arm=decision.arm_name,
            difficulty=decision.difficulty.value,
            metric=spec.kind.value,
            latency_us=int(latency_us),
        )

    return app
