"""Corpus ingestion (JSONL), result emission (CSV/JSONL), and synthetic
corpus generation.

JSONL schema, one object per line: ``id`` (string), ``scores`` (array of
numbers; sorted on load, descending not required on disk), ``correct``
(object arm-name -> bool), ``answer_rank`` (optional integer), ``meta``
(optional object of strings). All files are UTF-8.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .core import QueryRecord, validate_distribution
from .errors import (
    InconsistentArms,
    InvalidSpec,
    ParseError,
    SkewRouteError,
    ValidationError,
)
from .evaluation import BudgetCurve, CorrelationReport
from .router import Decision

# Identifier of the seedable 64-bit generator backing synthetic corpora;
# recorded in each generated record's meta for reproducibility.
RNG_ALGORITHM = "pcg64"


def load_records(
    source: str | Path | Iterable[str], *, shift_to_zero: bool = False
) -> list[QueryRecord]:
    """Parse and validate a JSONL corpus.

    Errors carry the 1-based line number. All lines must agree on the set
    of arm names in ``correct``.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = list(source)

    records: list[QueryRecord] = []
    arm_names: frozenset[str] | None = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(lineno, str(e)) from e
        try:
            record = _record_from_obj(obj, shift_to_zero=shift_to_zero)
        except (SkewRouteError, KeyError, TypeError, ValueError) as e:
            raise ValidationError(lineno, str(e)) from e
        names = frozenset(record.correct)
        if arm_names is None:
            arm_names = names
        elif names != arm_names:
            raise InconsistentArms(
                f"line {lineno}: arm names {sorted(names)} differ from {sorted(arm_names)}"
            )
        records.append(record)
    return records


def _record_from_obj(obj: dict, *, shift_to_zero: bool) -> QueryRecord:
    dist = validate_distribution(obj["scores"], shift_to_zero=shift_to_zero)
    answer_rank = obj.get("answer_rank")
    if answer_rank is not None:
        answer_rank = int(answer_rank)
        if answer_rank < 1:
            raise ValueError(f"answer_rank must be >= 1, got {answer_rank}")
    correct = {str(k): bool(v) for k, v in obj["correct"].items()}
    meta = obj.get("meta")
    if meta is not None:
        meta = {str(k): str(v) for k, v in meta.items()}
    return QueryRecord(
        id=str(obj["id"]),
        distribution=dist,
        correct=correct,
        answer_rank=answer_rank,
        meta=meta,
    )


def write_records(records: Sequence[QueryRecord], dest: str | Path | IO[str]) -> None:
    """Write records as JSONL, deterministic byte output."""

    def emit(fh: IO[str]) -> None:
        for r in records:
            obj: dict = {
                "id": r.id,
                "scores": list(r.distribution.scores),
                "correct": dict(r.correct),
            }
            if r.answer_rank is not None:
                obj["answer_rank"] = r.answer_rank
            if r.meta is not None:
                obj["meta"] = dict(r.meta)
            fh.write(json.dumps(obj) + "\n")

    _with_writer(dest, emit)


def decision_line(record_id: str, decision: Decision) -> str:
    """Canonical one-line JSON serialization of a routing decision."""
    return json.dumps(
        {
            "id": record_id,
            "arm": decision.arm_name,
            "difficulty": decision.difficulty.value,
        }
    )


def write_decisions(
    ids: Sequence[str], decisions: Sequence[Decision], dest: str | Path | IO[str]
) -> None:
    def emit(fh: IO[str]) -> None:
        for rid, dec in zip(ids, decisions):
            fh.write(decision_line(rid, dec) + "\n")

    _with_writer(dest, emit)


def write_curve_csv(curve: BudgetCurve, dest: str | Path | IO[str]) -> None:
    """Budget curve as CSV: header row, reals with 6 decimal places."""

    def emit(fh: IO[str]) -> None:
        fh.write("large_fraction,hit_at_1,avg_cost\n")
        for p in curve.points:
            fh.write(f"{p.large_fraction:.6f},{p.hit_at_1:.6f},{p.avg_cost:.6f}\n")

    _with_writer(dest, emit)


def write_correlation_csv(report: CorrelationReport, dest: str | Path | IO[str]) -> None:
    def emit(fh: IO[str]) -> None:
        fh.write("group,count,answer_rank_mean,q1,median,q3\n")
        for g in report.groups:
            q1, med, q3 = g.answer_rank_quartiles
            fh.write(
                f"{g.group_index},{g.count},{g.answer_rank_mean:.6f},"
                f"{q1:.6f},{med:.6f},{q3:.6f}\n"
            )

    _with_writer(dest, emit)


def _with_writer(dest: str | Path | IO[str], emit) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
    else:
        emit(dest)


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for a two-class (easy/hard) synthetic corpus.

    Easy queries get power-law scores with decay ``alpha_easy``; hard
    queries get near-flat scores. ``noise`` is the magnitude of
    multiplicative log-normal jitter applied per score.
    """

    n_queries: int = 10_000
    easy_fraction: float = 0.5
    k: int = 100
    alpha_easy: float = 1.0
    noise: float = 0.1
    p_small_easy: float = 0.9
    p_small_hard: float = 0.2
    p_large_easy: float = 0.92
    p_large_hard: float = 0.7
    seed: int = 42
    small_name: str = "small"
    large_name: str = "large"

    def __post_init__(self):
        if self.n_queries < 1:
            raise InvalidSpec("n_queries must be >= 1")
        if not 0.0 <= self.easy_fraction <= 1.0:
            raise InvalidSpec("easy_fraction must be in [0, 1]")
        if self.k < 2:
            raise InvalidSpec("k must be >= 2")
        if self.alpha_easy <= 0.0:
            raise InvalidSpec("alpha_easy must be > 0")
        if self.noise < 0.0:
            raise InvalidSpec("noise must be >= 0")
        for name in ("p_small_easy", "p_small_hard", "p_large_easy", "p_large_hard"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidSpec(f"{name} must be in [0, 1], got {p}")
        if self.p_small_easy < self.p_small_hard or self.p_large_easy < self.p_large_hard:
            raise InvalidSpec("easy queries must not be harder than hard ones for any arm")


def generate_synthetic(spec: SyntheticSpec) -> list[QueryRecord]:
    """Deterministically generate a labeled corpus from ``spec``.

    Easy queries: scores proportional to rank**(-alpha_easy), answer rank
    drawn in 1..3. Hard queries: flat scores, answer rank uniform over the
    upper half of K. Both classes get multiplicative exp(noise * N(0, 1))
    jitter per score; correctness labels are Bernoulli per class.
    """
    rng = np.random.default_rng(spec.seed)
    n_easy = round(spec.n_queries * spec.easy_fraction)
    ranks = np.arange(1, spec.k + 1, dtype=np.float64)
    easy_base = ranks ** (-spec.alpha_easy)
    hard_base = np.ones(spec.k)
    width = len(str(spec.n_queries))

    records = []
    for i in range(spec.n_queries):
        easy = i < n_easy
        base = easy_base if easy else hard_base
        jitter = np.exp(spec.noise * rng.standard_normal(spec.k))
        dist = validate_distribution(base * jitter)
        p_small = spec.p_small_easy if easy else spec.p_small_hard
        p_large = spec.p_large_easy if easy else spec.p_large_hard
        correct = {
            spec.small_name: bool(rng.random() < p_small),
            spec.large_name: bool(rng.random() < p_large),
        }
        if easy:
            answer_rank = int(rng.integers(1, 4))
        else:
            answer_rank = int(rng.integers(spec.k // 2 + 1, spec.k + 1))
        records.append(
            QueryRecord(
                id=f"q{i:0{width}d}",
                distribution=dist,
                correct=correct,
                answer_rank=answer_rank,
                meta={
                    "difficulty_class": "easy" if easy else "hard",
                    "rng": RNG_ALGORITHM,
                },
            )
        )
    return records
