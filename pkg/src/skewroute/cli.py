"""Operator command line: every workflow as a subcommand.

Exit codes: 0 success, 1 usage, 2 data validation, 3 internal. Each
subcommand writes its outputs under --out with fixed file names and drops
a manifest.json recording the inputs so a run can be reproduced exactly.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .bench import measure_latency
from .core import Arm, MetricKind, MetricSpec, RouterConfig
from .corpus import (
    SyntheticSpec,
    generate_synthetic,
    load_records,
    write_correlation_csv,
    write_curve_csv,
    write_decisions,
    write_records,
)
from .errors import InvalidProbability, SkewRouteError
from .evaluation import (
    DEFAULT_SWEEP_FRACTIONS,
    DEFAULT_TOKENS_PER_QUERY,
    average_effectiveness,
    budget_sweep,
)
from .evaluation import correlation_report as build_correlation_report
from .metrics import difficulty_score
from .router import calibrate as run_calibration
from .router import decide

# The spec'd exit code for usage errors is 1, not click's default 2.
click.UsageError.exit_code = 1

METRIC_CHOICES = [k.value for k in MetricKind]


def _guarded(fn):
    """Map domain errors to exit 2 and unexpected ones to exit 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except SkewRouteError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(2)
        except Exception as e:  # pragma: no cover - defensive
            click.echo(f"internal error: {e}", err=True)
            sys.exit(3)

    return wrapper


def _metric_spec(metric: str, p: float) -> MetricSpec:
    try:
        return MetricSpec(kind=MetricKind(metric), cumulative_probability=p)
    except InvalidProbability as e:
        raise click.BadParameter(str(e), param_hint="--P")


def _parse_floats(value: str, hint: str) -> list[float]:
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers", param_hint=hint)


def _parse_arms(value: str) -> list[Arm]:
    """Parse 'name[=cost],name[=cost],...' in cheap-to-expensive order."""
    arms = []
    for rank, part in enumerate(x for x in value.split(",") if x.strip()):
        if "=" in part:
            name, cost_text = part.split("=", 1)
            try:
                cost = float(cost_text)
            except ValueError:
                raise click.BadParameter(
                    f"bad arm cost in {part!r}", param_hint="--arms"
                )
        else:
            name, cost = part, 0.0
        arms.append(Arm(name=name.strip(), cost_per_million_tokens=cost, rank=rank))
    if not arms:
        raise click.BadParameter("no arms given", param_hint="--arms")
    return arms


def _write_manifest(out_dir: Path, command: str, params: dict, outputs: list[str]) -> None:
    manifest = {
        "tool": "skewroute",
        "version": __version__,
        "command": command,
        "params": params,
        "outputs": outputs,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


metric_option = click.option(
    "--metric", type=click.Choice(METRIC_CHOICES), default="gini", show_default=True
)
p_option = click.option(
    "--P", "p", type=float, default=0.95, show_default=True,
    help="Cumulative probability (cumulative metric only).",
)
out_option = click.option(
    "--out", default=".", show_default=True, help="Output directory."
)


@click.group()
@click.version_option(__version__)
def main():
    """Training-free query routing on retrieval-score skewness."""


@main.command()
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@metric_option
@p_option
@click.option("--thresholds", default=None, help="Comma-separated difficulty cut points.")
@click.option("--arms", default="small,large", show_default=True,
              help="Arm names cheap-to-expensive, optionally name=cost.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="calibration.json from the calibrate command.")
@click.option("--shift-to-zero", is_flag=True, help="Shift negative scores up to zero.")
@out_option
@_guarded
def route(corpus, metric, p, thresholds, arms, config_path, shift_to_zero, out):
    """Emit one routing decision per corpus record."""
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as fh:
            cfg = RouterConfig.from_dict(json.load(fh))
    else:
        if thresholds is None:
            raise click.UsageError("either --thresholds or --config is required")
        arm_list = _parse_arms(arms)
        cfg = RouterConfig(
            metric=_metric_spec(metric, p),
            thresholds=tuple(_parse_floats(thresholds, "--thresholds")),
            arms=tuple(arm_list),
        )
    records = load_records(corpus, shift_to_zero=shift_to_zero)
    decisions = [decide(r.distribution, cfg) for r in records]

    out_dir = _out_dir(out)
    write_decisions([r.id for r in records], decisions, out_dir / "decisions.jsonl")
    for rec, dec in zip(records, decisions):
        click.echo(f"{rec.id}\t{dec.arm_name}\t{dec.difficulty.value!r}")
    _write_manifest(
        out_dir, "route",
        {
            "corpus": str(corpus),
            "metric": cfg.metric.to_dict(),
            "thresholds": list(cfg.thresholds),
            "arms": [a.to_dict() for a in cfg.arms],
            "shift_to_zero": shift_to_zero,
        },
        ["decisions.jsonl"],
    )


@main.command()
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@metric_option
@p_option
@click.option("--ratios", default="0.6,0.4", show_default=True,
              help="Target per-arm corpus fractions, cheap first.")
@click.option("--arms", default="small=0.0485,large=0.5724", show_default=True)
@click.option("--shift-to-zero", is_flag=True)
@out_option
@_guarded
def calibrate(corpus, metric, p, ratios, arms, shift_to_zero, out):
    """Choose thresholds hitting target per-arm fractions; write calibration.json."""
    spec = _metric_spec(metric, p)
    records = load_records(corpus, shift_to_zero=shift_to_zero)
    difficulties = [difficulty_score(r.distribution, spec).value for r in records]
    report = run_calibration(difficulties, _parse_floats(ratios, "--ratios"))
    arm_list = _parse_arms(arms)
    cfg = RouterConfig(metric=spec, thresholds=report.thresholds, arms=tuple(arm_list))

    payload = cfg.to_dict()
    payload["achieved_ratios"] = list(report.achieved_ratios)
    payload["target_ratios"] = list(report.target_ratios)
    out_dir = _out_dir(out)
    with open(out_dir / "calibration.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(json.dumps(payload, indent=2, sort_keys=True))
    _write_manifest(
        out_dir, "calibrate",
        {
            "corpus": str(corpus),
            "metric": spec.to_dict(),
            "target_ratios": list(report.target_ratios),
            "arms": [a.to_dict() for a in arm_list],
            "shift_to_zero": shift_to_zero,
        },
        ["calibration.json"],
    )


@main.command()
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@metric_option
@p_option
@click.option("--fractions", default="0,0.2,0.4,0.6,0.8,1", show_default=True,
              help="Large-arm call fractions to sweep.")
@click.option("--arms", default="small=0.0485,large=0.5724", show_default=True)
@click.option("--tokens-per-query", type=float, default=DEFAULT_TOKENS_PER_QUERY,
              show_default=True)
@click.option("--calibration-split", type=float, default=None,
              help="Held-out fraction of the corpus used only for calibration.")
@click.option("--shift-to-zero", is_flag=True)
@out_option
@_guarded
def evaluate(corpus, metric, p, fractions, arms, tokens_per_query,
             calibration_split, shift_to_zero, out):
    """Budget sweep: Hit@1 and mean cost per fraction, plus average effectiveness."""
    spec = _metric_spec(metric, p)
    records = load_records(corpus, shift_to_zero=shift_to_zero)
    arm_list = _parse_arms(arms)
    fracs = _parse_floats(fractions, "--fractions")

    calibration_records = None
    if calibration_split is not None:
        if not 0.0 < calibration_split < 1.0:
            raise click.BadParameter(
                "must be strictly between 0 and 1", param_hint="--calibration-split"
            )
        n_cal = round(len(records) * calibration_split)
        calibration_records, records = records[:n_cal], records[n_cal:]

    curve = budget_sweep(
        records, spec, fracs, arm_list,
        tokens_per_query=tokens_per_query,
        calibration_records=calibration_records,
    )
    out_dir = _out_dir(out)
    write_curve_csv(curve, out_dir / "curve.csv")
    for pt in curve.points:
        click.echo(
            f"fraction={pt.large_fraction:.2f} hit@1={pt.hit_at_1:.4f} "
            f"cost={pt.avg_cost:.6e}"
        )
    try:
        hit_small = curve.point_at(0.0).hit_at_1
        hit_large = curve.point_at(1.0).hit_at_1
        avg_eff = average_effectiveness(curve, hit_small, hit_large)
        click.echo(f"avg_effectiveness={avg_eff:+.4f}")
    except SkewRouteError:
        click.echo("avg_effectiveness=n/a (sweep lacks the required fractions)")
    _write_manifest(
        out_dir, "evaluate",
        {
            "corpus": str(corpus),
            "metric": spec.to_dict(),
            "fractions": fracs,
            "arms": [a.to_dict() for a in arm_list],
            "tokens_per_query": tokens_per_query,
            "calibration_split": calibration_split,
            "shift_to_zero": shift_to_zero,
        },
        ["curve.csv"],
    )


@main.command()
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@metric_option
@p_option
@click.option("--groups", type=int, default=3, show_default=True)
@click.option("--shift-to-zero", is_flag=True)
@out_option
@_guarded
def analyze(corpus, metric, p, groups, shift_to_zero, out):
    """Group records by difficulty and report answer-rank statistics per group."""
    spec = _metric_spec(metric, p)
    records = load_records(corpus, shift_to_zero=shift_to_zero)
    report = build_correlation_report(records, spec, groups)
    out_dir = _out_dir(out)
    write_correlation_csv(report, out_dir / "correlation.csv")
    for g in report.groups:
        click.echo(
            f"group={g.group_index} count={g.count} "
            f"mean_rank={g.answer_rank_mean:.2f} quartiles={g.answer_rank_quartiles}"
        )
    _write_manifest(
        out_dir, "analyze",
        {
            "corpus": str(corpus),
            "metric": spec.to_dict(),
            "groups": groups,
            "shift_to_zero": shift_to_zero,
        },
        ["correlation.csv"],
    )


@main.command()
@click.option("--n", type=int, default=10_000, show_default=True)
@click.option("--easy-fraction", type=float, default=0.5, show_default=True)
@click.option("--k", type=int, default=100, show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--noise", type=float, default=0.1, show_default=True)
@click.option("--p-small-easy", type=float, default=0.9, show_default=True)
@click.option("--p-small-hard", type=float, default=0.2, show_default=True)
@click.option("--p-large-easy", type=float, default=0.92, show_default=True)
@click.option("--p-large-hard", type=float, default=0.7, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@out_option
@_guarded
def generate(n, easy_fraction, k, alpha, noise, p_small_easy, p_small_hard,
             p_large_easy, p_large_hard, seed, out):
    """Generate a labeled synthetic corpus; write corpus.jsonl."""
    spec = SyntheticSpec(
        n_queries=n, easy_fraction=easy_fraction, k=k, alpha_easy=alpha,
        noise=noise, p_small_easy=p_small_easy, p_small_hard=p_small_hard,
        p_large_easy=p_large_easy, p_large_hard=p_large_hard, seed=seed,
    )
    records = generate_synthetic(spec)
    out_dir = _out_dir(out)
    write_records(records, out_dir / "corpus.jsonl")
    click.echo(f"wrote {len(records)} records to {out_dir / 'corpus.jsonl'}")
    _write_manifest(
        out_dir, "generate",
        {
            "n": n, "easy_fraction": easy_fraction, "k": k, "alpha": alpha,
            "noise": noise, "p_small_easy": p_small_easy,
            "p_small_hard": p_small_hard, "p_large_easy": p_large_easy,
            "p_large_hard": p_large_hard, "seed": seed, "rng": "pcg64",
        },
        ["corpus.jsonl"],
    )


@main.command()
@click.option("--k", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--iterations", type=click.IntRange(min=1), default=100_000,
              show_default=True)
@click.option("--metric", type=click.Choice(METRIC_CHOICES), default=None,
              help="Single metric to time; default times all of them.")
@click.option("--seed", type=int, default=0, show_default=True)
@out_option
@_guarded
def bench(k, iterations, metric, seed, out):
    """Measure per-decision routing latency on one core."""
    kinds = [MetricKind(metric)] if metric else list(MetricKind)
    results = []
    for kind in kinds:
        rep = measure_latency(kind, k=k, iterations=iterations, seed=seed)
        results.append(rep)
        click.echo(
            f"{kind.value}: median={rep.median_ms:.6f} ms/query "
            f"mean={rep.mean_ms:.6f} p95={rep.p95_ms:.6f}"
        )
    out_dir = _out_dir(out)
    _write_manifest(
        out_dir, "bench",
        {
            "k": k, "iterations": iterations, "seed": seed,
            "metrics": [r.metric_kind.value for r in results],
        },
        [],
    )


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="calibration.json from the calibrate command.")
@click.option("--listen", default=None,
              help="host:port to bind; overrides SKEWROUTE_LISTEN.")
@_guarded
def serve(config_path, listen):
    """Run the HTTP routing sidecar."""
    import uvicorn

    from .service import create_app, load_config

    address = listen or os.environ.get("SKEWROUTE_LISTEN") or "127.0.0.1:8000"
    host, _, port_text = address.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.BadParameter(
            f"expected host:port, got {address!r}", param_hint="--listen"
        )
    app = create_app(load_config(config_path))
    uvicorn.run(app, host=host, port=int(port_text))


if __name__ == "__main__":
    main()
