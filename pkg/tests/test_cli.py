import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from skewroute.cli import main
from skewroute.corpus import SyntheticSpec, generate_synthetic, write_records


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def corpus_path(tmp_path):
    records = generate_synthetic(SyntheticSpec(n_queries=60, seed=3))
    path = tmp_path / "corpus.jsonl"
    write_records(records, path)
    return path


def test_route_emits_one_line_per_record(runner, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(
        '{"id":"q1","scores":[1,0,0,0],"correct":{"small":true,"large":true}}\n'
        '{"id":"q2","scores":[1,1,1,1],"correct":{"small":false,"large":true}}\n'
    )
    out = tmp_path / "out"
    result = runner.invoke(
        main,
        ["route", str(corpus), "--metric", "gini", "--thresholds", "-0.5", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    decisions = (out / "decisions.jsonl").read_text().splitlines()
    assert len(decisions) == 2
    assert json.loads(decisions[0])["arm"] == "small"  # gini -0.75 <= -0.5
    assert json.loads(decisions[1])["arm"] == "large"  # gini -0.0 > -0.5
    assert (out / "manifest.json").exists()


def test_route_bad_line_names_the_line(runner, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text(
        '{"id":"q1","scores":[1,0.5],"correct":{"a":true}}\n'
        '{"id":"q2","scores":[],"correct":{"a":true}}\n'
    )
    result = runner.invoke(
        main, ["route", str(corpus), "--thresholds", "0", "--arms", "a,b"]
    )
    assert result.exit_code == 2
    assert "line 2" in result.output


def test_route_requires_thresholds_or_config(runner, corpus_path):
    result = runner.invoke(main, ["route", str(corpus_path)])
    assert result.exit_code == 1


def test_invalid_cumulative_probability_is_usage_error(runner, corpus_path, tmp_path):
    ok = runner.invoke(
        main,
        ["route", str(corpus_path), "--metric", "cumulative", "--P", "0.95",
         "--thresholds", "50", "--out", str(tmp_path / "o")],
    )
    assert ok.exit_code == 0, ok.output
    bad = runner.invoke(
        main,
        ["route", str(corpus_path), "--metric", "cumulative", "--P", "1.5",
         "--thresholds", "50"],
    )
    assert bad.exit_code == 1


def test_unknown_flag_is_hard_error(runner, corpus_path):
    result = runner.invoke(main, ["route", str(corpus_path), "--bogus"])
    assert result.exit_code != 0


@pytest.mark.parametrize(
    "command", ["route", "calibrate", "evaluate", "analyze", "generate", "bench", "serve"]
)
def test_every_subcommand_has_help(runner, command):
    result = runner.invoke(main, [command, "--help"])
    assert result.exit_code == 0
    assert "--help" in result.output


class TestCalibrate:
    def test_threshold_matches_hand_count(self, runner, tmp_path):
        # Ten records whose entropy values are distinct and ordered.
        lines = []
        for i in range(10):
            scores = [1.0] * (i + 1)
            lines.append(json.dumps({"id": f"q{i}", "scores": scores, "correct": {"a": True}}))
        corpus = tmp_path / "c.jsonl"
        corpus.write_text("\n".join(lines) + "\n")
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["calibrate", str(corpus), "--metric", "entropy", "--ratios", "0.6,0.4",
             "--arms", "a,b", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        payload = json.loads((out / "calibration.json").read_text())
        # 6th-smallest entropy is log2(6) for the 6-score uniform record.
        import math

        assert payload["thresholds"][0] == pytest.approx(math.log2(6))
        assert payload["achieved_ratios"] == [0.6, 0.4]

    def test_bad_targets(self, runner, corpus_path):
        result = runner.invoke(
            main, ["calibrate", str(corpus_path), "--ratios", "1.2,-0.2"]
        )
        assert result.exit_code == 2

    def test_empty_corpus(self, runner, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        result = runner.invoke(main, ["calibrate", str(empty)])
        assert result.exit_code == 2


class TestEvaluate:
    def test_two_point_sweep(self, runner, corpus_path, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["evaluate", str(corpus_path), "--fractions", "0,1", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        rows = (out / "curve.csv").read_text().splitlines()
        assert len(rows) == 3  # header + the two endpoints

    def test_full_sweep_reports_avg_eff(self, runner, corpus_path, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(
            main, ["evaluate", str(corpus_path), "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "avg_effectiveness=" in result.output

    def test_calibration_split(self, runner, corpus_path, tmp_path):
        result = runner.invoke(
            main,
            ["evaluate", str(corpus_path), "--calibration-split", "0.5",
             "--out", str(tmp_path / "out")],
        )
        assert result.exit_code == 0, result.output


def test_analyze_writes_correlation_csv(runner, corpus_path, tmp_path):
    out = tmp_path / "out"
    result = runner.invoke(
        main, ["analyze", str(corpus_path), "--groups", "3", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    rows = (out / "correlation.csv").read_text().splitlines()
    assert len(rows) == 4


def test_generate_then_route_round_trip(runner, tmp_path):
    gen_out = tmp_path / "gen"
    result = runner.invoke(
        main, ["generate", "--n", "30", "--seed", "9", "--out", str(gen_out)]
    )
    assert result.exit_code == 0, result.output
    corpus = gen_out / "corpus.jsonl"
    assert len(corpus.read_text().splitlines()) == 30
    route_out = tmp_path / "routed"
    result = runner.invoke(
        main,
        ["route", str(corpus), "--thresholds", "-0.3", "--out", str(route_out)],
    )
    assert result.exit_code == 0, result.output


def test_rerun_outputs_byte_identical(runner, tmp_path):
    args_a = ["generate", "--n", "25", "--seed", "4", "--out", str(tmp_path / "a")]
    args_b = ["generate", "--n", "25", "--seed", "4", "--out", str(tmp_path / "b")]
    assert runner.invoke(main, args_a).exit_code == 0
    assert runner.invoke(main, args_b).exit_code == 0
    for name in ("corpus.jsonl", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestBench:
    def test_reports_median(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["bench", "--k", "100", "--iterations", "200", "--metric", "gini",
             "--out", str(tmp_path)],
        )
        assert result.exit_code == 0, result.output
        assert "median=" in result.output

    def test_k1_runs(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["bench", "--k", "1", "--iterations", "50", "--metric", "entropy",
             "--out", str(tmp_path)],
        )
        assert result.exit_code == 0, result.output

    def test_zero_iterations_is_usage_error(self, runner):
        result = runner.invoke(main, ["bench", "--iterations", "0"])
        assert result.exit_code == 1
