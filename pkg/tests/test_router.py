import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewroute.core import Arm, MetricKind, MetricSpec, RouterConfig, validate_distribution
from skewroute.errors import EmptyCalibrationSet, InvalidTargets
from skewroute.router import CalibrationReport, calibrate, decide, rank_for


def two_arm_config(kind, threshold, p=0.95):
    return RouterConfig(
        metric=MetricSpec(kind, p),
        thresholds=(threshold,),
        arms=(Arm("small", 0.0485, 0), Arm("large", 0.5724, 1)),
    )


class TestDecide:
    def test_gini_skewed_goes_small(self):
        # difficulty -0.75 <= threshold -0.5
        cfg = two_arm_config(MetricKind.GINI, -0.5)
        d = validate_distribution([1, 0, 0, 0])
        decision = decide(d, cfg)
        assert decision.arm_name == "small"
        assert decision.difficulty.value == pytest.approx(-0.75)

    def test_entropy_above_threshold_goes_large(self):
        cfg = two_arm_config(MetricKind.ENTROPY, 1.5)
        decision = decide(validate_distribution([5, 5, 5, 5]), cfg)  # H = 2 bits
        assert decision.arm_name == "large"

    def test_three_arm_partition(self):
        cfg = RouterConfig(
            metric=MetricSpec(MetricKind.CUMULATIVE, 0.95),
            thresholds=(1.0, 50.0),
            arms=(Arm("small", 1.0, 0), Arm("medium", 2.0, 1), Arm("large", 3.0, 2)),
        )
        decision = decide(validate_distribution([9, 1]), cfg)  # k = 2: 1 < 2 <= 50
        assert decision.arm_name == "medium"

    def test_tie_at_threshold_goes_cheap(self):
        cfg = two_arm_config(MetricKind.ENTROPY, 2.0)
        decision = decide(validate_distribution([5, 5, 5, 5]), cfg)  # H = 2 exactly
        assert decision.arm_name == "small"

    def test_deterministic(self):
        cfg = two_arm_config(MetricKind.GINI, -0.3)
        d = validate_distribution([0.7, 0.2, 0.1])
        assert decide(d, cfg) == decide(d, cfg)

    def test_infinite_thresholds_degenerate(self):
        d = validate_distribution([0.7, 0.2, 0.1])
        assert decide(d, two_arm_config(MetricKind.GINI, float("-inf"))).arm_name == "large"
        assert decide(d, two_arm_config(MetricKind.GINI, float("inf"))).arm_name == "small"


class TestCalibrate:
    def test_distinct_values(self):
        report = calibrate(list(range(1, 11)), [0.6, 0.4])
        assert report.thresholds == (6.0,)
        assert report.achieved_ratios == (0.6, 0.4)

    def test_total_tie_collapses_to_cheap(self):
        report = calibrate([5.0] * 10, [0.6, 0.4])
        assert report.thresholds == (5.0,)
        assert report.achieved_ratios == (1.0, 0.0)

    def test_half_split(self):
        report = calibrate([1, 2, 3, 4], [0.5, 0.5])
        assert report.thresholds == (2.0,)
        assert report.achieved_ratios == (0.5, 0.5)

    def test_three_arms(self):
        report = calibrate(list(range(1, 11)), [0.2, 0.5, 0.3])
        assert report.thresholds == (2.0, 7.0)
        assert report.achieved_ratios == (0.2, 0.5, 0.3)

    def test_empty_rejected(self):
        with pytest.raises(EmptyCalibrationSet):
            calibrate([], [0.5, 0.5])

    @pytest.mark.parametrize(
        "targets",
        [[0.5], [0.6, 0.5], [1.0, 0.0], [0.0, 1.0], [-0.2, 1.2], [0.2, 0.3]],
    )
    def test_bad_targets_rejected(self, targets):
        with pytest.raises(InvalidTargets):
            calibrate([1.0, 2.0], targets)

    @given(
        st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=5,
                 max_size=200, unique=True),
        st.sampled_from([0.2, 0.4, 0.6, 0.8]),
    )
    @settings(max_examples=200)
    def test_achieved_within_one_over_n(self, values, cheap_target):
        report = calibrate(values, [cheap_target, 1.0 - cheap_target])
        n = len(values)
        assert abs(report.achieved_ratios[0] - cheap_target) <= 1.0 / n + 1e-12

    def test_report_ratios_sum_to_one(self):
        rng = np.random.default_rng(0)
        report = calibrate(rng.random(997), [0.3, 0.3, 0.4])
        assert sum(report.achieved_ratios) == pytest.approx(1.0, abs=1e-9)


class TestBudgetMonotonicity:
    def test_raising_threshold_never_raises_large_fraction(self):
        rng = np.random.default_rng(3)
        values = rng.normal(size=500)
        thresholds = sorted(rng.normal(size=10))
        fractions = [
            np.mean([rank_for(v, [t]) for v in values]) for t in thresholds
        ]
        assert all(b <= a for a, b in zip(fractions, fractions[1:]))
