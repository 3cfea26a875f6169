import numpy as np
import pytest

from mrepp import PredictiveMixture, ScoringError, hpd90, interval_score, lps, rmse
from mrepp.metrics import Z90, csv_header, csv_row, score


class TestRmse:
    def test_perfect_predictions(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_constant_offset(self):
        assert rmse([1.0, 2.0, 3.0], [1.5, 2.5, 3.5]) == pytest.approx(0.5, abs=1e-12)

    def test_hand_value(self):
        assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(np.sqrt(12.5), rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            rmse([1.0], [1.0, 2.0])


class TestLps:
    def test_standard_normal_at_zero(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        assert lps(mix, [0.0]) == pytest.approx(0.5 * np.log(2 * np.pi), rel=1e-12)

    def test_duplicate_components_match_single(self):
        single = PredictiveMixture.single([0.0], [1.0])
        double = PredictiveMixture([[0.5, 0.5]], [[0.0, 0.0]], [[1.0, 1.0]])
        y = [0.7]
        assert lps(double, y) == pytest.approx(lps(single, y), rel=1e-12)

    def test_far_tail_value(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        assert lps(mix, [10.0]) == pytest.approx(0.5 * np.log(2 * np.pi) + 50.0, rel=1e-12)

    def test_zero_variance_rejected(self):
        mix = PredictiveMixture.single([0.0], [0.0])
        with pytest.raises(ScoringError):
            lps(mix, [0.0])

    def test_zero_weight_component_ignored(self):
        mix = PredictiveMixture([[1.0, 0.0]], [[0.0, 5.0]], [[1.0, 0.0]])
        single = PredictiveMixture.single([0.0], [1.0])
        assert lps(mix, [0.3]) == pytest.approx(lps(single, [0.3]), rel=1e-12)

    def test_mean_over_locations(self):
        mix = PredictiveMixture.single([0.0, 1.0], [1.0, 4.0])
        per_loc = [lps(PredictiveMixture.single([m], [v]), [y])
                   for m, v, y in [(0.0, 1.0, 0.5), (1.0, 4.0, -1.0)]]
        assert lps(mix, [0.5, -1.0]) == pytest.approx(np.mean(per_loc), rel=1e-12)


class TestHpd90:
    def test_actuals_at_means_covered(self):
        mix = PredictiveMixture.single([0.0, 2.0], [1.0, 1.0])
        coverage, _ = hpd90(mix, [0.0, 2.0])
        assert coverage == 1.0

    def test_standard_normal_width(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        _, width = hpd90(mix, [0.0])
        assert width == pytest.approx(2 * Z90, rel=1e-12)
        assert width == pytest.approx(3.2897, abs=1e-4)

    def test_boundary_counts_as_covered(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        upper = 0.0 + Z90 * 1.0
        coverage, _ = hpd90(mix, [upper])
        assert coverage == 1.0

    def test_affine_invariance_of_coverage(self):
        gen = np.random.default_rng(1)
        means = gen.standard_normal(100)
        variances = gen.uniform(0.5, 2.0, size=100)
        actuals = means + gen.standard_normal(100)
        base, _ = hpd90(PredictiveMixture.single(means, variances), actuals)
        a, b = 2.5, -1.0
        shifted, _ = hpd90(PredictiveMixture.single(a * means + b, a * a * variances),
                           a * actuals + b)
        assert shifted == base


class TestIntervalScore:
    def test_inside_contributes_width(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        _, width = hpd90(mix, [0.0])
        assert interval_score(mix, [0.0]) == pytest.approx(width, rel=1e-12)

    def test_below_lower_penalty(self):
        mix = PredictiveMixture.single([0.0], [1.0])
        lower = -Z90
        _, width = hpd90(mix, [0.0])
        got = interval_score(mix, [lower - 1.0])
        assert got == pytest.approx(width + 20.0, rel=1e-12)

    def test_at_least_width_with_equality_iff_covered(self):
        gen = np.random.default_rng(2)
        means = gen.standard_normal(50)
        mix = PredictiveMixture.single(means, np.full(50, 0.5))
        actuals = means + gen.standard_normal(50)
        _, width = hpd90(mix, actuals)
        assert interval_score(mix, actuals) >= width - 1e-12
        covered, _ = hpd90(mix, actuals)
        if covered == 1.0:
            assert interval_score(mix, actuals) == pytest.approx(width, rel=1e-12)
        else:
            assert interval_score(mix, actuals) > width


def test_score_report_row_format():
    mix = PredictiveMixture.single([0.0, 1.0], [1.0, 1.0])
    report = score(mix, [0.1, 0.9])
    row = csv_row(report, method="GP", scenario="fixed_space", n=200,
                  contamination=0.0, seed=11, runtime_s=1.25)
    header = csv_header()
    assert header == ("method,scenario,n,contamination,seed,rmse,lps,coverage90,"
                      "mean_width,interval_score,runtime_s")
    fields = row.split(",")
    assert fields[0] == "GP"
    assert fields[1] == "fixed_space"
    assert fields[2] == "200"
    assert fields[3] == "0"
    assert fields[4] == "11"
    assert float(fields[5]) == pytest.approx(report.rmse)
    assert len(fields) == len(header.split(","))
