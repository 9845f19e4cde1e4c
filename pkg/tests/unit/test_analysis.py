"""Test estimators, regression verdicts and density estimation."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.core import (
    DomainError,
    EstimateSet,
    Measurement,
    Scenario,
    Trial,
    Verdict,
    compare_runs,
    kde,
    location_estimates,
    minimum_estimate,
    simulate_scenario,
)
from src.core.analysis import pooled_samples, recompute_estimates, trial_summary, trimmed_mean


def estimates(min_ns):
    return EstimateSet(
        min_ns=min_ns, mean_ns=min_ns, median_ns=min_ns,
        trimmed_mean_ns=min_ns, sample_count=1, n_execs=1,
    )


def test_location_estimates():
    est = location_estimates([10, 20, 30, 40], n_execs=4)
    assert (est.min_ns, est.mean_ns, est.median_ns) == (10.0, 25.0, 25.0)
    assert est.sample_count == 4
    assert est.n_execs == 4


def test_location_estimates_small_sample():
    est = location_estimates([100, 95, 94])
    assert est.min_ns == 94.0
    assert est.mean_ns == pytest.approx(289 / 3)
    assert est.median_ns == 95.0


def test_location_estimates_of_equal_samples():
    est = location_estimates([250.0] * 37, n_execs=8)
    assert est.min_ns == est.mean_ns == est.median_ns == est.trimmed_mean_ns == 250.0


def test_trimmed_mean_drops_both_tails():
    assert trimmed_mean(range(1, 21)) == pytest.approx(10.5)
    assert trimmed_mean(list(range(1, 20)) + [10**6]) == pytest.approx(10.5)
    assert trimmed_mean([1, 2, 3], upper_pct=100) == pytest.approx(2.0)
    assert trimmed_mean([7]) == 7.0


def test_estimators_reject_bad_samples():
    with pytest.raises(DomainError):
        location_estimates([])
    with pytest.raises(DomainError):
        location_estimates([1.0, float("nan")])
    with pytest.raises(DomainError):
        location_estimates([-1.0])


def test_minimum_estimate_is_per_execution():
    ms = [Measurement(500, 10), Measurement(400, 10), Measurement(900, 10)]
    assert minimum_estimate(ms) == 40.0


def test_trial_summary_round_trips_estimates():
    trial = Trial([Measurement(t, 5) for t in (500, 505, 1000, 520)], trial_index=3)
    summary = trial_summary(trial)
    assert summary["trial_index"] == 3
    assert summary["total_times_ns"] == [500, 505, 1000, 520]
    assert summary["min_ns"] == 100.0
    samples, n_execs = pooled_samples([summary])
    assert n_execs == 5
    record = {"trials": [summary]}
    assert recompute_estimates(record) == location_estimates(samples, 5)


@pytest.mark.parametrize("candidate,verdict", [
    (130.0, Verdict.REGRESSION),
    (129.0, Verdict.UNCHANGED),
    (100.0, Verdict.UNCHANGED),
    (71.0, Verdict.UNCHANGED),
    (70.0, Verdict.IMPROVEMENT),
    (10.0, Verdict.IMPROVEMENT),
])
def test_compare_boundaries_are_inclusive(candidate, verdict):
    result = compare_runs(estimates(100.0), estimates(candidate))
    assert result.verdict is verdict
    assert result.ratio == pytest.approx(candidate / 100.0)


@pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e6])
def test_compare_is_scale_invariant(scale):
    for candidate in (50.0, 100.0, 131.0):
        plain = compare_runs(estimates(100.0), estimates(candidate)).verdict
        scaled = compare_runs(estimates(100.0 * scale), estimates(candidate * scale)).verdict
        assert plain is scaled


def test_compare_rejects_bad_inputs():
    with pytest.raises(DomainError):
        compare_runs(estimates(100.0), estimates(120.0), threshold=0)
    with pytest.raises(DomainError):
        compare_runs(estimates(0.0), estimates(120.0))


def test_kde_peak_of_identical_points():
    curve = kde([5.0, 5.0], bandwidth_ns=1.0, grid_size=101)
    times, dens = curve.times(), curve.densities()
    assert times[0] == pytest.approx(0.0)
    assert times[-1] == pytest.approx(10.0)
    assert times[np.argmax(dens)] == pytest.approx(5.0)
    assert dens.max() == pytest.approx(1 / np.sqrt(2 * np.pi), rel=1e-9)


def test_kde_integrates_to_one():
    samples = np.random.default_rng(3).normal(1000, 10, 1000)
    curve = kde(samples)
    assert curve.bandwidth_ns > 0
    assert curve.integral() == pytest.approx(1.0, abs=1e-3)


def test_kde_keeps_tight_mode_next_to_far_outliers():
    rng = np.random.default_rng(5)
    samples = np.concatenate([rng.normal(100, 1, 1000), [5000.0, 10000.0]])
    curve = kde(samples)
    assert curve.bandwidth_ns < 1.0
    assert curve.integral() == pytest.approx(1.0, abs=0.01)
    times, dens = curve.times(), curve.densities()
    assert times[np.argmax(dens)] == pytest.approx(100, abs=1)
    assert dens.max() > 0.2
    assert np.all(np.diff(times) > 0)
    assert len(curve.points) >= 512


def test_kde_falls_back_to_precision_for_constant_samples():
    assert kde([5.0, 5.0, 5.0], tau_prec_ns=2.0).bandwidth_ns == 2.0


def test_kde_rejects_bad_inputs():
    with pytest.raises(DomainError):
        kde([1.0])
    with pytest.raises(DomainError):
        kde([1.0, 2.0], bandwidth_ns=0)


def test_density_csv(tmp_path):
    curve = kde([1.0, 2.0, 4.0], bandwidth_ns=1.0, grid_size=16)
    path = tmp_path / "out" / "density.csv"
    curve.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "time_ns,density"
    assert len(lines) == len(curve.points) + 1
    assert len(curve.points) >= 16


DRIFT = {
    "program": {"k": 4, "t_p0_ns": 100},
    "factors": [{"tau_ns": 50, "probs": 0.01, "regimes": [0.01, 0.3]}],
    "error": {"kind": "none", "bound_ns": 0},
}


def test_two_regimes_give_two_density_peaks():
    scenario = Scenario.from_dict({
        **DRIFT, "trials": 2, "measurements_per_trial": 500, "n": 100, "regime_mode": "cycle",
    })
    samples, _ = pooled_samples([trial_summary(t) for t in simulate_scenario(scenario, seed=1)])
    peaks = kde(samples).local_maxima()
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(102, abs=5)
    assert peaks[1] == pytest.approx(160, abs=10)


def test_minimum_is_stable_across_drifting_trials():
    scenario = Scenario.load(project_root / "samples" / "scenarios" / "bimodal.json")
    t_p0 = scenario.program.t_p0
    per_trial = [location_estimates(t.per_exec_times()) for t in simulate_scenario(scenario)]
    assert len(per_trial) == 100
    for est in per_trial:
        assert est.min_ns >= t_p0
        assert est.min_ns - t_p0 <= est.mean_ns - t_p0
    mins = np.array([e.min_ns for e in per_trial])
    means = np.array([e.mean_ns for e in per_trial])
    medians = np.array([e.median_ns for e in per_trial])
    assert np.var(mins) == 0.0
    assert np.var(means) > 0.0
    assert np.var(medians) > 0.0

