"""Test the experiment runner and report persistence."""

import json
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.core import (
    BudgetExhaustedError,
    DelayFactor,
    InvalidConfigurationError,
    Scenario,
    SimulatedExecutor,
    SyntheticProgram,
    TuneResult,
    recompute_estimates,
    simulate_scenario,
)
from src.core.experiment import (
    BenchmarkReport,
    ExperimentConfig,
    load_report,
    report_estimates,
    run_experiment,
    simulation_record,
)
from src.utils import dumps_json


def tuned(unit_timer, n, t_hat):
    return TuneResult(
        benchmark_id="bench", n=n, t_hat_ns=t_hat, timer=unit_timer,
        oracle_kind="logistic", tuned_at="2026-01-01T00:00:00+00:00", ramp_len=1,
    )


def executor(t_p0, factors=(), seed=0):
    return SimulatedExecutor(SyntheticProgram(k=4, t_p0=t_p0), factors, seed=seed)


def test_budget_stops_inside_first_trial(unit_timer):
    cfg = ExperimentConfig(tau_budget_ns=5 * 10**4)
    record = run_experiment(executor(100), tuned(unit_timer, 100, 100), cfg, unit_timer)
    assert len(record.trials) == 1
    assert len(record.trials[0]) == 5
    assert record.estimates.min_ns == 100.0


def test_full_trials_fit_the_budget(unit_timer):
    cfg = ExperimentConfig(tau_budget_ns=10**9)
    record = run_experiment(executor(100), tuned(unit_timer, 100, 100), cfg, unit_timer)
    assert [len(t) for t in record.trials] == [10000] * 10
    assert sum(m.total_time for t in record.trials for m in t.measurements) == 10**9


def test_budget_below_one_measurement(unit_timer):
    cfg = ExperimentConfig(tau_budget_ns=5 * 10**6)
    with pytest.raises(BudgetExhaustedError) as info:
        run_experiment(executor(10**7), tuned(unit_timer, 1, 10**7), cfg, unit_timer)
    assert info.value.minimum_budget_ns == 10**7


def test_trial_count_caps_the_run(unit_timer):
    cfg = ExperimentConfig(tau_budget_ns=10**9, measurements_per_trial=4, trials=3)
    record = run_experiment(executor(100), tuned(unit_timer, 10, 100), cfg, unit_timer)
    assert [len(t) for t in record.trials] == [4, 4, 4]
    assert [t.trial_index for t in record.trials] == [0, 1, 2]
    assert all(t.n_execs == 10 for t in record.trials)


def test_partial_trial_kept_when_budget_hits(unit_timer):
    cfg = ExperimentConfig(tau_budget_ns=6000, measurements_per_trial=4, trials=3)
    record = run_experiment(executor(100), tuned(unit_timer, 10, 100), cfg, unit_timer)
    assert [len(t) for t in record.trials] == [4, 2]


def test_experiment_config_validation():
    with pytest.raises(InvalidConfigurationError):
        ExperimentConfig(tau_budget_ns=0)
    with pytest.raises(InvalidConfigurationError):
        ExperimentConfig(tau_budget_ns=10, trials=0)


def test_stored_estimates_recompute_exactly(unit_timer):
    noisy = [DelayFactor(tau=37, probs=0.2), DelayFactor(tau=5000, probs=0.001)]
    cfg = ExperimentConfig(tau_budget_ns=10**9, measurements_per_trial=300, trials=3)
    record = run_experiment(
        executor(100, noisy, seed=4), tuned(unit_timer, 10, 100), cfg, unit_timer, with_kde=True
    )
    stored = json.loads(dumps_json(record.to_dict()))
    assert recompute_estimates(stored) == record.estimates
    assert stored["density"]["bandwidth_ns"] > 0
    assert stored["tune"]["n"] == 10
    assert len(record.raw_rows()) == 900


def test_recompute_uses_stored_trim_percentile(unit_timer):
    noisy = [DelayFactor(tau=37, probs=0.2), DelayFactor(tau=5000, probs=0.001)]
    cfg = ExperimentConfig(tau_budget_ns=10**9, measurements_per_trial=200, trials=2)
    record = run_experiment(
        executor(100, noisy, seed=9), tuned(unit_timer, 10, 100), cfg, unit_timer, trim_percentile=80.0
    )
    stored = json.loads(dumps_json(record.to_dict()))
    assert stored["estimates"]["trim_percentile"] == 80.0
    assert recompute_estimates(stored) == record.estimates
    assert recompute_estimates(stored, upper_pct=95.0).trim_percentile == 95.0


def test_report_round_trip(tmp_path, unit_timer):
    scenario = Scenario.from_dict({
        "name": "noisy",
        "program": {"k": 4, "t_p0_ns": 100},
        "factors": [{"tau_ns": 50, "probs": 0.1}],
        "trials": 2,
        "measurements_per_trial": 100,
        "n": 5,
    })
    record = simulation_record(scenario, simulate_scenario(scenario))
    assert record.extra["asymptotic_per_exec_ns"] == pytest.approx(120.0)
    path = tmp_path / "report.json"
    BenchmarkReport(kind="simulation", benchmarks=[record], timer=unit_timer).save(path)
    
    loaded = load_report(path)
    assert loaded["kind"] == "simulation"
    assert "started_at" not in loaded
    assert report_estimates(loaded)["noisy"] == record.estimates
    assert recompute_estimates(loaded["benchmarks"][0]) == record.estimates


def test_load_report_rejects_other_files(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"schema_version": 2, "benchmarks": []}')
    with pytest.raises(InvalidConfigurationError):
        load_report(path)
    path.write_text('{"schema_version": 1}')
    with pytest.raises(InvalidConfigurationError):
        load_report(path)


def test_summary_script_tabulates_reports(tmp_path, unit_timer):
    sys.path.insert(0, str(project_root / "scripts"))
    from summarize_reports import summarize_reports
    
    scenario = Scenario.from_dict({"name": "flat", "program": {"k": 1, "t_p0_ns": 10}, "trials": 3})
    record = simulation_record(scenario, simulate_scenario(scenario))
    BenchmarkReport(kind="simulation", benchmarks=[record]).save(tmp_path / "flat.json")
    (tmp_path / "notes.json").write_text("[]")
    
    frame = summarize_reports(str(tmp_path))
    assert list(frame["benchmark"]) == ["flat"]
    assert frame["trial_min_spread_ns"].iloc[0] == 0.0
    assert frame["min_ns"].iloc[0] == 10.0
