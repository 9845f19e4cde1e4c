"""Test tuning and the tuning cache."""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.core import (
    CacheParseError,
    DegenerateBenchmarkError,
    DelayFactor,
    ExecutorError,
    Measurement,
    OracleSpec,
    PersistenceError,
    SimulatedExecutor,
    SyntheticProgram,
    TimerErrorModel,
    TuneCache,
    cache_lookup,
    cache_store,
    machine_fingerprint,
    tune,
)
from src.core.tuning import build_lookup_table, convergence_n, scaling_curve


class ZeroExecutor:
    """Workload faster than the clock: every measurement reads 0."""

    def measure(self, n_execs):
        return Measurement(total_time=0, n_execs=n_execs)

    def warmup(self, execs):
        pass


class FailingExecutor:
    def measure(self, n_execs):
        raise RuntimeError("segfault")

    def warmup(self, execs):
        pass


def noiseless(t_p0, seed=0):
    return SimulatedExecutor(SyntheticProgram(k=1, t_p0=t_p0), seed=seed)


@pytest.mark.parametrize("t", [1, 10, 100, 500, 1000, 10**4, 10**6])
def test_noiseless_ramp_recovers_time_and_oracle(t, unit_timer, logistic):
    result = tune(noiseless(t), unit_timer, logistic, tuning_budget_ns=10**12, benchmark_id="p0")
    assert result.t_hat_ns == t
    assert result.n == logistic(t)
    assert 1 <= result.n <= unit_timer.j
    assert result.ramp_len == unit_timer.j


def test_midpoint_time_gives_midpoint_n(unit_timer, logistic):
    assert tune(noiseless(500), unit_timer, logistic).n == 500


def test_ramp_stops_at_budget(unit_timer, logistic):
    executor = noiseless(10**7)
    result = tune(executor, unit_timer, logistic, tuning_budget_ns=10**8)
    assert result.ramp_len == 4
    assert executor.calls == 4
    assert result.n == 1


@pytest.mark.parametrize("seed", range(5))
def test_timer_error_can_only_raise_n(seed, unit_timer, logistic):
    executor = SimulatedExecutor(
        SyntheticProgram(k=1, t_p0=500), error=TimerErrorModel(kind="uniform", bound=1000), seed=seed
    )
    result = tune(executor, unit_timer, logistic, tuning_budget_ns=10**7)
    assert result.t_hat_ns <= 500
    assert result.n >= logistic(500)


@pytest.mark.parametrize("seed", range(5))
def test_delays_alone_never_underestimate(seed, unit_timer, logistic):
    factors = [DelayFactor(tau=40, probs=0.3), DelayFactor(tau=2000, probs=0.01)]
    executor = SimulatedExecutor(SyntheticProgram(k=8, t_p0=500), factors, seed=seed)
    result = tune(executor, unit_timer, logistic, tuning_budget_ns=10**6)
    assert result.t_hat_ns >= 500
    assert result.n <= logistic(500)


def test_all_zero_ramp_is_degenerate(unit_timer, logistic):
    with pytest.raises(DegenerateBenchmarkError):
        tune(ZeroExecutor(), unit_timer, logistic, tuning_budget_ns=10**6)


def test_executor_failure_is_wrapped(unit_timer, logistic):
    with pytest.raises(ExecutorError):
        tune(FailingExecutor(), unit_timer, logistic)


def test_lookup_oracle_drives_tuning(unit_timer):
    table = OracleSpec.lookup(unit_timer, [(10, 800), (100, 40)])
    assert tune(noiseless(50), unit_timer, table).n == 40
    assert tune(noiseless(5000), unit_timer, table, tuning_budget_ns=10**5).n == 1


def test_cache_round_trip(tmp_path, unit_timer, logistic):
    path = tmp_path / "cache" / "tune.json"
    result = tune(noiseless(300), unit_timer, logistic, benchmark_id="sumindex")
    fingerprint = machine_fingerprint(unit_timer)
    cache_store(path, result, fingerprint)
    assert cache_lookup(path, "sumindex", fingerprint) == result
    assert cache_lookup(path, "other", fingerprint) is None


def test_fingerprints_isolate_machines(tmp_path, unit_timer, logistic):
    path = tmp_path / "tune.json"
    here = machine_fingerprint(unit_timer, hostname="alpha", cpu_model="cpu")
    there = machine_fingerprint(unit_timer, hostname="beta", cpu_model="cpu")
    assert here != there
    assert len(here) == 16
    cache_store(path, tune(noiseless(300), unit_timer, logistic, benchmark_id="b"), here)
    assert cache_lookup(path, "b", there) is None


def test_store_upserts(tmp_path, unit_timer, logistic):
    path = tmp_path / "tune.json"
    cache_store(path, tune(noiseless(300), unit_timer, logistic, benchmark_id="b"), "fp")
    newer = tune(noiseless(900), unit_timer, logistic, benchmark_id="b")
    cache = cache_store(path, newer, "fp")
    assert len(cache) == 1
    assert cache_lookup(path, "b", "fp").n == newer.n


def test_missing_cache_is_empty(tmp_path):
    assert len(TuneCache.load(tmp_path / "absent.json")) == 0


def test_corrupt_cache_raises(tmp_path):
    path = tmp_path / "tune.json"
    path.write_text("{not json")
    with pytest.raises(CacheParseError):
        TuneCache.load(path)
    path.write_text('{"schema_version": 99, "entries": []}')
    with pytest.raises(CacheParseError):
        TuneCache.load(path)


def test_unwritable_cache_raises(tmp_path, unit_timer, logistic):
    blocker = tmp_path / "file"
    blocker.write_text("")
    result = tune(noiseless(300), unit_timer, logistic)
    with pytest.raises(PersistenceError):
        cache_store(blocker / "tune.json", result, "fp")


def test_scaling_curve_and_convergence():
    curve = scaling_curve(noiseless(100), [1, 4, 16], repeats=2)
    assert curve == [(1, 100.0), (4, 100.0), (16, 100.0)]
    assert convergence_n(curve) == 1
    
    noisy = [(1, 200.0), (2, 150.0), (4, 101.0), (8, 100.0), (16, 100.5)]
    assert convergence_n(noisy, rel_tol=0.02) == 4


def test_build_lookup_table(unit_timer):
    table = build_lookup_table([(1000, 5), (10, 2000), (100, 300)], unit_timer)
    assert table == [(10.0, 1000), (100.0, 300), (1000.0, 5)]
    OracleSpec.lookup(unit_timer, table)
    assert build_lookup_table([(10, 50), (100, 300)], unit_timer) == [(10.0, 50), (100.0, 50)]
