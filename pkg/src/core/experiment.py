"""
Running a tuned benchmark under a time budget, and the report it produces.
"""

import platform
import socket
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from tqdm import tqdm

from .analysis import (
    DensityCurve,
    EstimateSet,
    kde,
    pooled_samples,
    location_estimates,
    trial_summary,
)
from .delay_model import Measurement, Scenario, Trial
from .errors import BudgetExhaustedError, InvalidConfigurationError
from .executors import Executor
from .timer import TimerSpec, describe_host_clock
from .tuning import TuneResult, machine_fingerprint
from ..utils import get_logger, read_json, write_json

logger = get_logger(__name__)

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExperimentConfig:
    """Shape and budget of one benchmark experiment."""
    tau_budget_ns: int
    measurements_per_trial: int = 10000
    trials: int = 10
    warmup_execs: int = 1

    def __post_init__(self):
        if self.tau_budget_ns <= 0:
            raise InvalidConfigurationError("tau_budget must be positive")
        if self.trials < 1:
            raise InvalidConfigurationError("trials must be >= 1")
        if self.measurements_per_trial < 1:
            raise InvalidConfigurationError("measurements_per_trial must be >= 1")
        if self.warmup_execs < 0:
            raise InvalidConfigurationError("warmup_execs must be >= 0")


@dataclass
class BenchmarkRecord:
    """Raw trials plus the estimates derived from them."""
    id: str
    trials: List[Trial]
    estimates: EstimateSet
    tune: Optional[TuneResult] = None
    density: Optional[DensityCurve] = None
    checksum: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "id": self.id,
            "tune": self.tune.to_dict() if self.tune else None,
            "trials": [trial_summary(trial) for trial in self.trials],
            "estimates": self.estimates.to_dict(),
            "density": self.density.to_dict() if self.density else None,
            "checksum": self.checksum,
        }
        data.update(self.extra)
        return data

    def raw_rows(self) -> List[Dict[str, Any]]:
        """One row per measurement, for JSONL dumps."""
        return [
            {
                "benchmark_id": self.id,
                "trial_index": trial.trial_index,
                "measurement_index": idx,
                "total_time_ns": m.total_time,
                "n_execs": m.n_execs,
            }
            for trial in self.trials
            for idx, m in enumerate(trial.measurements)
        ]


def estimates_for(trials: List[Trial], trim_percentile: float = 95.0) -> EstimateSet:
    """Pooled estimates, computed through the same path a report reader uses."""
    samples, n_execs = pooled_samples([trial_summary(trial) for trial in trials])
    return location_estimates(samples, n_execs, trim_percentile)


def run_experiment(
    executor: Executor,
    tune: TuneResult,
    cfg: ExperimentConfig,
    timer: TimerSpec,
    benchmark_id: Optional[str] = None,
    with_kde: bool = False,
    kde_grid_size: int = 512,
    trim_percentile: float = 95.0,
    progress: bool = False
) -> BenchmarkRecord:
    """
    Warm up, then collect measurements of tune.n executions each.
    
    Stops after cfg.trials full trials or once the cumulative measured time
    reaches the budget, whichever comes first; a partial last trial is kept.
    """
    benchmark_id = benchmark_id or tune.benchmark_id
    n = tune.n
    if n < 1:
        raise InvalidConfigurationError(f"{benchmark_id}: tuned n must be >= 1")
    minimum_budget = n * tune.t_hat_ns
    if cfg.tau_budget_ns < minimum_budget:
        raise BudgetExhaustedError(
            f"{benchmark_id}: budget {cfg.tau_budget_ns} ns cannot fit one measurement; "
            f"need at least {minimum_budget:.0f} ns (n x t_hat)",
            minimum_budget_ns=minimum_budget,
        )

    executor.warmup(cfg.warmup_execs)

    trials: List[Trial] = []
    current: List[Measurement] = []
    elapsed = 0
    budget_hit = False
    total = cfg.trials * cfg.measurements_per_trial
    with tqdm(total=total, desc=benchmark_id, unit="meas", disable=not progress) as pbar:
        while len(trials) < cfg.trials:
            measurement = executor.measure(n)
            current.append(measurement)
            elapsed += measurement.total_time
            pbar.update(1)
            if len(current) == cfg.measurements_per_trial:
                trials.append(Trial(measurements=current, trial_index=len(trials)))
                current = []
            if elapsed >= cfg.tau_budget_ns:
                budget_hit = True
                break
    if current:
        trials.append(Trial(measurements=current, trial_index=len(trials)))

    measured = sum(len(trial) for trial in trials)
    if budget_hit:
        logger.info(f"{benchmark_id}: budget reached after {measured} measurements")
    estimates = estimates_for(trials, trim_percentile)
    density = None
    if with_kde and estimates.sample_count >= 2:
        samples, _ = pooled_samples([trial_summary(trial) for trial in trials])
        density = kde(samples, grid_size=kde_grid_size, tau_prec_ns=timer.tau_prec_ns)

    logger.info(
        f"{benchmark_id}: {measured} measurements in {len(trials)} trials, "
        f"min={estimates.min_ns:.1f} ns, median={estimates.median_ns:.1f} ns"
    )
    return BenchmarkRecord(
        id=benchmark_id,
        trials=trials,
        estimates=estimates,
        tune=tune,
        density=density,
        checksum=getattr(executor, "checksum", None),
    )


def simulation_record(
    scenario: Scenario,
    trials: List[Trial],
    with_kde: bool = False,
    kde_grid_size: int = 512,
    trim_percentile: float = 95.0
) -> BenchmarkRecord:
    """Record for simulated trials; carries the model's asymptotic T/n."""
    estimates = estimates_for(trials, trim_percentile)
    density = None
    if with_kde and estimates.sample_count >= 2:
        samples, _ = pooled_samples([trial_summary(trial) for trial in trials])
        density = kde(samples, grid_size=kde_grid_size)
    return BenchmarkRecord(
        id=scenario.name,
        trials=trials,
        estimates=estimates,
        density=density,
        extra={"asymptotic_per_exec_ns": scenario.asymptotic_per_exec_time()},
    )


def environment_info(timer: TimerSpec) -> Dict[str, Any]:
    return {
        "fingerprint": machine_fingerprint(timer),
        "hostname": socket.gethostname(),
        "platform": platform.platform(),
        "python": platform.python_version(),
        "clock": describe_host_clock(),
    }


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class BenchmarkReport:
    """Everything a run or simulation persists."""
    kind: str
    benchmarks: List[BenchmarkRecord]
    timer: Optional[TimerSpec] = None
    environment: Optional[Dict[str, Any]] = None
    started_at: Optional[str] = None
    finished_at: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "timer": self.timer.to_dict() if self.timer else None,
        }
        # simulation reports stay timestamp-free so equal seeds give equal bytes
        if self.environment is not None:
            data["environment"] = self.environment
        if self.started_at is not None:
            data["started_at"] = self.started_at
        if self.finished_at is not None:
            data["finished_at"] = self.finished_at
        data.update(self.extra)
        data["benchmarks"] = [record.to_dict() for record in self.benchmarks]
        return data

    def save(self, path: Union[str, Path]):
        write_json(self.to_dict(), path)
        logger.info(f"Report written to {path}")


def load_report(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a report file and check its schema version."""
    data = read_json(path)
    if not isinstance(data, dict) or data.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise InvalidConfigurationError(f"{path}: not a schema-version-{REPORT_SCHEMA_VERSION} report")
    if not isinstance(data.get("benchmarks"), list):
        raise InvalidConfigurationError(f"{path}: report has no 'benchmarks' list")
    return data


def report_estimates(report: Dict[str, Any]) -> Dict[str, EstimateSet]:
    """Benchmark id -> stored EstimateSet."""
    return {record["id"]: EstimateSet.from_dict(record["estimates"]) for record in report["benchmarks"]}
