"""
Selecting executions-per-measurement for a benchmark.

The ramp measures i = 1, 2, ... back-to-back executions, estimates the
per-execution time as the minimum of T_i / i, and asks the oracle for n.
Results are cached per (benchmark, machine) so the ramp runs once.
"""

import hashlib
import math
import platform
import socket
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    BenchmarkError,
    CacheParseError,
    DegenerateBenchmarkError,
    ExecutorError,
    InvalidConfigurationError,
    PersistenceError,
)
from .executors import Executor
from .oracle import OracleSpec, evaluate_oracle
from .timer import TimerSpec
from ..utils import get_logger, read_json, write_json_atomic

logger = get_logger(__name__)

CACHE_SCHEMA_VERSION = 1
DEFAULT_TUNING_BUDGET_NS = 5 * 10**9


@dataclass(frozen=True)
class TuneResult:
    """Outcome of the tuning ramp for one benchmark."""
    benchmark_id: str
    n: int
    t_hat_ns: float
    timer: TimerSpec
    oracle_kind: str
    tuned_at: str
    ramp_len: int

    def __post_init__(self):
        if not 1 <= self.n <= self.timer.j:
            raise InvalidConfigurationError(f"n={self.n} outside 1..{self.timer.j}")
        if not self.t_hat_ns > 0:
            raise InvalidConfigurationError(f"t_hat must be positive, got {self.t_hat_ns}")
        if self.ramp_len < 1:
            raise InvalidConfigurationError("ramp_len must be >= 1")

    def to_dict(self) -> Dict:
        return {
            "benchmark_id": self.benchmark_id,
            "n": self.n,
            "t_hat_ns": self.t_hat_ns,
            "tau_acc_ns": self.timer.tau_acc_ns,
            "tau_prec_ns": self.timer.tau_prec_ns,
            "j": self.timer.j,
            "j_max": self.timer.j_max,
            "timer_source": self.timer.source,
            "oracle_kind": self.oracle_kind,
            "tuned_at": self.tuned_at,
            "ramp_len": self.ramp_len,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TuneResult":
        timer = TimerSpec(
            tau_acc_ns=int(data["tau_acc_ns"]),
            tau_prec_ns=int(data["tau_prec_ns"]),
            j=int(data["j"]),
            j_max=int(data.get("j_max", data["j"])),
            source=data.get("timer_source", "measured"),
        )
        return cls(
            benchmark_id=data["benchmark_id"],
            n=int(data["n"]),
            t_hat_ns=float(data["t_hat_ns"]),
            timer=timer,
            oracle_kind=data["oracle_kind"],
            tuned_at=data["tuned_at"],
            ramp_len=int(data["ramp_len"]),
        )


def tune(
    executor: Executor,
    timer: TimerSpec,
    oracle: OracleSpec,
    tuning_budget_ns: float = DEFAULT_TUNING_BUDGET_NS,
    benchmark_id: str = "benchmark"
) -> TuneResult:
    """
    Run the ascending ramp and consult the oracle.
    
    The ramp stops at i = j, or as soon as the cumulative measured ramp time
    reaches the budget, so it overshoots by at most one measurement. Points
    that read zero time are dropped; if all do, the workload is below the
    timer's precision and tuning fails.
    """
    if tuning_budget_ns <= 0:
        raise InvalidConfigurationError("tuning budget must be positive")

    per_exec: List[float] = []
    elapsed = 0
    ramp_len = 0
    for i in range(1, timer.j + 1):
        try:
            measurement = executor.measure(i)
        except BenchmarkError:
            raise
        except Exception as exc:
            raise ExecutorError(f"{benchmark_id}: executor failed at i={i}: {exc}") from exc
        ramp_len += 1
        elapsed += measurement.total_time
        if measurement.total_time > 0:
            per_exec.append(measurement.total_time / i)
        if elapsed >= tuning_budget_ns:
            logger.debug(f"{benchmark_id}: ramp stopped by budget after {ramp_len} points")
            break

    if not per_exec:
        raise DegenerateBenchmarkError(
            f"{benchmark_id}: every ramp point measured 0 ns; "
            f"the workload is faster than the timer precision even at i={ramp_len}"
        )

    t_hat = min(per_exec)
    n = min(evaluate_oracle(t_hat, oracle), timer.j)
    result = TuneResult(
        benchmark_id=benchmark_id,
        n=n,
        t_hat_ns=t_hat,
        timer=timer,
        oracle_kind=oracle.kind,
        tuned_at=datetime.now(timezone.utc).isoformat(),
        ramp_len=ramp_len,
    )
    logger.info(f"Tuned {benchmark_id}: t_hat={t_hat:.1f} ns -> n={n} ({ramp_len} ramp points)")
    return result


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------

def _cpu_model() -> str:
    """CPU model string, from /proc/cpuinfo where available."""
    cpuinfo = Path("/proc/cpuinfo")
    if cpuinfo.exists():
        try:
            for line in cpuinfo.read_text(errors="replace").splitlines():
                if line.lower().startswith("model name"):
                    return line.split(":", 1)[1].strip()
        except OSError:
            pass
    return platform.processor() or platform.machine()


def machine_fingerprint(timer: TimerSpec, hostname: Optional[str] = None, cpu_model: Optional[str] = None) -> str:
    """Hash of hostname, CPU model and timer spec."""
    parts = [
        hostname if hostname is not None else socket.gethostname(),
        cpu_model if cpu_model is not None else _cpu_model(),
        f"{timer.tau_acc_ns}/{timer.tau_prec_ns}/{timer.j}",
    ]
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()[:16]


class TuneCache:
    """Tune results keyed by (benchmark_id, machine fingerprint)."""

    def __init__(self, entries: Optional[Dict[Tuple[str, str], TuneResult]] = None):
        self.entries: Dict[Tuple[str, str], TuneResult] = dict(entries or {})
        self.schema_version = CACHE_SCHEMA_VERSION

    @classmethod
    def load(cls, path: Union[str, Path]) -> "TuneCache":
        path = Path(path)
        if not path.exists():
            return cls()
        try:
            data = read_json(path)
        except (ValueError, UnicodeDecodeError) as exc:
            raise CacheParseError(path, str(exc)) from exc
        if not isinstance(data, dict) or data.get("schema_version") != CACHE_SCHEMA_VERSION:
            raise CacheParseError(path, "missing or unsupported schema_version")
        entries = {}
        try:
            for raw in data.get("entries", []):
                result = TuneResult.from_dict(raw)
                entries[(result.benchmark_id, raw["fingerprint"])] = result
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheParseError(path, f"bad entry: {exc}") from exc
        return cls(entries)

    def save(self, path: Union[str, Path]):
        payload = {
            "schema_version": self.schema_version,
            "entries": [
                {**result.to_dict(), "fingerprint": fingerprint}
                for (benchmark_id, fingerprint), result in sorted(self.entries.items())
            ],
        }
        try:
            write_json_atomic(payload, path)
        except OSError as exc:
            raise PersistenceError(f"Cannot write tuning cache {path}: {exc}") from exc

    def get(self, benchmark_id: str, fingerprint: str) -> Optional[TuneResult]:
        return self.entries.get((benchmark_id, fingerprint))

    def put(self, result: TuneResult, fingerprint: str):
        self.entries[(result.benchmark_id, fingerprint)] = result

    def __len__(self) -> int:
        return len(self.entries)


def cache_store(cache_path: Union[str, Path], result: TuneResult, fingerprint: Optional[str] = None) -> TuneCache:
    """Upsert `result` and rewrite the cache file atomically."""
    fingerprint = fingerprint or machine_fingerprint(result.timer)
    cache = TuneCache.load(cache_path)
    cache.put(result, fingerprint)
    cache.save(cache_path)
    logger.debug(f"Cached {result.benchmark_id} under {fingerprint} in {cache_path}")
    return cache


def cache_lookup(cache_path: Union[str, Path], benchmark_id: str, fingerprint: str) -> Optional[TuneResult]:
    """Stored result for this benchmark on this machine, or None."""
    return TuneCache.load(cache_path).get(benchmark_id, fingerprint)


# ---------------------------------------------------------------------------
# Lookup-table regeneration
# ---------------------------------------------------------------------------

def scaling_curve(executor: Executor, n_values: Sequence[int], repeats: int = 5) -> List[Tuple[int, float]]:
    """Minimum T/n at each n over `repeats` measurements."""
    curve = []
    for n in n_values:
        best = math.inf
        for _ in range(repeats):
            measurement = executor.measure(n)
            if measurement.total_time > 0:
                best = min(best, measurement.per_exec)
        if math.isfinite(best):
            curve.append((int(n), best))
    return curve


def convergence_n(curve: Sequence[Tuple[int, float]], rel_tol: float = 0.02) -> int:
    """
    Smallest n whose minimum estimate, and that of every larger n, lies within
    rel_tol of the curve's lower bound.
    """
    if not curve:
        raise InvalidConfigurationError("empty scaling curve")
    ordered = sorted(curve)
    floor = min(value for _, value in ordered)
    limit = floor * (1.0 + rel_tol)
    chosen = ordered[-1][0]
    for n, value in reversed(ordered):
        if value > limit:
            break
        chosen = n
    return chosen


def build_lookup_table(observations: Sequence[Tuple[float, int]], timer: TimerSpec) -> List[Tuple[float, int]]:
    """
    Turn (t_hat, converged n) observations into a valid lookup table.
    
    Thresholds are the observed times; n is clamped to 1..j and forced
    non-increasing with a running minimum.
    """
    if not observations:
        raise InvalidConfigurationError("no observations to build a table from")
    table: List[Tuple[float, int]] = []
    running = timer.j
    for t_hat, n in sorted(observations):
        running = min(running, max(1, min(int(n), timer.j)))
        if table and t_hat <= table[-1][0]:
            table[-1] = (table[-1][0], min(table[-1][1], running))
            continue
        table.append((float(t_hat), running))
    return table
