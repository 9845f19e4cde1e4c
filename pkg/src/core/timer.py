"""
Timer calibration: precision measurement and the repetition bound j.

Durations are integer nanoseconds at this layer.
"""

import time
from dataclasses import dataclass
from typing import Callable, Dict, Any, Optional

from .errors import CalibrationError, InvalidConfigurationError
from ..utils import get_logger

logger = get_logger(__name__)

Clock = Callable[[], int]

DEFAULT_J_MAX = 10000
DEFAULT_ACC_MULTIPLE = 1000
MIN_PRECISION_SAMPLES = 1000

# Reads per pair before a clock that never advances is declared broken
SPIN_LIMIT = 1_000_000


@dataclass(frozen=True)
class TimerSpec:
    """Timer accuracy, precision and the derived repetition bound j."""
    tau_acc_ns: int
    tau_prec_ns: int
    j: int
    j_max: int = DEFAULT_J_MAX
    source: str = "measured"

    def __post_init__(self):
        if self.tau_prec_ns <= 0:
            raise InvalidConfigurationError(
                f"tau_prec must be positive, got {self.tau_prec_ns}"
            )
        if self.tau_acc_ns < self.tau_prec_ns:
            raise InvalidConfigurationError(
                f"tau_acc ({self.tau_acc_ns} ns) is below tau_prec ({self.tau_prec_ns} ns)"
            )
        if self.j_max < 1:
            raise InvalidConfigurationError(f"j_max must be >= 1, got {self.j_max}")
        expected = min(self.tau_acc_ns // self.tau_prec_ns, self.j_max)
        if self.j != expected:
            raise InvalidConfigurationError(
                f"j={self.j} inconsistent with tau_acc/tau_prec capped at j_max (expected {expected})"
            )
        if self.source not in ("measured", "configured"):
            raise InvalidConfigurationError(f"Unknown timer source: {self.source}")

    def to_dict(self) -> Dict[str, Any]:
        """Calibrate-subcommand JSON object."""
        return {
            "tau_acc_ns": self.tau_acc_ns,
            "tau_prec_ns": self.tau_prec_ns,
            "j": self.j,
            "j_max": self.j_max,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TimerSpec":
        return cls(
            tau_acc_ns=int(data["tau_acc_ns"]),
            tau_prec_ns=int(data["tau_prec_ns"]),
            j=int(data["j"]),
            j_max=int(data.get("j_max", DEFAULT_J_MAX)),
            source=data.get("source", "measured"),
        )


class SimulatedClock:
    """
    Deterministic clock that advances by a fixed granularity on every read.
    """

    def __init__(self, granularity_ns: int, start_ns: int = 0):
        if granularity_ns <= 0:
            raise InvalidConfigurationError("granularity must be positive")
        self.granularity_ns = granularity_ns
        self._now = start_ns

    def __call__(self) -> int:
        self._now += self.granularity_ns
        return self._now

    def __repr__(self) -> str:
        return f"SimulatedClock(granularity_ns={self.granularity_ns})"


def host_clock() -> Clock:
    """The host's high-resolution monotonic clock."""
    return time.perf_counter_ns


def describe_host_clock() -> Dict[str, Any]:
    """Clock metadata reported by the interpreter."""
    info = time.get_clock_info("perf_counter")
    return {
        "implementation": info.implementation,
        "resolution_s": info.resolution,
        "monotonic": info.monotonic,
        "adjustable": info.adjustable,
    }


def measure_precision(clock: Clock, samples: int = MIN_PRECISION_SAMPLES) -> int:
    """
    Smallest strictly positive difference between consecutive clock reads.
    
    Each pair reads the clock, then keeps reading until the value changes,
    so a coarse clock reports its tick rather than zero.
    
    Args:
        clock: Monotonic clock returning integer nanoseconds
        samples: Number of read pairs (>= 1000)
        
    Returns:
        Precision in nanoseconds
    """
    if samples < MIN_PRECISION_SAMPLES:
        raise InvalidConfigurationError(
            f"precision measurement needs >= {MIN_PRECISION_SAMPLES} samples, got {samples}"
        )
    
    best: Optional[int] = None
    previous: Optional[int] = None
    for pair in range(samples):
        first = clock()
        if previous is not None and first < previous:
            raise CalibrationError(
                f"Non-monotonic clock before pair {pair}: {previous} -> {first}",
                pair_index=pair,
            )
        second = clock()
        spins = 0
        while second == first:
            spins += 1
            if spins >= SPIN_LIMIT:
                raise CalibrationError(
                    f"Clock did not advance within {SPIN_LIMIT} reads at pair {pair}",
                    pair_index=pair,
                )
            second = clock()
        
        previous = second
        delta = second - first
        if delta < 0:
            raise CalibrationError(
                f"Non-monotonic clock at pair {pair}: {first} -> {second}",
                pair_index=pair,
            )
        if best is None or delta < best:
            best = delta
    
    logger.debug(f"Measured timer precision: {best} ns over {samples} pairs")
    return int(best)


def resolve_timer_spec(
    measured_prec: int,
    configured_acc: Optional[int] = None,
    j_max: int = DEFAULT_J_MAX
) -> TimerSpec:
    """
    Build the TimerSpec from a measured precision and an optional accuracy.
    
    An unconfigured accuracy defaults to 1000 x precision. Overestimating
    accuracy only raises j, which stays a valid (if conservative) choice.
    """
    if measured_prec <= 0:
        raise InvalidConfigurationError(f"measured precision must be positive, got {measured_prec}")
    if j_max < 1:
        raise InvalidConfigurationError(f"j_max must be >= 1, got {j_max}")
    
    if configured_acc is None:
        acc = DEFAULT_ACC_MULTIPLE * measured_prec
        source = "measured"
    else:
        acc = int(configured_acc)
        source = "configured"
        if acc < measured_prec:
            raise InvalidConfigurationError(
                f"configured tau_acc ({acc} ns) is below measured precision ({measured_prec} ns)"
            )
    
    j = min(acc // measured_prec, j_max)
    return TimerSpec(
        tau_acc_ns=acc,
        tau_prec_ns=int(measured_prec),
        j=j,
        j_max=j_max,
        source=source,
    )


def calibrate(
    configured_acc: Optional[int] = None,
    j_max: int = DEFAULT_J_MAX,
    samples: int = MIN_PRECISION_SAMPLES,
    clock: Optional[Clock] = None
) -> TimerSpec:
    """Measure the host clock and resolve its TimerSpec."""
    clock = clock or host_clock()
    precision = measure_precision(clock, samples)
    spec = resolve_timer_spec(precision, configured_acc, j_max)
    logger.info(
        f"Timer: tau_prec={spec.tau_prec_ns} ns, tau_acc={spec.tau_acc_ns} ns "
        f"({spec.source}), j={spec.j}"
    )
    return spec
