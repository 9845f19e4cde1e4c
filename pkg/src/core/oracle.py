"""
Oracle functions nu(t) -> n: executions per measurement for an estimated time.

Two forms: the generalized logistic

    Y(t) = floor(1 + (j - 1) / (1 + exp(a * (t - b * tau_acc))))

and a step lookup table. Both map onto {1, ..., j}.
"""

import bisect
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidConfigurationError
from .timer import TimerSpec
from ..utils import get_logger, read_json, write_json

logger = get_logger(__name__)

LOGISTIC = "logistic"
LOOKUP = "lookup"

A_PREC_RANGE = (0.005, 0.02)
B_RANGE = (0.4, 0.6)
EXPONENT_CLAMP = 700.0
TABLE_SCAN_POINTS = 4000

Table = Tuple[Tuple[float, int], ...]


@dataclass(frozen=True)
class OracleSpec:
    """Parameters of an oracle function, bound to one TimerSpec."""
    kind: str
    timer: TimerSpec
    a: Optional[float] = None
    b: Optional[float] = None
    table: Table = field(default_factory=tuple)
    check_ranges: bool = True

    def __post_init__(self):
        if self.kind == LOGISTIC:
            if self.a is None or self.b is None:
                raise InvalidConfigurationError("logistic oracle needs both a and b")
            if self.check_ranges:
                a_prec = self.a * self.timer.tau_prec_ns
                if not A_PREC_RANGE[0] < a_prec < A_PREC_RANGE[1]:
                    raise InvalidConfigurationError(
                        f"a*tau_prec={a_prec:g} outside {A_PREC_RANGE}"
                    )
                if not B_RANGE[0] < self.b < B_RANGE[1]:
                    raise InvalidConfigurationError(f"b={self.b:g} outside {B_RANGE}")
        elif self.kind == LOOKUP:
            _check_table(self.table, self.timer.j)
        else:
            raise InvalidConfigurationError(f"Unknown oracle kind: {self.kind}")

    @classmethod
    def logistic(
        cls, timer: TimerSpec, a: float, b: float, check_ranges: bool = True
    ) -> "OracleSpec":
        return cls(kind=LOGISTIC, timer=timer, a=float(a), b=float(b), check_ranges=check_ranges)

    @classmethod
    def lookup(cls, timer: TimerSpec, table: Sequence[Sequence[float]]) -> "OracleSpec":
        normalized = tuple((float(t), int(n)) for t, n in table)
        return cls(kind=LOOKUP, timer=timer, table=normalized)

    def __call__(self, t: float) -> int:
        return evaluate_oracle(t, self)


def _check_table(table: Table, j: int):
    """Lookup-table invariants: non-empty, thresholds increasing, n non-increasing in {1..j}."""
    if not table:
        raise InvalidConfigurationError("lookup oracle table is empty")
    for idx, (threshold, n) in enumerate(table):
        if not 1 <= n <= j:
            raise InvalidConfigurationError(f"table entry {idx}: n={n} outside 1..{j}")
        if idx > 0:
            prev_threshold, prev_n = table[idx - 1]
            if threshold <= prev_threshold:
                raise InvalidConfigurationError(
                    f"table thresholds must strictly increase (entry {idx})"
                )
            if n > prev_n:
                raise InvalidConfigurationError(
                    f"table n values must not increase (entry {idx})"
                )


def logistic_oracle(t: float, spec: OracleSpec) -> int:
    """Generalized logistic oracle, clamped to {1, ..., j}."""
    if t < 0:
        raise InvalidConfigurationError(f"execution time must be >= 0, got {t}")
    j = spec.timer.j
    exponent = spec.a * (t - spec.b * spec.timer.tau_acc_ns)
    exponent = min(max(exponent, -EXPONENT_CLAMP), EXPONENT_CLAMP)
    y = math.floor(1.0 + (j - 1) / (1.0 + math.exp(exponent)))
    return int(min(max(y, 1), j))


def lookup_oracle(t: float, spec: OracleSpec) -> int:
    """n of the first entry whose threshold is >= t; past the last threshold, 1."""
    if not spec.table:
        raise InvalidConfigurationError("lookup oracle table is empty")
    thresholds = [threshold for threshold, _ in spec.table]
    idx = bisect.bisect_left(thresholds, t)
    if idx == len(thresholds):
        return 1
    return spec.table[idx][1]


def evaluate_oracle(t: float, spec: OracleSpec) -> int:
    """Dispatch on the oracle kind."""
    if spec.kind == LOGISTIC:
        return logistic_oracle(t, spec)
    return lookup_oracle(t, spec)


def default_lookup_table(
    timer: TimerSpec, a: float = 0.009, b: float = 0.5, tolerance: float = 0.025
) -> List[Tuple[float, int]]:
    """
    Step table that never picks fewer executions than the logistic shape.
    
    Times are scanned geometrically from tau_prec to 2*tau_acc. Each bucket
    carries the logistic value at its lower edge, and a new bucket starts
    once the logistic has fallen more than tolerance * j below it. The
    table ends where the logistic reaches 1. It is only a starting point;
    regenerate it per machine.
    """
    shape = OracleSpec.logistic(timer, a, b, check_ranges=False)
    step = max(1, int(tolerance * timer.j))
    scan = np.unique(np.rint(np.geomspace(
        timer.tau_prec_ns, 2 * timer.tau_acc_ns, TABLE_SCAN_POINTS
    ))).tolist()
    if len(scan) < 2:
        return [(float(scan[0]), logistic_oracle(scan[0], shape))]

    table: List[Tuple[float, int]] = []
    edge_value = logistic_oracle(scan[0], shape)
    for prev, t in zip(scan[:-1], scan[1:]):
        value = logistic_oracle(t, shape)
        if value < edge_value - step:
            table.append((float(prev), edge_value))
            edge_value = logistic_oracle(prev, shape)
        if value == 1:
            table.append((float(t), edge_value))
            return table
    table.append((float(scan[-1]), edge_value))
    return table


def load_table(path: Union[str, Path]) -> List[Tuple[float, int]]:
    """Read a [[threshold_ns, n], ...] JSON table."""
    data = read_json(path)
    if not isinstance(data, list):
        raise InvalidConfigurationError(f"{path}: lookup table must be a JSON array")
    return [(float(pair[0]), int(pair[1])) for pair in data]


def save_table(table: Sequence[Tuple[float, int]], path: Union[str, Path]):
    """Write a lookup table as JSON pairs."""
    write_json([[threshold, n] for threshold, n in table], path)


# ---------------------------------------------------------------------------
# Property validation
# ---------------------------------------------------------------------------

@dataclass
class PropertyFailure:
    """One failed oracle property with the time that exposes it."""
    prop: str
    witness_t: float
    detail: str


@dataclass
class OracleReport:
    """Outcome of validate_oracle over a time grid."""
    grid_points: int
    failures: List[PropertyFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def failed_properties(self) -> List[str]:
        return sorted({f.prop for f in self.failures})

    def to_dict(self):
        return {
            "passed": self.passed,
            "grid_points": self.grid_points,
            "failures": [
                {"property": f.prop, "witness_t_ns": f.witness_t, "detail": f.detail}
                for f in self.failures
            ],
        }


def default_grid(timer: TimerSpec, points: int = 200) -> List[float]:
    """Log-spaced grid over [tau_prec/10, 10*tau_acc] containing tau_prec and tau_acc."""
    lo = timer.tau_prec_ns / 10.0
    hi = 10.0 * timer.tau_acc_ns
    grid = set(np.geomspace(lo, hi, num=max(points - 2, 2)).tolist())
    grid.update((float(timer.tau_prec_ns), float(timer.tau_acc_ns)))
    return sorted(grid)


def validate_oracle(
    spec: OracleSpec,
    grid: Sequence[float],
    near_j_fraction: float = 0.9,
    saturation_factor: float = 2.0,
    perturbation: float = 0.1,
    sensitivity: float = 0.05
) -> OracleReport:
    """
    Check the oracle properties over a grid.
    
    range:          every value in {1, ..., j}
    monotone:       non-increasing in t
    near_j:         nu(tau_prec) >= near_j_fraction * j
    saturation:     nu(t) == 1 for t >= saturation_factor * tau_acc
    weak_endpoints: a +/-perturbation change of t near tau_prec and tau_acc moves
                    nu by at most sensitivity * j
    """
    timer = spec.timer
    j = timer.j
    tau_prec = float(timer.tau_prec_ns)
    tau_acc = float(timer.tau_acc_ns)

    points = sorted(float(t) for t in grid)
    if len(points) < 100:
        raise InvalidConfigurationError(f"validation grid needs >= 100 points, got {len(points)}")
    if points[0] > tau_prec / 10.0 or points[-1] < 10.0 * tau_acc:
        raise InvalidConfigurationError("validation grid must cover [tau_prec/10, 10*tau_acc]")
    if tau_prec not in points or tau_acc not in points:
        raise InvalidConfigurationError("validation grid must contain tau_prec and tau_acc")

    report = OracleReport(grid_points=len(points))
    values = [evaluate_oracle(t, spec) for t in points]

    for t, n in zip(points, values):
        if not 1 <= n <= j:
            report.failures.append(PropertyFailure("range", t, f"nu={n} outside 1..{j}"))

    for (t0, n0), (t1, n1) in zip(zip(points, values), zip(points[1:], values[1:])):
        if n1 > n0:
            report.failures.append(
                PropertyFailure("monotone", t1, f"nu({t0:g})={n0} < nu({t1:g})={n1}")
            )

    n_prec = evaluate_oracle(tau_prec, spec)
    if n_prec < near_j_fraction * j:
        report.failures.append(
            PropertyFailure("near_j", tau_prec, f"nu(tau_prec)={n_prec} < {near_j_fraction}*j")
        )

    for t, n in zip(points, values):
        if t >= saturation_factor * tau_acc and n != 1:
            report.failures.append(
                PropertyFailure("saturation", t, f"nu={n} != 1 beyond {saturation_factor}*tau_acc")
            )

    for anchor in (tau_prec, tau_acc):
        base = evaluate_oracle(anchor, spec)
        for shifted in (anchor * (1.0 - perturbation), anchor * (1.0 + perturbation)):
            moved = evaluate_oracle(shifted, spec)
            if abs(moved - base) / j > sensitivity:
                report.failures.append(
                    PropertyFailure(
                        "weak_endpoints", shifted,
                        f"nu moved {base} -> {moved} for a {perturbation:.0%} shift from {anchor:g}"
                    )
                )

    if report.passed:
        logger.debug(f"Oracle {spec.kind} passed all properties on {len(points)} points")
    else:
        logger.warning(f"Oracle {spec.kind} failed: {', '.join(report.failed_properties())}")
    return report
