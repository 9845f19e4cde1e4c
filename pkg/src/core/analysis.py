"""
Location estimates, regression verdicts and density curves for timing samples.
"""

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.stats import iqr, norm

from .delay_model import Measurement, Trial
from .errors import DomainError
from ..utils import get_logger, ensure_dir

logger = get_logger(__name__)

DEFAULT_THRESHOLD = 0.30
KDE_SPAN_BANDWIDTHS = 5.0
KDE_CUTOFF_BANDWIDTHS = 8.0
KDE_CHUNK = 1024
KDE_MAX_POINTS = 200_000


class Verdict(Enum):
    """Outcome of comparing two runs."""
    REGRESSION = "regression"
    IMPROVEMENT = "improvement"
    UNCHANGED = "unchanged"


@dataclass(frozen=True)
class EstimateSet:
    """Location estimates of per-execution time (ns)."""
    min_ns: float
    mean_ns: float
    median_ns: float
    trimmed_mean_ns: float
    sample_count: int
    n_execs: int
    trim_percentile: float = 95.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "min_ns": self.min_ns,
            "mean_ns": self.mean_ns,
            "median_ns": self.median_ns,
            "trimmed_mean_ns": self.trimmed_mean_ns,
            "sample_count": self.sample_count,
            "n_execs": self.n_execs,
            "trim_percentile": self.trim_percentile,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EstimateSet":
        return cls(
            min_ns=float(data["min_ns"]),
            mean_ns=float(data["mean_ns"]),
            median_ns=float(data["median_ns"]),
            trimmed_mean_ns=float(data["trimmed_mean_ns"]),
            sample_count=int(data["sample_count"]),
            n_execs=int(data["n_execs"]),
            trim_percentile=float(data.get("trim_percentile", 95.0)),
        )


@dataclass(frozen=True)
class ComparisonResult:
    """Regression verdict on the minima of two runs."""
    baseline_min_ns: float
    candidate_min_ns: float
    ratio: float
    threshold: float
    verdict: Verdict

    def to_dict(self) -> Dict[str, Any]:
        return {
            "baseline_min_ns": self.baseline_min_ns,
            "candidate_min_ns": self.candidate_min_ns,
            "ratio": self.ratio,
            "threshold": self.threshold,
            "verdict": self.verdict.value,
        }


@dataclass
class DensityCurve:
    """Kernel density estimate on a grid of uniform step (empty stretches omitted)."""
    points: List[Tuple[float, float]]
    bandwidth_ns: float

    def times(self) -> np.ndarray:
        return np.asarray([t for t, _ in self.points])

    def densities(self) -> np.ndarray:
        return np.asarray([d for _, d in self.points])

    def integral(self) -> float:
        return float(trapezoid(self.densities(), self.times()))

    def local_maxima(self, floor_fraction: float = 1e-3) -> List[float]:
        """Times of strict interior local maxima above floor_fraction * peak."""
        d = self.densities()
        if d.size < 3:
            return []
        floor = floor_fraction * float(d.max())
        inner = (d[1:-1] > d[:-2]) & (d[1:-1] > d[2:]) & (d[1:-1] > floor)
        return self.times()[1:-1][inner].tolist()

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.points, columns=["time_ns", "density"])

    def to_csv(self, path: Union[str, Path]):
        """Two-column CSV for external plotting."""
        path = Path(path)
        ensure_dir(path.parent)
        self.to_frame().to_csv(path, index=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"bandwidth_ns": self.bandwidth_ns, "points": [[t, d] for t, d in self.points]}


def _as_samples(samples: Sequence[float]) -> np.ndarray:
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise DomainError("no samples")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("samples must be finite and >= 0")
    return arr


def trimmed_mean(samples: Sequence[float], upper_pct: float = 95.0) -> float:
    """
    Mean of samples inside [lower cut, upper cut], both inclusive.
    
    The upper cut is the nearest-rank percentile (rank ceil(p/100 * N)); the
    lower cut mirrors it from the bottom (rank N + 1 - that rank), so equal
    numbers of order statistics leave each tail. For 1..20 that keeps 2..19.
    """
    ordered = np.sort(_as_samples(samples))
    count = ordered.size
    upper_rank = max(1, math.ceil(upper_pct * count / 100.0))
    lower_rank = count + 1 - upper_rank
    if lower_rank > upper_rank:
        lower_rank, upper_rank = upper_rank, lower_rank
    lo = ordered[lower_rank - 1]
    hi = ordered[upper_rank - 1]
    kept = ordered[(ordered >= lo) & (ordered <= hi)]
    return float(np.mean(kept))


def location_estimates(samples: Sequence[float], n_execs: int = 1, upper_pct: float = 95.0) -> EstimateSet:
    """Minimum, mean, median and trimmed mean of per-execution samples."""
    arr = _as_samples(samples)
    return EstimateSet(
        min_ns=float(np.min(arr)),
        mean_ns=float(np.mean(arr)),
        median_ns=float(np.median(arr)),
        trimmed_mean_ns=trimmed_mean(arr, upper_pct),
        sample_count=int(arr.size),
        n_execs=int(n_execs),
        trim_percentile=float(upper_pct),
    )


def minimum_estimate(measurements: Sequence[Measurement]) -> float:
    """min over T_i / n_i."""
    if not measurements:
        raise DomainError("no measurements")
    return min(m.total_time / m.n_execs for m in measurements)


def trial_summary(trial: Trial) -> Dict[str, Any]:
    """Per-trial raw data plus its min/mean/median, as stored in reports."""
    per_exec = trial.per_exec_times()
    return {
        "trial_index": trial.trial_index,
        "n_execs": trial.n_execs,
        "total_times_ns": trial.total_times(),
        "min_ns": float(np.min(per_exec)),
        "mean_ns": float(np.mean(per_exec)),
        "median_ns": float(np.median(per_exec)),
    }


def pooled_samples(trials: Sequence[Dict[str, Any]]) -> Tuple[np.ndarray, int]:
    """Per-execution samples from stored trial summaries, in trial order."""
    if not trials:
        raise DomainError("record has no trials")
    n_execs = int(trials[0]["n_execs"])
    pieces = [np.asarray(t["total_times_ns"], dtype=float) / int(t["n_execs"]) for t in trials]
    return np.concatenate(pieces), n_execs


def recompute_estimates(record: Dict[str, Any], upper_pct: Optional[float] = None) -> EstimateSet:
    """
    Rebuild a record's EstimateSet from its raw measurements.
    
    The trim percentile defaults to the one stored with the record's estimates.
    """
    if upper_pct is None:
        upper_pct = float(record.get("estimates", {}).get("trim_percentile", 95.0))
    samples, n_execs = pooled_samples(record["trials"])
    return location_estimates(samples, n_execs, upper_pct)


def _verdict(ratio: float, threshold: float) -> Verdict:
    upper = 1.0 + threshold
    lower = 1.0 - threshold
    if ratio >= upper or math.isclose(ratio, upper, rel_tol=1e-12):
        return Verdict.REGRESSION
    if ratio <= lower or math.isclose(ratio, lower, rel_tol=1e-12):
        return Verdict.IMPROVEMENT
    return Verdict.UNCHANGED


def compare_runs(baseline: EstimateSet, candidate: EstimateSet, threshold: float = DEFAULT_THRESHOLD) -> ComparisonResult:
    """
    Compare minima: regression at >= (1 + threshold) times the baseline,
    improvement at <= (1 - threshold), otherwise unchanged.
    """
    if threshold <= 0:
        raise DomainError(f"threshold must be positive, got {threshold}")
    if baseline.min_ns <= 0:
        raise DomainError(f"baseline minimum must be positive, got {baseline.min_ns}")
    if candidate.min_ns <= 0:
        raise DomainError(f"candidate minimum must be positive, got {candidate.min_ns}")
    ratio = candidate.min_ns / baseline.min_ns
    return ComparisonResult(
        baseline_min_ns=baseline.min_ns,
        candidate_min_ns=candidate.min_ns,
        ratio=ratio,
        threshold=threshold,
        verdict=_verdict(ratio, threshold),
    )


def silverman_bandwidth(samples: np.ndarray) -> float:
    """h = 0.9 * min(sigma, IQR / 1.34) * N^(-1/5); falls back to sigma if IQR is 0."""
    count = samples.size
    sigma = float(np.std(samples, ddof=1))
    spread = float(iqr(samples)) / 1.34
    scale = min(sigma, spread) if spread > 0 else sigma
    return 0.9 * scale * count ** (-0.2)


def _kde_grid(ordered: np.ndarray, h: float, grid_size: int) -> np.ndarray:
    """
    Grid of one uniform step, at most h/2, over [min - 5h, max + 5h].
    
    Stretches more than 10h wide with no sample in them are left out, so a
    tight mode next to far outliers still gets a fine step.
    """
    span = KDE_SPAN_BANDWIDTHS * h
    gaps = np.flatnonzero(np.diff(ordered) > 2 * span)
    starts = np.concatenate(([ordered[0]], ordered[gaps + 1])) - span
    ends = np.concatenate((ordered[gaps], [ordered[-1]])) + span
    covered = float(np.sum(ends - starts))
    step = min(h / 2.0, covered / (grid_size - 1))
    if covered / step > KDE_MAX_POINTS:
        logger.warning(f"KDE grid capped at {KDE_MAX_POINTS} points; step is {covered / KDE_MAX_POINTS:.3g} ns for h={h:.3g} ns")
        step = covered / KDE_MAX_POINTS
    pieces = [
        np.linspace(lo, hi, int(math.ceil((hi - lo) / step - 1e-9)) + 1)
        for lo, hi in zip(starts, ends)
    ]
    return np.concatenate(pieces)


def kde(
    samples: Sequence[float],
    bandwidth_ns: Optional[float] = None,
    grid_size: int = 512,
    tau_prec_ns: float = 1.0
) -> DensityCurve:
    """
    Gaussian kernel density over [min - 5h, max + 5h].
    
    Without an explicit bandwidth, Silverman's rule is used; identical
    samples fall back to the timer precision. grid_size is the minimum
    number of grid points.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size < 2:
        raise DomainError("KDE needs at least 2 samples")
    if bandwidth_ns is not None and bandwidth_ns <= 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_ns}")
    if grid_size < 3:
        raise DomainError("grid_size must be >= 3")

    if bandwidth_ns is None:
        bandwidth_ns = silverman_bandwidth(arr) if np.ptp(arr) > 0 else 0.0
        if not bandwidth_ns > 0:
            bandwidth_ns = float(tau_prec_ns)
    h = float(bandwidth_ns)

    ordered = np.sort(arr)
    grid = _kde_grid(ordered, h, grid_size)
    reach = KDE_CUTOFF_BANDWIDTHS * h
    density = np.zeros_like(grid)
    for start in range(0, grid.size, KDE_CHUNK):
        block = grid[start:start + KDE_CHUNK]
        lo, hi = np.searchsorted(ordered, [block[0] - reach, block[-1] + reach])
        for first in range(lo, hi, KDE_CHUNK):
            chunk = ordered[first:min(first + KDE_CHUNK, hi)]
            density[start:start + KDE_CHUNK] += norm.pdf((block[:, None] - chunk[None, :]) / h).sum(axis=1)
    density /= arr.size * h

    return DensityCurve(points=list(zip(grid.tolist(), density.tolist())), bandwidth_ns=h)
