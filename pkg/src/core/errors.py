"""
Exception hierarchy for the harness.
"""

from pathlib import Path
from typing import Optional, Union


class BenchmarkError(Exception):
    """Root of every error the harness raises on purpose."""


class CalibrationError(BenchmarkError):
    """Timer calibration failed (e.g. the clock went backwards)."""

    def __init__(self, message: str, pair_index: Optional[int] = None):
        super().__init__(message)
        self.pair_index = pair_index


class InvalidConfigurationError(BenchmarkError, ValueError):
    """A configuration value violates its invariants."""


class DomainError(BenchmarkError, ValueError):
    """An input lies outside the domain of a statistical operation."""


class DegenerateBenchmarkError(BenchmarkError):
    """Every ramp measurement read zero: the workload is below timer precision."""


class BudgetExhaustedError(BenchmarkError):
    """The time budget cannot fit even one measurement."""

    def __init__(self, message: str, minimum_budget_ns: float):
        super().__init__(message)
        self.minimum_budget_ns = minimum_budget_ns


class ExecutorError(BenchmarkError):
    """The benchmark workload failed while being executed."""


class PersistenceError(BenchmarkError):
    """A cache or report file could not be written."""


class CacheParseError(BenchmarkError):
    """A cache file exists but cannot be parsed."""

    def __init__(self, path: Union[str, Path], reason: str):
        super().__init__(f"Corrupt tuning cache {path}: {reason}")
        self.path = Path(path)
