"""
Core components: timer calibration, oracle, delay model, tuning, analysis
and the experiment runner.
"""

from .errors import (
    BenchmarkError,
    CalibrationError,
    InvalidConfigurationError,
    DomainError,
    DegenerateBenchmarkError,
    BudgetExhaustedError,
    ExecutorError,
    PersistenceError,
    CacheParseError,
)
from .timer import (
    TimerSpec,
    SimulatedClock,
    host_clock,
    measure_precision,
    resolve_timer_spec,
    calibrate,
)
from .oracle import (
    OracleSpec,
    OracleReport,
    logistic_oracle,
    lookup_oracle,
    evaluate_oracle,
    validate_oracle,
    default_grid,
    default_lookup_table,
)
from .delay_model import (
    SyntheticProgram,
    DelayFactor,
    TimerErrorModel,
    Measurement,
    Trial,
    Scenario,
    trigger_count_pmf,
    simulate_measurement,
    simulate_trial,
    simulate_scenario,
    asymptotic_per_exec_time,
)
from .executors import Executor, SimulatedExecutor, CallableExecutor, CommandExecutor
from .tuning import TuneResult, TuneCache, tune, cache_store, cache_lookup, machine_fingerprint
from .analysis import (
    EstimateSet,
    ComparisonResult,
    DensityCurve,
    Verdict,
    location_estimates,
    minimum_estimate,
    compare_runs,
    kde,
    recompute_estimates,
)
from .experiment import (
    ExperimentConfig,
    BenchmarkRecord,
    BenchmarkReport,
    run_experiment,
    simulation_record,
    load_report,
)

__all__ = [
    'BenchmarkError', 'CalibrationError', 'InvalidConfigurationError', 'DomainError',
    'DegenerateBenchmarkError', 'BudgetExhaustedError', 'ExecutorError',
    'PersistenceError', 'CacheParseError',
    'TimerSpec', 'SimulatedClock', 'host_clock', 'measure_precision',
    'resolve_timer_spec', 'calibrate',
    'OracleSpec', 'OracleReport', 'logistic_oracle', 'lookup_oracle',
    'evaluate_oracle', 'validate_oracle', 'default_grid', 'default_lookup_table',
    'SyntheticProgram', 'DelayFactor', 'TimerErrorModel', 'Measurement', 'Trial',
    'Scenario', 'trigger_count_pmf', 'simulate_measurement', 'simulate_trial',
    'simulate_scenario', 'asymptotic_per_exec_time',
    'Executor', 'SimulatedExecutor', 'CallableExecutor', 'CommandExecutor',
    'TuneResult', 'TuneCache', 'tune', 'cache_store', 'cache_lookup', 'machine_fingerprint',
    'EstimateSet', 'ComparisonResult', 'DensityCurve', 'Verdict',
    'location_estimates', 'minimum_estimate', 'compare_runs', 'kde', 'recompute_estimates',
    'ExperimentConfig', 'BenchmarkRecord', 'BenchmarkReport', 'run_experiment',
    'simulation_record', 'load_report',
]
