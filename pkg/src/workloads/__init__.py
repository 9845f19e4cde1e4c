"""
Benchmark workloads and suite definitions.
"""

from .builtins import sumindex, pushall, branchsum, manyallocs, make_workload, DEFAULT_PARAMS
from .suite import (
    BenchmarkDefinition,
    builtin_workloads,
    load_suite,
    resolve_target,
    make_executor,
)

__all__ = [
    'sumindex',
    'pushall',
    'branchsum',
    'manyallocs',
    'make_workload',
    'DEFAULT_PARAMS',
    'BenchmarkDefinition',
    'builtin_workloads',
    'load_suite',
    'resolve_target',
    'make_executor',
]
