"""Helpers shared by the CLI command modules."""

import sys
from typing import Any, Optional

from ..core import OracleSpec, TimerSpec, calibrate, default_lookup_table
from ..core.oracle import LOGISTIC, LOOKUP, load_table

SECONDS = 10**9


def banner(title: str):
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def show_progress(args: Any) -> bool:
    return not getattr(args, "quiet", False) and sys.stderr.isatty()


def resolve_timer(config: Any, tau_acc_ns: Optional[int] = None) -> TimerSpec:
    """Calibrate the host clock; the CLI value beats the config file."""
    configured = tau_acc_ns if tau_acc_ns is not None else config.timer.tau_acc_ns
    return calibrate(
        configured_acc=configured,
        j_max=config.timer.j_max,
        samples=config.timer.precision_samples,
    )


def build_oracle(
    config: Any,
    timer: TimerSpec,
    kind: Optional[str] = None,
    table_path: Optional[str] = None,
    a_rel: Optional[float] = None,
    b: Optional[float] = None
) -> OracleSpec:
    """
    Oracle from config plus CLI overrides.
    
    `a` is given relative to the timer precision (a * tau_prec), so the same
    config works on clocks of any granularity.
    """
    kind = kind or (LOOKUP if table_path else config.oracle.kind)
    a_rel = config.oracle.a if a_rel is None else a_rel
    b = config.oracle.b if b is None else b
    a = a_rel / timer.tau_prec_ns

    if kind == LOGISTIC:
        return OracleSpec.logistic(timer, a, b, check_ranges=config.oracle.check_ranges)

    table_path = table_path or config.oracle.table_file
    table = load_table(table_path) if table_path else default_lookup_table(timer, a, b)
    return OracleSpec.lookup(timer, table)


def cache_path(args: Any, config: Any) -> str:
    return getattr(args, "cache", None) or config.tuning.cache_path
