"""CLI command for checking and regenerating the executions oracle."""

import json
from typing import Any, List, Optional

import numpy as np
from tqdm import tqdm

from .common import SECONDS, banner, build_oracle, resolve_timer, show_progress
from ..core import (
    TimerSpec,
    default_grid,
    default_lookup_table,
    resolve_timer_spec,
    tune,
    validate_oracle,
)
from ..core.errors import InvalidConfigurationError
from ..core.oracle import LOGISTIC, save_table
from ..core.tuning import build_lookup_table, convergence_n, scaling_curve
from ..workloads import make_executor, resolve_target
from ..utils import get_logger

logger = get_logger(__name__)

SCALING_POINTS = 12
MAX_MEASUREMENT_NS = 10 * 10**6


def add_oracle_parser(subparsers):
    """Add oracle command parser."""
    parser = subparsers.add_parser(
        'oracle',
        help='Validate, emit or regenerate the executions oracle'
    )
    parser.add_argument(
        '--check',
        action='store_true',
        help='Validate the oracle properties on a grid'
    )
    parser.add_argument(
        '--params',
        type=str,
        default=None,
        help='Logistic parameters "a,b" (a in units of 1/tau_prec)'
    )
    parser.add_argument(
        '--table',
        type=str,
        default=None,
        help='Lookup table JSON to check instead of the logistic'
    )
    parser.add_argument(
        '--emit-table',
        type=str,
        default=None,
        help='Write the default lookup table for this timer'
    )
    parser.add_argument(
        '--regenerate',
        type=str,
        default=None,
        metavar='SUITE',
        help='Rebuild a lookup table from scaling curves of a suite'
    )
    parser.add_argument(
        '--output',
        type=str,
        default=None,
        help='Destination for --regenerate'
    )
    parser.add_argument(
        '--tau-prec-ns',
        type=int,
        default=None,
        help='Use this precision instead of measuring the host clock'
    )
    parser.add_argument(
        '--tau-acc-ns',
        type=int,
        default=None,
        help='Timer accuracy override in ns'
    )
    parser.add_argument(
        '--json',
        action='store_true',
        help='Emit the check report as JSON'
    )


def _parse_params(text: Optional[str]):
    if text is None:
        return None, None
    try:
        a_text, b_text = text.split(",")
        return float(a_text), float(b_text)
    except ValueError as exc:
        raise InvalidConfigurationError(f"--params expects 'a,b', got '{text}'") from exc


def _timer(args: Any, config: Any) -> TimerSpec:
    if args.tau_prec_ns is not None:
        acc = args.tau_acc_ns if args.tau_acc_ns is not None else config.timer.tau_acc_ns
        return resolve_timer_spec(args.tau_prec_ns, acc, config.timer.j_max)
    return resolve_timer(config, args.tau_acc_ns)


def _scaling_ns(j: int, t_hat: float) -> List[int]:
    candidates = np.unique(np.geomspace(1, max(j, 1), SCALING_POINTS).astype(int)).tolist()
    return [n for n in candidates if n * t_hat <= MAX_MEASUREMENT_NS] or [1]


def regenerate_table(args: Any, config: Any, timer: TimerSpec):
    """Tune each benchmark, then find where its scaling curve flattens."""
    definitions = resolve_target(args.regenerate)
    shape = build_oracle(config, timer, kind=LOGISTIC)
    observations = []
    for definition in tqdm(definitions, desc="Regenerating", disable=not show_progress(args)):
        executor = make_executor(definition)
        result = tune(executor, timer, shape, config.tuning.budget_s * SECONDS, benchmark_id=definition.id)
        curve = scaling_curve(executor, _scaling_ns(timer.j, result.t_hat_ns))
        n_conv = convergence_n(curve)
        logger.info(f"{definition.id}: t_hat={result.t_hat_ns:.1f} ns converges at n={n_conv}")
        observations.append((result.t_hat_ns, n_conv))
    return build_lookup_table(observations, timer)


def run_oracle(args: Any, config: Any) -> int:
    """Run the selected oracle action(s). Exit 1 if a check fails."""
    if not (args.check or args.emit_table or args.regenerate):
        raise InvalidConfigurationError("nothing to do: pass --check, --emit-table or --regenerate")
    if args.regenerate and not args.output:
        raise InvalidConfigurationError("--regenerate needs --output")

    timer = _timer(args, config)
    a_rel, b = _parse_params(args.params)
    status = 0

    if args.emit_table:
        a_rel = config.oracle.a if a_rel is None else a_rel
        b = config.oracle.b if b is None else b
        save_table(default_lookup_table(timer, a_rel / timer.tau_prec_ns, b), args.emit_table)
        print(f"Lookup table written to {args.emit_table}")

    if args.regenerate:
        table = regenerate_table(args, config, timer)
        save_table(table, args.output)
        print(f"Regenerated table ({len(table)} rows) written to {args.output}")

    if args.check:
        spec = build_oracle(config, timer, table_path=args.table, a_rel=a_rel, b=b)
        report = validate_oracle(spec, default_grid(timer))
        if args.json:
            print(json.dumps(report.to_dict(), indent=2))
        else:
            banner("🔎 ORACLE CHECK")
            print(f"Oracle: {spec.kind}   j={timer.j}   grid points: {report.grid_points}")
            if report.passed:
                print("All properties hold")
            for failure in report.failures:
                print(f"  ✗ {failure.prop} at t={failure.witness_t:g} ns: {failure.detail}")
            print("=" * 60 + "\n")
        if not report.passed:
            status = 1
    return status
