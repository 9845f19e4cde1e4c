"""CLI command for running benchmark experiments."""

from pathlib import Path
from typing import Any

from .common import SECONDS, banner, build_oracle, cache_path, resolve_timer, show_progress
from .tune_commands import tune_definitions
from ..core import CommandExecutor
from ..core.experiment import (
    BenchmarkReport,
    ExperimentConfig,
    environment_info,
    run_experiment,
    utc_now,
)
from ..workloads import make_executor, resolve_target
from ..utils import ensure_dir, get_logger, write_jsonl

logger = get_logger(__name__)


def add_run_parser(subparsers):
    """Add run command parser."""
    parser = subparsers.add_parser(
        'run',
        help='Run benchmarks under a time budget and write a report'
    )
    parser.add_argument(
        'suite',
        type=str,
        help='Suite file, builtin:NAME or builtin:all'
    )
    parser.add_argument(
        '--output',
        type=str,
        required=True,
        help='Report JSON path'
    )
    parser.add_argument(
        '--cache',
        type=str,
        default=None,
        help='Tuning cache file (default: $RBENCH_CACHE or config)'
    )
    parser.add_argument(
        '--budget-s',
        type=float,
        default=None,
        help='Time budget per benchmark in seconds'
    )
    parser.add_argument(
        '--trials',
        type=int,
        default=None,
        help='Number of trials'
    )
    parser.add_argument(
        '--per-trial',
        type=int,
        default=None,
        help='Measurements per trial'
    )
    parser.add_argument(
        '--tau-acc-ns',
        type=int,
        default=None,
        help='Timer accuracy override in ns'
    )
    parser.add_argument(
        '--table',
        type=str,
        default=None,
        help='Lookup table JSON used when tuning on a cache miss'
    )
    parser.add_argument(
        '--kde',
        action='store_true',
        help='Attach a kernel density curve to every benchmark'
    )
    parser.add_argument(
        '--density-csv',
        type=str,
        default=None,
        help='Directory for per-benchmark density CSVs (implies --kde)'
    )
    parser.add_argument(
        '--raw-jsonl',
        type=str,
        default=None,
        help='Also dump every measurement as JSON lines'
    )


def experiment_config(args: Any, config: Any) -> ExperimentConfig:
    settings = config.experiment
    budget_s = args.budget_s if args.budget_s is not None else settings.budget_s
    return ExperimentConfig(
        tau_budget_ns=int(budget_s * SECONDS),
        measurements_per_trial=args.per_trial or settings.measurements_per_trial,
        trials=args.trials or settings.trials,
        warmup_execs=settings.warmup_execs,
    )


def run_run(args: Any, config: Any) -> int:
    """Run a suite and write its report."""
    definitions = resolve_target(args.suite)
    timer = resolve_timer(config, args.tau_acc_ns)
    oracle = build_oracle(config, timer, table_path=args.table)
    cfg = experiment_config(args, config)
    with_kde = args.kde or bool(args.density_csv)
    progress = show_progress(args)

    started_at = utc_now()
    tuned = tune_definitions(
        definitions, timer, oracle, config.tuning.budget_s * SECONDS, cache_path(args, config)
    )

    records = []
    for definition, tune_result, _ in tuned:
        executor = make_executor(definition)
        record = run_experiment(
            executor,
            tune_result,
            cfg,
            timer,
            benchmark_id=definition.id,
            with_kde=with_kde,
            kde_grid_size=config.analysis.kde_grid_size,
            trim_percentile=config.analysis.trim_percentile,
            progress=progress,
        )
        if isinstance(executor, CommandExecutor):
            record.extra["spawn_overhead_ns"] = executor.spawn_overhead_ns()
        records.append(record)

    report = BenchmarkReport(
        kind="run",
        benchmarks=records,
        timer=timer,
        environment=environment_info(timer),
        started_at=started_at,
        finished_at=utc_now(),
    )
    report.save(args.output)

    if args.raw_jsonl:
        write_jsonl([row for record in records for row in record.raw_rows()], args.raw_jsonl)
    if args.density_csv:
        out_dir = ensure_dir(args.density_csv)
        for record in records:
            if record.density is not None:
                record.density.to_csv(Path(out_dir) / f"{record.id}.csv")

    banner("🏁 RUN COMPLETE")
    for record in records:
        est = record.estimates
        print(
            f"  {record.id:<20} n={est.n_execs:<6} min={est.min_ns:>12.1f} ns  "
            f"median={est.median_ns:>12.1f} ns  ({est.sample_count} measurements)"
        )
    print(f"\nReport: {args.output}")
    print("=" * 60 + "\n")
    return 0
