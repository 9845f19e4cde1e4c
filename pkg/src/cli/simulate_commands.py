"""CLI command for simulating scenarios under the delay model."""

from typing import Any

from .common import banner, show_progress
from ..core import Scenario, simulate_scenario
from ..core.experiment import BenchmarkReport, simulation_record
from ..utils import get_logger, write_jsonl

logger = get_logger(__name__)


def add_simulate_parser(subparsers):
    """Add simulate command parser."""
    parser = subparsers.add_parser(
        'simulate',
        help='Simulate a scenario and write a deterministic report'
    )
    parser.add_argument('scenario', type=str, help='Scenario JSON file')
    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Seed (default: the scenario seed)'
    )
    parser.add_argument(
        '--output',
        type=str,
        required=True,
        help='Report JSON path'
    )
    parser.add_argument(
        '--tau-acc-ns',
        type=int,
        default=None,
        help='Check the timer error bound against this accuracy'
    )
    parser.add_argument(
        '--kde',
        action='store_true',
        help='Attach a kernel density curve'
    )
    parser.add_argument(
        '--raw-jsonl',
        type=str,
        default=None,
        help='Also dump every measurement as JSON lines'
    )


def run_simulate(args: Any, config: Any) -> int:
    """Simulate and save; the same seed always gives the same bytes."""
    scenario = Scenario.load(args.scenario)
    if args.tau_acc_ns is not None:
        scenario.error.check_against(args.tau_acc_ns)
    seed = scenario.seed if args.seed is None else args.seed

    trials = simulate_scenario(scenario, seed=seed, progress=show_progress(args))
    record = simulation_record(
        scenario,
        trials,
        with_kde=args.kde,
        kde_grid_size=config.analysis.kde_grid_size,
        trim_percentile=config.analysis.trim_percentile,
    )
    report = BenchmarkReport(
        kind="simulation",
        benchmarks=[record],
        extra={"seed": seed, "scenario": scenario.to_dict()},
    )
    report.save(args.output)
    if args.raw_jsonl:
        write_jsonl(record.raw_rows(), args.raw_jsonl)

    est = record.estimates
    banner(f"🎲 SIMULATION: {scenario.name}")
    print(f"Seed: {seed}   trials: {len(trials)}   n: {est.n_execs}")
    print(f"min={est.min_ns:.2f}  mean={est.mean_ns:.2f}  median={est.median_ns:.2f}  "
          f"trimmed={est.trimmed_mean_ns:.2f} ns")
    print(f"Asymptotic T/n: {scenario.asymptotic_per_exec_time():.2f} ns")
    print("=" * 60 + "\n")
    return 0
