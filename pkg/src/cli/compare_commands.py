"""CLI command for comparing two reports."""

import json
from typing import Any

from .common import banner
from ..core import Verdict, compare_runs
from ..core.experiment import load_report, report_estimates
from ..utils import get_logger

logger = get_logger(__name__)

EXIT_REGRESSION = 2


def add_compare_parser(subparsers):
    """Add compare command parser."""
    parser = subparsers.add_parser(
        'compare',
        help='Compare two reports on minimum per-execution time'
    )
    parser.add_argument('baseline', type=str, help='Baseline report JSON')
    parser.add_argument('candidate', type=str, help='Candidate report JSON')
    parser.add_argument(
        '--threshold',
        type=float,
        default=None,
        help='Relative change that counts as a regression (default: 0.30)'
    )
    parser.add_argument(
        '--json',
        action='store_true',
        help='Emit comparisons as JSON on stdout'
    )


def run_compare(args: Any, config: Any) -> int:
    """
    Compare benchmarks present in both reports.
    
    Returns 2 if any benchmark regressed, else 0.
    """
    threshold = args.threshold if args.threshold is not None else config.analysis.threshold
    baseline = report_estimates(load_report(args.baseline))
    candidate = report_estimates(load_report(args.candidate))

    for missing in sorted(set(baseline) ^ set(candidate)):
        logger.warning(f"Benchmark '{missing}' is only in one report; skipped")

    results = {
        bench_id: compare_runs(baseline[bench_id], candidate[bench_id], threshold)
        for bench_id in baseline
        if bench_id in candidate
    }
    regressed = [bench_id for bench_id, result in results.items() if result.verdict is Verdict.REGRESSION]

    if args.json:
        print(json.dumps({bench_id: result.to_dict() for bench_id, result in results.items()}, indent=2))
    else:
        banner("⚖️  COMPARISON")
        for bench_id, result in results.items():
            print(
                f"  {bench_id:<20} {result.baseline_min_ns:>12.1f} -> {result.candidate_min_ns:>12.1f} ns  "
                f"x{result.ratio:.3f}  {result.verdict.value}"
            )
        print("=" * 60 + "\n")

    if regressed:
        logger.error(f"Regressions: {', '.join(regressed)}")
        return EXIT_REGRESSION
    return 0
