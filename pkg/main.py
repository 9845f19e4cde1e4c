"""
rbench - Robust Microbenchmark Harness - Main CLI Entry Point

Usage:
    python main.py <command> [options]

Commands:
    calibrate       Measure timer precision and derive j
    tune            Pick executions per measurement (cached per machine)
    run             Run benchmarks under a time budget
    compare         Compare two reports (exit 2 on regression)
    simulate        Simulate a delay-model scenario
    oracle          Check, emit or regenerate the executions oracle

Exit codes: 0 success, 1 error or bad usage, 2 regression detected.
"""

import sys
import argparse
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from src.core.errors import BenchmarkError
from src.utils import get_logger, setup_logger, load_config
from src.cli import (
    calibrate_commands,
    tune_commands,
    run_commands,
    compare_commands,
    simulate_commands,
    oracle_commands
)

EXIT_OK = 0
EXIT_ERROR = 1


def create_parser():
    """Create argument parser with all commands."""
    
    parser = argparse.ArgumentParser(
        prog="rbench",
        description="Robust Microbenchmark Harness",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Inspect the clock
  python main.py calibrate --json
  
  # Tune and run the builtin workloads
  python main.py tune builtin:all
  python main.py run builtin:all --output reports/baseline.json
  
  # Gate on regressions
  python main.py compare reports/baseline.json reports/candidate.json
  
  # Simulate the delay model
  python main.py simulate samples/scenarios/bimodal.json --seed 7 --output sim.json
  
  # Validate the oracle
  python main.py oracle --check --params 0.009,0.5
        """
    )
    parser.add_argument(
        '--config',
        type=str,
        default=None,
        help='Path to config.yaml'
    )
    parser.add_argument(
        '--log-level',
        type=str,
        default=None,
        help='Override the configured log level'
    )
    parser.add_argument(
        '--quiet',
        action='store_true',
        help='Disable progress bars'
    )
    
    subparsers = parser.add_subparsers(dest='command', help='Command to run')
    
    calibrate_commands.add_calibrate_parser(subparsers)
    tune_commands.add_tune_parser(subparsers)
    run_commands.add_run_parser(subparsers)
    compare_commands.add_compare_parser(subparsers)
    simulate_commands.add_simulate_parser(subparsers)
    oracle_commands.add_oracle_parser(subparsers)
    
    return parser


COMMANDS = {
    'calibrate': calibrate_commands.run_calibrate,
    'tune': tune_commands.run_tune,
    'run': run_commands.run_run,
    'compare': compare_commands.run_compare,
    'simulate': simulate_commands.run_simulate,
    'oracle': oracle_commands.run_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for regressions
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_ERROR
    
    load_dotenv()
    
    try:
        config = load_config(args.config)
        setup_logger(
            level=args.log_level or config.logging.level,
            log_file=config.logging.file
        )
        return COMMANDS[args.command](args, config)
    except (BenchmarkError, OSError, ValueError) as exc:
        get_logger("src").error(f"{args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
