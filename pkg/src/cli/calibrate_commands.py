"""CLI command for timer calibration."""

import json
from typing import Any

from .common import banner, resolve_timer
from ..core.timer import describe_host_clock
from ..utils import get_logger

logger = get_logger(__name__)


def add_calibrate_parser(subparsers):
    """Add calibrate command parser."""
    parser = subparsers.add_parser(
        'calibrate',
        help='Measure timer precision and derive j'
    )
    parser.add_argument(
        '--tau-acc-ns',
        type=int,
        default=None,
        help='Timer accuracy in ns (default: 1000 x measured precision)'
    )
    parser.add_argument(
        '--json',
        action='store_true',
        help='Emit the TimerSpec as JSON on stdout'
    )


def run_calibrate(args: Any, config: Any) -> int:
    """Run timer calibration."""
    timer = resolve_timer(config, args.tau_acc_ns)
    
    if args.json:
        print(json.dumps(timer.to_dict()))
        return 0
    
    clock = describe_host_clock()
    banner("⏱️  TIMER CALIBRATION")
    print(f"Clock: {clock['implementation']} (monotonic={clock['monotonic']})")
    print(f"tau_prec: {timer.tau_prec_ns} ns (measured)")
    print(f"tau_acc:  {timer.tau_acc_ns} ns ({timer.source})")
    print(f"j:        {timer.j} (cap {timer.j_max})")
    print("=" * 60 + "\n")
    return 0
