"""CLI command for tuning executions per measurement."""

from typing import Any, List, Tuple

from .common import SECONDS, banner, build_oracle, cache_path, resolve_timer
from ..core import TuneResult, tune
from ..core.tuning import TuneCache, machine_fingerprint
from ..workloads import make_executor, resolve_target
from ..utils import get_logger

logger = get_logger(__name__)


def add_tune_parser(subparsers):
    """Add tune command parser."""
    parser = subparsers.add_parser(
        'tune',
        help='Pick executions per measurement for each benchmark'
    )
    parser.add_argument(
        'target',
        type=str,
        help='Suite file, builtin:NAME or builtin:all'
    )
    parser.add_argument(
        '--cache',
        type=str,
        default=None,
        help='Tuning cache file (default: $RBENCH_CACHE or config)'
    )
    parser.add_argument(
        '--tuning-budget-s',
        type=float,
        default=None,
        help='Ramp time budget per benchmark in seconds (default: 5)'
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
        help='Lookup table JSON (switches the oracle to lookup)'
    )
    parser.add_argument(
        '--force',
        action='store_true',
        help='Re-tune even if a cached result exists'
    )


def tune_definitions(
    definitions,
    timer,
    oracle,
    budget_ns: float,
    cache_file: str,
    force: bool = False
) -> List[Tuple[Any, TuneResult, bool]]:
    """
    Tune each definition, reusing cache hits for this machine.
    
    Returns (definition, result, from_cache) triples.
    """
    fingerprint = machine_fingerprint(timer)
    cache = TuneCache.load(cache_file)
    results = []
    
    for definition in definitions:
        cached = None if force else cache.get(definition.id, fingerprint)
        if cached is not None:
            logger.info(f"Cache hit for {definition.id}: n={cached.n}")
            results.append((definition, cached, True))
            continue
        
        executor = make_executor(definition)
        result = tune(executor, timer, oracle, budget_ns, benchmark_id=definition.id)
        cache.put(result, fingerprint)
        results.append((definition, result, False))
    
    cache.save(cache_file)
    return results


def run_tune(args: Any, config: Any) -> int:
    """Run tuning."""
    definitions = resolve_target(args.target)
    timer = resolve_timer(config, args.tau_acc_ns)
    oracle = build_oracle(config, timer, table_path=args.table)
    budget_s = args.tuning_budget_s if args.tuning_budget_s is not None else config.tuning.budget_s
    cache_file = cache_path(args, config)
    
    results = tune_definitions(
        definitions, timer, oracle, budget_s * SECONDS, cache_file, force=args.force
    )
    
    banner("🎯 TUNING RESULTS")
    for definition, result, from_cache in results:
        origin = "cached" if from_cache else f"{result.ramp_len} ramp points"
        print(f"  {definition.id:<20} t_hat={result.t_hat_ns:>12.1f} ns  n={result.n:<6} ({origin})")
    print(f"\nCache: {cache_file}")
    print("=" * 60 + "\n")
    return 0
