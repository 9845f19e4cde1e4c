"""Test timer calibration."""

import itertools
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.core import (
    CalibrationError,
    InvalidConfigurationError,
    SimulatedClock,
    TimerSpec,
    calibrate,
    measure_precision,
    resolve_timer_spec,
)


class CoarseClock:
    """Returns the same value for several reads, then jumps by `tick`."""

    def __init__(self, tick: int, reads_per_tick: int = 3):
        self.tick = tick
        self.reads_per_tick = reads_per_tick
        self.calls = 0

    def __call__(self) -> int:
        self.calls += 1
        return (self.calls // self.reads_per_tick) * self.tick


@pytest.mark.parametrize("granularity", [1, 10, 100, 1000])
def test_precision_equals_clock_granularity(granularity):
    assert measure_precision(SimulatedClock(granularity)) == granularity
    assert measure_precision(CoarseClock(granularity)) == granularity


def test_precision_of_simulated_clock():
    assert measure_precision(SimulatedClock(7)) == 7


def test_precision_spins_past_repeated_reads():
    assert measure_precision(CoarseClock(50)) == 50


def test_precision_needs_enough_samples():
    with pytest.raises(InvalidConfigurationError):
        measure_precision(SimulatedClock(1), samples=999)


def test_stuck_clock_is_a_calibration_error():
    with pytest.raises(CalibrationError) as info:
        measure_precision(lambda: 5)
    assert info.value.pair_index == 0


def test_backwards_clock_is_a_calibration_error():
    ticks = itertools.count(10**9, -3)
    with pytest.raises(CalibrationError):
        measure_precision(lambda: next(ticks))


def test_backward_jump_between_pairs_is_a_calibration_error():
    # each pair moves forward, but the second pair starts before the first ended
    ticks = itertools.chain([10, 20, 15, 25], itertools.count(100, 10))
    with pytest.raises(CalibrationError) as info:
        measure_precision(lambda: next(ticks))
    assert info.value.pair_index == 1


def test_default_accuracy_is_thousand_times_precision():
    spec = resolve_timer_spec(7)
    assert spec.tau_acc_ns == 7000
    assert spec.j == 1000
    assert spec.source == "measured"


def test_configured_accuracy_and_j_cap():
    spec = resolve_timer_spec(1, 1000)
    assert (spec.j, spec.source) == (1000, "configured")
    
    capped = resolve_timer_spec(1, 10**6)
    assert capped.j == 10000
    
    assert resolve_timer_spec(1, 10**6, j_max=50).j == 50


def test_accuracy_below_precision_rejected():
    with pytest.raises(InvalidConfigurationError):
        resolve_timer_spec(100, 50)
    with pytest.raises(InvalidConfigurationError):
        resolve_timer_spec(0)


def test_timer_spec_invariants():
    with pytest.raises(InvalidConfigurationError):
        TimerSpec(tau_acc_ns=1000, tau_prec_ns=1, j=999)
    spec = resolve_timer_spec(3, 3000)
    assert TimerSpec.from_dict(spec.to_dict()) == spec


def test_calibrate_with_injected_clock():
    spec = calibrate(clock=SimulatedClock(20))
    assert spec.tau_prec_ns == 20
    assert spec.tau_acc_ns == 20000
    assert spec.j == 1000


@pytest.mark.parametrize("prec", [1, 3, 20])
@pytest.mark.parametrize("factor", [1, 2, 5, 10, 1000])
def test_overestimating_accuracy_scales_j_at_most_by_factor(prec, factor):
    base = resolve_timer_spec(prec, 10 * prec)
    inflated = resolve_timer_spec(prec, factor * base.tau_acc_ns)
    assert base.j <= inflated.j <= factor * base.j
