"""
Statistical model of serial benchmark execution under delay factors.

A program P0 is a tape of k instructions with minimum time t_p0. Each delay
factor may fire in the delay slot after every instruction with its own
Bernoulli probability and costs a fixed time tau when it does; the timer adds
an error epsilon bounded by tau_acc. Running n executions back to back gives
n*k delay slots whose probabilities repeat the k per-slot values cyclically:

    T = n * t_p0 + sum_f X_f * tau_f + epsilon

The simulator is deterministic for a given seed. Generators are numpy's
counter-based Philox bit generator keyed through SeedSequence, and sub-seeds
come from SeedSequence.spawn, so fixtures are portable across platforms.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from .errors import DomainError, InvalidConfigurationError
from ..utils import get_logger, read_json

logger = get_logger(__name__)

ProbSpec = Union[float, Tuple[float, ...]]

PMF_MAX_LENGTH = 100_000
REGIME_MODES = ("cycle", "random")


def make_generator(seed: Union[int, np.random.SeedSequence]) -> np.random.Generator:
    """Philox-backed generator for an integer seed or a spawned SeedSequence."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(seed))


def _check_probability(p: float, where: str):
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{where}: probability {p} outside [0, 1]")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticProgram:
    """P0: k instructions with total minimum time t_p0 (ns)."""
    k: int
    t_p0: int
    per_instruction_times: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.k < 1:
            raise InvalidConfigurationError(f"k must be >= 1, got {self.k}")
        if self.t_p0 <= 0:
            raise InvalidConfigurationError(f"t_p0 must be positive, got {self.t_p0}")
        if self.per_instruction_times is not None:
            if len(self.per_instruction_times) != self.k:
                raise InvalidConfigurationError(
                    f"{len(self.per_instruction_times)} instruction times for k={self.k}"
                )
            if sum(self.per_instruction_times) != self.t_p0:
                raise InvalidConfigurationError("instruction times must sum to t_p0")


@dataclass(frozen=True)
class DelayFactor:
    """
    A delay source costing tau ns per trigger.
    
    `probs` is either one probability for every slot or k per-slot values.
    `regimes` optionally lists alternative probability specs; a scenario picks
    one per trial index to model drift between trials.
    """
    tau: int
    probs: ProbSpec
    regimes: Tuple[ProbSpec, ...] = ()

    def __post_init__(self):
        if self.tau < 0:
            raise InvalidConfigurationError(f"tau must be >= 0, got {self.tau}")
        for spec in (self.probs,) + tuple(self.regimes):
            for p in _as_tuple(spec):
                _check_probability(p, "delay factor")

    def slot_probs(self, k: int) -> np.ndarray:
        """Per-slot probabilities for a k-instruction program."""
        return _slot_probs(self.probs, k)

    def expected_triggers_per_exec(self, k: int) -> float:
        return float(np.sum(self.slot_probs(k)))

    def for_regime(self, index: int) -> "DelayFactor":
        """Stationary copy using regime `index`."""
        if not self.regimes:
            return self
        return DelayFactor(tau=self.tau, probs=self.regimes[index % len(self.regimes)])


def _as_tuple(spec: ProbSpec) -> Tuple[float, ...]:
    if isinstance(spec, (int, float)):
        return (float(spec),)
    return tuple(float(p) for p in spec)


def _slot_probs(spec: ProbSpec, k: int) -> np.ndarray:
    if isinstance(spec, (int, float)):
        return np.full(k, float(spec))
    probs = np.asarray(spec, dtype=float)
    if probs.shape != (k,):
        raise InvalidConfigurationError(
            f"per-slot probabilities have length {probs.size}, program has k={k}"
        )
    return probs


@dataclass(frozen=True)
class TimerErrorModel:
    """Timer error epsilon: none, or integer-uniform on [-bound, +bound]."""
    kind: str = "none"
    bound: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "uniform"):
            raise InvalidConfigurationError(f"Unknown timer error kind: {self.kind}")
        if self.bound < 0:
            raise InvalidConfigurationError("timer error bound must be >= 0")

    def check_against(self, tau_acc_ns: int):
        """epsilon is bounded by the timer accuracy by definition."""
        if self.bound > tau_acc_ns:
            raise InvalidConfigurationError(
                f"timer error bound {self.bound} ns exceeds tau_acc {tau_acc_ns} ns"
            )

    def draw(self, rng: np.random.Generator) -> int:
        if self.kind == "none" or self.bound == 0:
            return 0
        return int(rng.integers(-self.bound, self.bound, endpoint=True))


NO_ERROR = TimerErrorModel()


@dataclass(frozen=True)
class Measurement:
    """Observed total time T (ns) of n back-to-back executions."""
    total_time: int
    n_execs: int

    def __post_init__(self):
        if self.n_execs < 1:
            raise InvalidConfigurationError(f"n_execs must be >= 1, got {self.n_execs}")
        if self.total_time < 0:
            raise InvalidConfigurationError(f"total_time must be >= 0, got {self.total_time}")

    @property
    def per_exec(self) -> float:
        return self.total_time / self.n_execs


@dataclass
class Trial:
    """Consecutive measurements gathered under one configuration."""
    measurements: List[Measurement]
    trial_index: int = 0

    def __post_init__(self):
        if not self.measurements:
            raise InvalidConfigurationError("a trial holds at least one measurement")
        n = self.measurements[0].n_execs
        if any(m.n_execs != n for m in self.measurements):
            raise InvalidConfigurationError("measurements in one trial share n_execs")
        if self.trial_index < 0:
            raise InvalidConfigurationError("trial_index must be >= 0")

    @property
    def n_execs(self) -> int:
        return self.measurements[0].n_execs

    def total_times(self) -> List[int]:
        return [m.total_time for m in self.measurements]

    def per_exec_times(self) -> np.ndarray:
        return np.asarray(self.total_times(), dtype=float) / self.n_execs

    def __len__(self) -> int:
        return len(self.measurements)


# ---------------------------------------------------------------------------
# Exact distribution of trigger counts
# ---------------------------------------------------------------------------

def trigger_count_pmf(probs: Sequence[float]) -> np.ndarray:
    """
    Poisson binomial pmf of the number of successes among independent trials.
    
    Builds the coefficients of prod_i (1 - p_i + p_i x) one factor at a time.
    Entry m is P(X = m).
    """
    probs = [float(p) for p in probs]
    if len(probs) > PMF_MAX_LENGTH:
        raise DomainError(f"at most {PMF_MAX_LENGTH} probabilities, got {len(probs)}")
    for idx, p in enumerate(probs):
        _check_probability(p, f"probs[{idx}]")

    pmf = np.zeros(len(probs) + 1)
    pmf[0] = 1.0
    for size, p in enumerate(probs, start=1):
        # in-place shift-and-mix over the first size+1 entries
        pmf[1:size + 1] = pmf[1:size + 1] * (1.0 - p) + pmf[0:size] * p
        pmf[0] *= (1.0 - p)
    return pmf


def trigger_count_moments(probs: Sequence[float]) -> Tuple[float, float]:
    """Mean and variance of the Poisson binomial count."""
    arr = np.asarray(probs, dtype=float)
    return float(arr.sum()), float(np.sum(arr * (1.0 - arr)))


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def draw_measurement(
    prog: SyntheticProgram,
    factors: Sequence[DelayFactor],
    n: int,
    err: TimerErrorModel,
    rng: np.random.Generator
) -> Measurement:
    total = n * prog.t_p0
    for factor in factors:
        if factor.tau == 0:
            continue
        # slot i of P0 recurs n times in Q: Binomial(n, p_i) per distinct slot
        if isinstance(factor.probs, (int, float)):
            count = int(rng.binomial(n * prog.k, float(factor.probs)))
        else:
            count = int(rng.binomial(n, factor.slot_probs(prog.k)).sum())
        total += count * factor.tau
    total += err.draw(rng)
    return Measurement(total_time=max(int(total), 0), n_execs=n)


def simulate_measurement(
    prog: SyntheticProgram,
    factors: Sequence[DelayFactor],
    n: int,
    err: TimerErrorModel = NO_ERROR,
    rng_seed: int = 0
) -> Measurement:
    """One simulated timing measurement of n executions."""
    if n < 1:
        raise InvalidConfigurationError(f"n must be >= 1, got {n}")
    return draw_measurement(prog, factors, n, err, make_generator(rng_seed))


def simulate_trial(
    prog: SyntheticProgram,
    factors: Sequence[DelayFactor],
    n: int,
    err: TimerErrorModel = NO_ERROR,
    count: int = 1,
    rng_seed: int = 0,
    trial_index: int = 0
) -> Trial:
    """`count` measurements, each from its own spawned sub-seed."""
    if count < 1:
        raise InvalidConfigurationError(f"count must be >= 1, got {count}")
    if n < 1:
        raise InvalidConfigurationError(f"n must be >= 1, got {n}")
    children = np.random.SeedSequence(int(rng_seed) & 0xFFFFFFFFFFFFFFFF).spawn(count)
    measurements = [
        draw_measurement(prog, factors, n, err, make_generator(child))
        for child in children
    ]
    return Trial(measurements=measurements, trial_index=trial_index)


def asymptotic_per_exec_time(prog: SyntheticProgram, factors: Sequence[DelayFactor]) -> float:
    """
    Expected T/n as n grows: t_p0 + sum_f tau_f * (sum of its per-slot probabilities).
    
    With every probability at 1 this is t_p0 + k * sum_f tau_f, which no
    amount of repetition removes.
    """
    return float(prog.t_p0) + sum(
        factor.tau * factor.expected_triggers_per_exec(prog.k) for factor in factors
    )


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

@dataclass
class Scenario:
    """A complete simulation setup, loadable from scenario JSON."""
    program: SyntheticProgram
    factors: List[DelayFactor]
    error: TimerErrorModel = NO_ERROR
    trials: int = 1
    measurements_per_trial: int = 1000
    n: int = 1
    seed: int = 0
    regime_mode: str = "random"
    name: str = "scenario"

    def __post_init__(self):
        if self.trials < 1 or self.measurements_per_trial < 1 or self.n < 1:
            raise InvalidConfigurationError("trials, measurements_per_trial and n must be >= 1")
        if self.regime_mode not in REGIME_MODES:
            raise InvalidConfigurationError(f"regime_mode must be one of {REGIME_MODES}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any], name: str = "scenario") -> "Scenario":
        try:
            program = data["program"]
            prog = SyntheticProgram(
                k=int(program["k"]),
                t_p0=int(program["t_p0_ns"]),
                per_instruction_times=(
                    tuple(int(t) for t in program["per_instruction_ns"])
                    if program.get("per_instruction_ns") is not None else None
                ),
            )
            factors = [
                DelayFactor(
                    tau=int(f["tau_ns"]),
                    probs=_parse_probs(f["probs"]),
                    regimes=tuple(_parse_probs(r) for r in f.get("regimes", [])),
                )
                for f in data.get("factors", [])
            ]
            error_cfg = data.get("error", {"kind": "none", "bound_ns": 0})
            error = TimerErrorModel(
                kind=error_cfg.get("kind", "none"),
                bound=int(error_cfg.get("bound_ns", 0)),
            )
            return cls(
                program=prog,
                factors=factors,
                error=error,
                trials=int(data.get("trials", 1)),
                measurements_per_trial=int(data.get("measurements_per_trial", 1000)),
                n=int(data.get("n", 1)),
                seed=int(data.get("seed", 0)),
                regime_mode=data.get("regime_mode", "random"),
                name=data.get("name", name),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidConfigurationError(f"Malformed scenario: {exc}") from exc

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Scenario":
        path = Path(path)
        return cls.from_dict(read_json(path), name=path.stem)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "program": {
                "k": self.program.k,
                "t_p0_ns": self.program.t_p0,
                **(
                    {"per_instruction_ns": list(self.program.per_instruction_times)}
                    if self.program.per_instruction_times else {}
                ),
            },
            "factors": [
                {
                    "tau_ns": f.tau,
                    "probs": _dump_probs(f.probs),
                    **({"regimes": [_dump_probs(r) for r in f.regimes]} if f.regimes else {}),
                }
                for f in self.factors
            ],
            "error": {"kind": self.error.kind, "bound_ns": self.error.bound},
            "trials": self.trials,
            "measurements_per_trial": self.measurements_per_trial,
            "n": self.n,
            "seed": self.seed,
            "regime_mode": self.regime_mode,
        }

    def factors_for_trial(self, trial_index: int, seed: int) -> List[DelayFactor]:
        """Resolve each factor's regime for one trial."""
        resolved = []
        for factor_index, factor in enumerate(self.factors):
            if not factor.regimes:
                resolved.append(factor)
            elif self.regime_mode == "cycle":
                resolved.append(factor.for_regime(trial_index))
            else:
                rng = make_generator(
                    np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, trial_index, factor_index])
                )
                resolved.append(factor.for_regime(int(rng.integers(len(factor.regimes)))))
        return resolved

    def asymptotic_per_exec_time(self) -> float:
        """Limit of T/n for the base (non-regime) probabilities."""
        return asymptotic_per_exec_time(self.program, self.factors)


def _parse_probs(value: Any) -> ProbSpec:
    if isinstance(value, (int, float)):
        return float(value)
    return tuple(float(p) for p in value)


def _dump_probs(spec: ProbSpec) -> Any:
    if isinstance(spec, (int, float)):
        return spec
    return list(spec)


def simulate_scenario(
    scenario: Scenario,
    seed: Optional[int] = None,
    progress: bool = False
) -> List[Trial]:
    """Simulate every trial of a scenario; trial seeds are spawned from `seed`."""
    seed = scenario.seed if seed is None else seed
    trial_seeds = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF).spawn(scenario.trials)
    trials = []
    for trial_index, trial_seed in enumerate(
        tqdm(trial_seeds, desc=f"Simulating {scenario.name}", unit="trial", disable=not progress)
    ):
        factors = scenario.factors_for_trial(trial_index, seed)
        sub_seed = int(trial_seed.generate_state(1, dtype=np.uint64)[0])
        trials.append(
            simulate_trial(
                scenario.program, factors, scenario.n, scenario.error,
                count=scenario.measurements_per_trial,
                rng_seed=sub_seed,
                trial_index=trial_index,
            )
        )
    logger.debug(f"Simulated {len(trials)} trials for {scenario.name}")
    return trials
