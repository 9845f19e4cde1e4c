"""
Benchmark executors: anything that can time n back-to-back executions.

Tuning and the experiment runner only talk to this protocol, so simulated,
in-process and subprocess workloads are interchangeable.
"""

import shutil
import subprocess
import sys
import zlib
from pathlib import Path
from typing import Any, Callable, List, Optional, Protocol, Sequence, Union

import numpy as np

from .delay_model import (
    DelayFactor,
    Measurement,
    NO_ERROR,
    SyntheticProgram,
    TimerErrorModel,
    draw_measurement,
    make_generator,
)
from .errors import ExecutorError
from .timer import Clock, host_clock
from ..utils import get_logger

logger = get_logger(__name__)


class Executor(Protocol):
    """Performs exactly `n_execs` back-to-back executions per request."""

    def measure(self, n_execs: int) -> Measurement:
        ...

    def warmup(self, execs: int) -> None:
        ...


class SimulatedExecutor:
    """
    Executor backed by the delay model.
    
    Every measure() call draws from the next sub-seed spawned from `seed`, so
    a fresh executor with the same seed replays the same sequence.
    """

    def __init__(
        self,
        program: SyntheticProgram,
        factors: Sequence[DelayFactor] = (),
        error: TimerErrorModel = NO_ERROR,
        seed: int = 0
    ):
        self.program = program
        self.factors = list(factors)
        self.error = error
        self.seed = seed
        self._seed_seq = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self.calls = 0

    def measure(self, n_execs: int) -> Measurement:
        child = self._seed_seq.spawn(1)[0]
        self.calls += 1
        return draw_measurement(self.program, self.factors, n_execs, self.error, make_generator(child))

    def warmup(self, execs: int) -> None:
        return None

    @property
    def checksum(self) -> Optional[str]:
        return None

    def __repr__(self) -> str:
        return f"SimulatedExecutor(t_p0={self.program.t_p0}, factors={len(self.factors)}, seed={self.seed})"


class CallableExecutor:
    """
    Times an in-process workload with a monotonic nanosecond clock.
    
    The last return value is folded into a running crc32 so the workload's
    result is always consumed.
    """

    def __init__(self, workload: Callable[[], Any], clock: Optional[Clock] = None, name: str = "workload"):
        self.workload = workload
        self.clock = clock or host_clock()
        self.name = name
        self._crc = 0

    def measure(self, n_execs: int) -> Measurement:
        workload = self.workload
        clock = self.clock
        result = None
        try:
            start = clock()
            for _ in range(n_execs):
                result = workload()
            end = clock()
        except Exception as exc:
            raise ExecutorError(f"{self.name} raised {type(exc).__name__}: {exc}") from exc
        self._consume(result)
        return Measurement(total_time=max(end - start, 0), n_execs=n_execs)

    def warmup(self, execs: int) -> None:
        for _ in range(execs):
            try:
                self._consume(self.workload())
            except Exception as exc:
                raise ExecutorError(f"{self.name} raised during warmup: {exc}") from exc

    def _consume(self, result: Any):
        self._crc = zlib.crc32(repr(result).encode("utf-8"), self._crc)

    @property
    def checksum(self) -> str:
        return f"{self._crc:08x}"

    def __repr__(self) -> str:
        return f"CallableExecutor({self.name})"


class CommandExecutor:
    """Times whole subprocess lifetimes of an external command."""

    def __init__(
        self,
        argv: Sequence[str],
        cwd: Optional[Union[str, Path]] = None,
        clock: Optional[Clock] = None,
        name: str = "command"
    ):
        if not argv:
            raise ExecutorError("command benchmark needs a non-empty argv")
        self.argv: List[str] = [str(a) for a in argv]
        self.cwd = str(cwd) if cwd is not None else None
        self.clock = clock or host_clock()
        self.name = name
        self._crc = 0

    def _run_once(self, argv: Sequence[str], cwd: Optional[str]) -> int:
        try:
            completed = subprocess.run(
                argv, cwd=cwd, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, check=False
            )
        except OSError as exc:
            raise ExecutorError(f"{self.name}: cannot start {argv[0]}: {exc}") from exc
        if completed.returncode != 0:
            raise ExecutorError(f"{self.name}: exited with status {completed.returncode}")
        self._crc = zlib.crc32(completed.stdout, self._crc)
        return completed.returncode

    def measure(self, n_execs: int) -> Measurement:
        start = self.clock()
        for _ in range(n_execs):
            self._run_once(self.argv, self.cwd)
        end = self.clock()
        return Measurement(total_time=max(end - start, 0), n_execs=n_execs)

    def warmup(self, execs: int) -> None:
        for _ in range(execs):
            self._run_once(self.argv, self.cwd)

    def spawn_overhead_ns(self, repeats: int = 20) -> int:
        """
        Minimum wall time of a no-op command.
        
        Reported next to command results, never subtracted from them.
        """
        noop = [shutil.which("true")] if shutil.which("true") else [sys.executable, "-c", "pass"]
        best = None
        for _ in range(repeats):
            start = self.clock()
            subprocess.run(noop, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL, check=False)
            elapsed = self.clock() - start
            best = elapsed if best is None else min(best, elapsed)
        logger.debug(f"Subprocess spawn overhead: {best} ns")
        return int(best)

    @property
    def checksum(self) -> str:
        return f"{self._crc:08x}"

    def __repr__(self) -> str:
        return f"CommandExecutor({' '.join(self.argv)})"
