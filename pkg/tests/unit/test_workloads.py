"""Test builtin workloads, suite files and executors."""

import random
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from src.core import (
    CallableExecutor,
    CommandExecutor,
    ExecutorError,
    InvalidConfigurationError,
    SimulatedClock,
)
from src.workloads import (
    BenchmarkDefinition,
    builtin_workloads,
    load_suite,
    make_executor,
    resolve_target,
)
from src.workloads.builtins import branchsum, make_workload, manyallocs, pushall, sumindex


def test_branchsum_reference():
    assert branchsum(4) == -2
    assert branchsum(1) == -1
    assert branchsum(0) == 0


def test_sumindex_adds_every_index():
    inds = list(range(8))
    random.Random(0).shuffle(inds)
    assert sumindex([1.0] * 8, inds) == 8.0
    assert make_workload("sumindex", {"length": 16})() == 16.0


def test_pushall_appends_in_order():
    assert pushall([0], [1, 2, 3], random.Random(1)) == [0, 1, 2, 3]
    assert make_workload("pushall", {"length": 10})() == 10


def test_manyallocs_is_deterministic():
    first = manyallocs(20)
    assert first == manyallocs(20)
    assert len(first) == 20
    # reseeding before each draw gives every inner list the same length
    assert len({len(inner) for inner in first}) == 1
    assert make_workload("manyallocs", {"n": 20})() == (20, len(first[0]))


def test_builtin_catalog():
    catalog = builtin_workloads()
    assert set(catalog) == {"sumindex", "pushall", "branchsum", "manyallocs"}
    assert catalog["branchsum"].params == {"n": 48}


def test_resolve_builtin_targets():
    assert [d.id for d in resolve_target("builtin:branchsum")] == ["branchsum"]
    assert len(resolve_target("builtin:all")) == 4
    with pytest.raises(InvalidConfigurationError):
        resolve_target("builtin:nope")


def test_load_suite(tmp_path):
    suite = tmp_path / "suite.yaml"
    suite.write_text(
        "benchmarks:\n"
        "  - id: small-branch\n"
        "    name: branchsum\n"
        "    params: {n: 8}\n"
        "  - id: echo\n"
        "    kind: command\n"
        "    argv: [echo, hi]\n"
    )
    definitions = load_suite(suite)
    assert [d.id for d in definitions] == ["small-branch", "echo"]
    assert definitions[0].params == {"n": 8}
    assert definitions[1].argv == ("echo", "hi")
    assert resolve_target(str(suite))[0].to_dict()["name"] == "branchsum"


@pytest.mark.parametrize("body", [
    "benchmarks: []\n",
    "other: 1\n",
    "benchmarks:\n  - {id: a, name: branchsum}\n  - {id: a, name: sumindex}\n",
    "benchmarks:\n  - {id: a, name: quicksort}\n",
    "benchmarks:\n  - {id: a, kind: command}\n",
    "benchmarks:\n  - {id: a, kind: plugin}\n",
])
def test_invalid_suites_rejected(tmp_path, body):
    suite = tmp_path / "suite.yaml"
    suite.write_text(body)
    with pytest.raises(InvalidConfigurationError):
        load_suite(suite)


def test_missing_suite_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_suite(tmp_path / "absent.yaml")


def test_callable_executor_times_and_consumes():
    executor = CallableExecutor(lambda: 42, clock=SimulatedClock(10), name="const")
    m = executor.measure(5)
    assert (m.total_time, m.n_execs) == (10, 5)
    first = executor.checksum
    executor.measure(1)
    assert executor.checksum != first


def test_callable_executor_wraps_failures():
    def boom():
        raise ZeroDivisionError("x")
    executor = CallableExecutor(boom)
    with pytest.raises(ExecutorError):
        executor.measure(1)
    with pytest.raises(ExecutorError):
        executor.warmup(1)


def test_make_executor_kinds():
    builtin = make_executor(BenchmarkDefinition(id="b", kind="builtin", name="branchsum", params={"n": 4}))
    assert isinstance(builtin, CallableExecutor)
    assert builtin.measure(3).n_execs == 3
    command = make_executor(BenchmarkDefinition(id="c", kind="command", argv=("true",)))
    assert isinstance(command, CommandExecutor)


def test_command_executor_runs_process():
    executor = CommandExecutor([sys.executable, "-c", "print(1)"], name="py")
    m = executor.measure(2)
    assert m.n_execs == 2
    assert m.total_time > 0
    assert executor.spawn_overhead_ns(repeats=2) > 0


def test_command_executor_nonzero_exit():
    executor = CommandExecutor([sys.executable, "-c", "import sys; sys.exit(3)"])
    with pytest.raises(ExecutorError):
        executor.measure(1)
    with pytest.raises(ExecutorError):
        CommandExecutor([])
