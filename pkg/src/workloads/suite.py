"""
Benchmark definitions and suite files.

Suite files are YAML; see docs/SUITE_FORMAT.md for the grammar.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .builtins import DEFAULT_PARAMS, make_workload
from ..core.errors import InvalidConfigurationError
from ..core.executors import CallableExecutor, CommandExecutor
from ..core.timer import Clock
from ..utils import get_logger

logger = get_logger(__name__)

BUILTIN = "builtin"
COMMAND = "command"
BUILTIN_PREFIX = "builtin:"


@dataclass(frozen=True)
class BenchmarkDefinition:
    """One benchmark in a suite."""
    id: str
    kind: str
    name: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    argv: Tuple[str, ...] = ()
    cwd: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise InvalidConfigurationError("benchmark id must be non-empty")
        if self.kind == BUILTIN:
            if self.name not in DEFAULT_PARAMS:
                raise InvalidConfigurationError(
                    f"{self.id}: unknown builtin '{self.name}' (known: {', '.join(DEFAULT_PARAMS)})"
                )
        elif self.kind == COMMAND:
            if not self.argv:
                raise InvalidConfigurationError(f"{self.id}: command benchmark needs argv")
        else:
            raise InvalidConfigurationError(f"{self.id}: unknown kind '{self.kind}'")

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == BUILTIN:
            return {"id": self.id, "kind": self.kind, "name": self.name, "params": dict(self.params)}
        return {"id": self.id, "kind": self.kind, "argv": list(self.argv), "cwd": self.cwd}


def builtin_workloads() -> Dict[str, BenchmarkDefinition]:
    """Catalog of the shipped workloads with their default sizes."""
    return {
        name: BenchmarkDefinition(id=name, kind=BUILTIN, name=name, params=dict(params))
        for name, params in DEFAULT_PARAMS.items()
    }


def _parse_entry(raw: Dict[str, Any]) -> BenchmarkDefinition:
    kind = raw.get("kind", BUILTIN)
    if kind == BUILTIN:
        return BenchmarkDefinition(
            id=str(raw.get("id", raw.get("name", ""))),
            kind=BUILTIN,
            name=raw.get("name", raw.get("id")),
            params=dict(raw.get("params") or {}),
        )
    argv = raw.get("argv") or []
    if isinstance(argv, str):
        argv = argv.split()
    return BenchmarkDefinition(
        id=str(raw.get("id", "")),
        kind=kind,
        argv=tuple(str(a) for a in argv),
        cwd=raw.get("cwd"),
    )


def load_suite(path: Union[str, Path]) -> List[BenchmarkDefinition]:
    """Parse a YAML suite file; ids must be unique."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Suite file not found: {path}")
    with open(path, 'r') as f:
        data = yaml.safe_load(f) or {}
    entries = data.get("benchmarks") if isinstance(data, dict) else None
    if not entries:
        raise InvalidConfigurationError(f"{path}: no 'benchmarks' list")

    definitions = [_parse_entry(raw) for raw in entries]
    seen = set()
    for definition in definitions:
        if definition.id in seen:
            raise InvalidConfigurationError(f"{path}: duplicate benchmark id '{definition.id}'")
        seen.add(definition.id)
    logger.info(f"Loaded {len(definitions)} benchmarks from {path}")
    return definitions


def resolve_target(target: str) -> List[BenchmarkDefinition]:
    """`builtin:NAME`, `builtin:all`, or a suite file path."""
    if target.startswith(BUILTIN_PREFIX):
        name = target[len(BUILTIN_PREFIX):]
        catalog = builtin_workloads()
        if name == "all":
            return list(catalog.values())
        if name not in catalog:
            raise InvalidConfigurationError(f"unknown builtin '{name}' (known: {', '.join(catalog)})")
        return [catalog[name]]
    return load_suite(target)


def make_executor(definition: BenchmarkDefinition, clock: Optional[Clock] = None):
    """Executor for a definition."""
    if definition.kind == BUILTIN:
        return CallableExecutor(make_workload(definition.name, definition.params), clock=clock, name=definition.id)
    return CommandExecutor(definition.argv, cwd=definition.cwd, clock=clock, name=definition.id)
