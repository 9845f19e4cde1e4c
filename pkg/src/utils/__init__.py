"""
Utility modules for the robust benchmarking harness.
"""

from .logger import setup_logger, get_logger
from .config_loader import load_config, Config, CACHE_ENV_VAR
from .file_utils import (
    ensure_dir,
    read_json,
    write_json,
    write_json_atomic,
    dumps_json,
    read_jsonl,
    write_jsonl
)

__all__ = [
    'setup_logger',
    'get_logger',
    'load_config',
    'Config',
    'CACHE_ENV_VAR',
    'ensure_dir',
    'read_json',
    'write_json',
    'write_json_atomic',
    'dumps_json',
    'read_jsonl',
    'write_jsonl',
]
