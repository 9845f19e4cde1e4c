"""
CLI command modules.
"""

from . import calibrate_commands
from . import tune_commands
from . import run_commands
from . import compare_commands
from . import simulate_commands
from . import oracle_commands

__all__ = [
    'calibrate_commands',
    'tune_commands',
    'run_commands',
    'compare_commands',
    'simulate_commands',
    'oracle_commands',
]
