from .algebra import equiv_command, group_check_command, weight_command, wvec_command
from .reduction import pet_reduce_command
from .experiments import (
    classify_command,
    density_command,
    nested_command,
    returns_command,
    scenario_command,
)

__all__ = [
    'weight_command',
    'wvec_command',
    'equiv_command',
    'group_check_command',
    'pet_reduce_command',
    'classify_command',
    'returns_command',
    'density_command',
    'nested_command',
    'scenario_command',
]
