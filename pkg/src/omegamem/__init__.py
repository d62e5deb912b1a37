"""Memory of omega-regular objectives through epsilon-complete parity automata."""

from .automata import (EPS, MemoryPartition, ParityAutomaton, Transition,
                       UltimatelyPeriodicWord, accepts, equivalent, included)
from .completeness import breakpoints, is_k_wise_eps_complete, validate_completion
from .games import GameArena, djw_memory, memory_lower_bound, solve_game, wins_with_memory
from .solver import check_certificate, compute_memory

__version__ = "0.1.0"
