"""Simulation toolkit for directionally-unbiased linear-optical multiports."""
from .core import (check_hermitian, check_unitary, equal_up_to_phase, evolve, exp_evolution,
                   principal_log_hamiltonian)
from .multiport import eigensystem, exit_probabilities, grover_unitary, strict_three_port

__version__ = "0.1.0"

__all__ = [
    "check_hermitian", "check_unitary", "eigensystem", "equal_up_to_phase", "evolve", "exit_probabilities",
    "exp_evolution", "grover_unitary", "principal_log_hamiltonian", "strict_three_port",
]
