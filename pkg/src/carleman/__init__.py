"""Carleman linearization of quadratic ODE and PDE systems.

The package lifts ``du/dt = F0 + F1 u + F2 (u x u)`` (and its PDE analogue
on tensor-product grids) to a truncated linear system over Kronecker
powers, integrates it, and compares against direct nonlinear solvers.
"""

from .kron import LiftIndex, kron_power, kron_vec, lifted_apply, lifted_matrix
from .lifted import (
    DEFAULT_MEMORY_CAP,
    LiftedState,
    MemoryGuardError,
    NumericalAbort,
    extract_solution,
    rhs,
)
from .ode import CarlemanOperator, QuadraticODESystem, carleman_delta, lift_initial, transfer_apply

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MEMORY_CAP",
    "CarlemanOperator",
    "LiftIndex",
    "LiftedState",
    "MemoryGuardError",
    "NumericalAbort",
    "QuadraticODESystem",
    "carleman_delta",
    "extract_solution",
    "kron_power",
    "kron_vec",
    "lift_initial",
    "lifted_apply",
    "lifted_matrix",
    "rhs",
    "transfer_apply",
]
