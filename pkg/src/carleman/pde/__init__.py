"""Grid discretisation and Carleman lift of quadratic PDE systems."""

from .carleman import (
    PDECarlemanOperator,
    PDEQuadraticSystem,
    lift_initial_grid,
    pde_rhs,
    pde_state_size,
    pde_transfer_apply,
    slot_apply_F1,
    slot_contract_F2,
    slot_insert_F0,
)
from .grid import Axis, GridSpec
from .operators import (
    Compose,
    Contract,
    Coordinate,
    CumulativeIntegral,
    Derivative,
    DiscreteOp,
    Field,
    FullIntegral,
    Scale,
    ScaledSum,
    Zero,
    apply_along,
    eliminates_w,
)

__all__ = [
    "Axis",
    "Compose",
    "Contract",
    "Coordinate",
    "CumulativeIntegral",
    "Derivative",
    "DiscreteOp",
    "Field",
    "FullIntegral",
    "GridSpec",
    "PDECarlemanOperator",
    "PDEQuadraticSystem",
    "Scale",
    "ScaledSum",
    "Zero",
    "apply_along",
    "eliminates_w",
    "lift_initial_grid",
    "pde_rhs",
    "pde_state_size",
    "pde_transfer_apply",
    "slot_apply_F1",
    "slot_contract_F2",
    "slot_insert_F0",
]
