"""Concrete systems: Burgers, two-species Vlasov, small ODEs, and their oracles."""

from .burgers import (
    BreakingTimeError,
    BurgersParams,
    ReferenceSolution,
    breaking_time,
    burgers_direct_rhs,
    burgers_f2,
    burgers_reference,
    burgers_system,
    characteristics,
)
from .presets import PRESETS, make_preset, sample
from .vlasov import (
    VlasovParams,
    check_velocity_tails,
    electric_field,
    field_operator,
    species_mass,
    vlasov_direct_rhs,
    vlasov_nonlinear_term,
    vlasov_reference,
    vlasov_system,
)

__all__ = [
    "PRESETS",
    "BreakingTimeError",
    "BurgersParams",
    "ReferenceSolution",
    "VlasovParams",
    "breaking_time",
    "burgers_direct_rhs",
    "burgers_f2",
    "burgers_reference",
    "burgers_system",
    "characteristics",
    "check_velocity_tails",
    "electric_field",
    "field_operator",
    "make_preset",
    "sample",
    "species_mass",
    "vlasov_direct_rhs",
    "vlasov_nonlinear_term",
    "vlasov_reference",
    "vlasov_system",
]
