"""Semisprays, energy and the Euler-Lagrange system for a Lagrangian."""

from src.app.mechanics.dynamics import (
    ELResidual,
    EnergyValue,
    Semispray,
    dynamics_identity_check,
    el_residual,
    energy,
    energy_differential,
    interior_product,
    liouville_field,
    solve_semispray,
)

__all__ = [
    "ELResidual",
    "EnergyValue",
    "Semispray",
    "dynamics_identity_check",
    "el_residual",
    "energy",
    "energy_differential",
    "interior_product",
    "liouville_field",
    "solve_semispray",
]
