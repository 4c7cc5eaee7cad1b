"""Bound states of the Woods-Saxon well.

Closed-form Klein-Gordon and Schrodinger spectra obtained with an exponential
stand-in for the centrifugal barrier, their eigenfunctions, and an independent
Numerov shooting solver that checks them.
"""

from .closed_form import (
    Branch,
    EnergyLevel,
    Method,
    QuantumState,
    evaluate,
    kg_energy,
    kg_energy_swave,
    kg_reality_condition,
    schrodinger_energy,
    schrodinger_energy_swave,
    spectrum_table,
    states_up_to,
)
from .oracle import (
    RadialGrid,
    compare_eigenfunctions,
    radial_problem,
    solve_eigenvalue,
    solve_spectrum,
    solve_state,
)
from .potential import (
    DIMENSIONLESS,
    NUCLEAR,
    UnitSystem,
    WoodsSaxonParams,
    effective_potential_approx,
    effective_potential_exact,
    pekeris_coefficients,
    woods_saxon,
)

__version__ = "0.1.0"

__all__ = [
    "Branch", "EnergyLevel", "Method", "QuantumState", "evaluate", "kg_energy",
    "kg_energy_swave", "kg_reality_condition", "schrodinger_energy",
    "schrodinger_energy_swave", "spectrum_table", "states_up_to", "RadialGrid",
    "compare_eigenfunctions", "radial_problem", "solve_eigenvalue", "solve_spectrum",
    "solve_state", "DIMENSIONLESS", "NUCLEAR", "UnitSystem", "WoodsSaxonParams",
    "effective_potential_approx", "effective_potential_exact", "pekeris_coefficients",
    "woods_saxon",
]
