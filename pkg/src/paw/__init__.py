"""Finite-dimensional quantum clocks and the dynamics they condition.

The package builds clock ladders with orthonormal or POVM time states,
solves the stationarity constraint on clock+system composites, and verifies
numerically that conditioning on clock readings recovers unitary dynamics,
Born statistics, and an entropic direction of time. Everything is dense
numpy with hbar = 1.
"""

from .arrow import (
    Bipartition,
    EntropySeries,
    build_interacting_universe,
    diagonal_coupling_demo,
    entropy_trajectory,
)
from .clock import (
    ORTHONORMAL,
    POVM,
    ClockSpec,
    ConjugacyReport,
    TimeBasis,
    age_rate,
    build_clock,
    time_operator,
    time_states,
    verify_conjugacy,
)
from .continuum import ContinuumProbe, phi_alpha, quadrature_identity, schrodinger_residual
from .linalg import (
    evolve_unitary,
    hermitian_eig,
    partial_trace,
    tensor,
    von_neumann_entropy,
)
from .povm import (
    AlphaGrid,
    RationalSpectrum,
    alpha_states,
    default_state_count,
    delta_sum,
    rationalize,
    spectrum_from_labels,
    verify_povm_identity,
)
from .universe import (
    HERMITIAN_KIND,
    POVM_KIND,
    SystemSpec,
    Trajectory,
    UniverseState,
    conditional_probability,
    density_relative_state,
    history_state,
    relative_state,
    solve_constraint,
    time_basis,
    trajectory,
    verify_schrodinger,
    vn_equation_residual,
)

__all__ = [
    "AlphaGrid",
    "Bipartition",
    "ClockSpec",
    "ConjugacyReport",
    "ContinuumProbe",
    "EntropySeries",
    "HERMITIAN_KIND",
    "ORTHONORMAL",
    "POVM",
    "POVM_KIND",
    "RationalSpectrum",
    "SystemSpec",
    "TimeBasis",
    "Trajectory",
    "UniverseState",
    "age_rate",
    "alpha_states",
    "build_clock",
    "build_interacting_universe",
    "conditional_probability",
    "default_state_count",
    "delta_sum",
    "density_relative_state",
    "diagonal_coupling_demo",
    "entropy_trajectory",
    "evolve_unitary",
    "hermitian_eig",
    "history_state",
    "partial_trace",
    "phi_alpha",
    "quadrature_identity",
    "rationalize",
    "relative_state",
    "schrodinger_residual",
    "solve_constraint",
    "spectrum_from_labels",
    "tensor",
    "time_basis",
    "time_operator",
    "time_states",
    "trajectory",
    "verify_conjugacy",
    "verify_povm_identity",
    "verify_schrodinger",
    "vn_equation_residual",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
