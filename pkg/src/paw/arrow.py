"""Emergent arrow: entanglement growth between two parts of the system.

Split the system into an observer and an observed factor, start them in a
product state, and let an interacting Hamiltonian couple them. Conditioning
on successive clock readings then shows the observer's reduced entropy grow
from zero, which serves as a direction of time even though the global state
never moves. In finite dimension the entropy recurs, so only the curve is
reported; monotonicity holds on the analytically understood early window of
the shipped demo.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .clock import TimeBasis
from .universe import HERMITIAN_KIND, SystemSpec, UniverseState, solve_constraint, trajectory


@dataclass(frozen=True)
class Bipartition:
    """Interacting system split into factors of dimension d1 and d2."""

    d1: int
    d2: int
    hamiltonian: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        if self.d1 < 2 or self.d2 < 2:
            raise ValueError("both factors need dimension at least 2")
        if self.hamiltonian.shape != (self.d1 * self.d2,) * 2:
            raise ValueError("Hamiltonian does not match d1 * d2")
        for name, vec, dim in (("psi1", self.psi1, self.d1), ("psi2", self.psi2, self.d2)):
            if vec.shape != (dim,):
                raise ValueError(f"{name} must have dimension {dim}")
            if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
                raise ValueError(f"{name} must be normalized")
        for arr in (self.hamiltonian, self.psi1, self.psi2):
            arr.setflags(write=False)

    @property
    def initial_state(self) -> np.ndarray:
        return linalg.tensor(self.psi1, self.psi2)


def diagonal_coupling_demo(coupling: float = 1.0,
                           fields: tuple[float, float] = (2.0, 5.0)) -> Bipartition:
    """Two qubits with a sigma_z (x) sigma_z coupling, both starting in |+>.

    Local sigma_z fields are added to keep the four levels nondegenerate
    (degenerate levels cannot be paired with distinct clock levels). Local
    terms act as local unitaries and leave entanglement untouched, so the
    observer entropy follows the bare-coupling closed form: the binary
    entropy of (1 + cos(2 g t))/2, peaking at ln 2 when 2 g t = pi/2.
    The defaults give the integer spectrum {8, -4, 2, -6}.
    """
    g = float(coupling)
    f1, f2 = (float(x) for x in fields)
    sz = np.array([1.0, -1.0])
    levels = (f1 * np.kron(sz, np.ones(2)) + f2 * np.kron(np.ones(2), sz)
              + g * np.kron(sz, sz))
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return Bipartition(d1=2, d2=2, hamiltonian=np.diag(levels.astype(complex)),
                       psi1=plus, psi2=plus.copy())


def build_interacting_universe(bip: Bipartition, *, clock_kind: str = HERMITIAN_KIND,
                               d_c: int | None = None, t0: float = 0.0,
                               max_denominator: int = 4096,
                               dim_ratio: int = 4) -> UniverseState:
    """Stationary composite whose conditioned state starts as the product state.

    The populations come from expanding the product state in the eigenbasis
    of the interacting Hamiltonian; the clock lattice comes from
    rationalizing its spectrum, so a non-commensurate spectrum needs
    clock_kind="povm" and carries the reported lattice residual.
    """
    system = SystemSpec.from_hamiltonian(bip.hamiltonian, initial_state=bip.initial_state,
                                         tau0=t0)
    return solve_constraint(system, clock_kind, d_c=d_c, t0=t0,
                            max_denominator=max_denominator, dim_ratio=dim_ratio)


@dataclass(frozen=True)
class EntropySeries:
    """Observer entropy over the clock grid, optionally with mutual information."""

    grid: np.ndarray
    entropy: np.ndarray
    mutual_information: np.ndarray | None = None

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.entropy.setflags(write=False)
        if self.mutual_information is not None:
            self.mutual_information.setflags(write=False)


def entropy_trajectory(universe: UniverseState, basis: TimeBasis, bip: Bipartition, *,
                       include_mutual_information: bool = False) -> EntropySeries:
    """Observer reduced entropy of the conditioned state at every reading.

    Mutual information S(1) + S(2) - S(12) is exposed as an optional column;
    for the pure conditioned states here it is simply twice the entropy, but
    it is computed honestly from the three reduced matrices.
    """
    if bip.d1 * bip.d2 != universe.d_s:
        raise ValueError("bipartition does not match the system dimension")
    traj = trajectory(universe, basis)
    n = traj.grid.shape[0]
    entropy = np.empty(n)
    mutual = np.empty(n) if include_mutual_information else None
    for m in range(n):
        phi = traj.states[m] / traj.norms[m]
        rho = linalg.projector(phi)
        rho1 = linalg.partial_trace(rho, (bip.d1, bip.d2), keep="A")
        entropy[m] = linalg.von_neumann_entropy(rho1)
        if mutual is not None:
            rho2 = linalg.partial_trace(rho, (bip.d1, bip.d2), keep="B")
            s12 = linalg.von_neumann_entropy(rho)
            mutual[m] = entropy[m] + linalg.von_neumann_entropy(rho2) - s12
    return EntropySeries(grid=traj.grid.copy(), entropy=entropy, mutual_information=mutual)
