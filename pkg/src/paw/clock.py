"""Equally spaced clock ladders and their conjugate time observable.

A clock is a finite ladder of nondegenerate levels E_n = E0 + n * delta_e.
Its time states are discrete-Fourier superpositions of the levels over a
uniform grid spanning one recurrence period T = 2*pi/delta_e. They form an
orthonormal basis, and weighting each projector by its grid value defines a
Hermitian operator whose spectrum is the grid itself. The ladder generates
shifts along the grid and the operator generates shifts along the ladder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg

ORTHONORMAL = "orthonormal"
POVM = "povm"

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ClockSpec:
    """Equally spaced ladder with levels E0 + n * delta_e for n = 0..d_c-1."""

    d_c: int
    e0: float
    delta_e: float
    tau0: float = 0.0

    def __post_init__(self):
        if self.d_c < 2:
            raise ValueError(f"clock needs at least 2 levels, got d_c={self.d_c}")
        if not self.delta_e > 0.0:
            raise ValueError(f"level spacing must be positive, got {self.delta_e}")

    @property
    def period(self) -> float:
        """Recurrence time T = 2*pi/delta_e."""
        return TWO_PI / self.delta_e

    @property
    def delta_tau(self) -> float:
        """Grid resolution 2*pi/(delta_e * d_c)."""
        return TWO_PI / (self.delta_e * self.d_c)

    @property
    def energies(self) -> np.ndarray:
        return self.e0 + np.arange(self.d_c) * self.delta_e

    @property
    def grid(self) -> np.ndarray:
        """Time grid tau0 + m * delta_tau for m = 0..d_c-1."""
        return self.tau0 + np.arange(self.d_c) * self.delta_tau

    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.energies.astype(complex))


def build_clock(d_c: int, e0: float, delta_e: float, tau0: float = 0.0) -> ClockSpec:
    """Validate parameters and assemble a :class:`ClockSpec`."""
    return ClockSpec(d_c=int(d_c), e0=float(e0), delta_e=float(delta_e), tau0=float(tau0))


@dataclass(frozen=True)
class TimeBasis:
    """Clock time states with the weight that resolves the identity.

    ``vectors`` holds one state per row, expressed in the clock energy basis;
    ``grid`` holds the matching time values. For the orthonormal kind the
    weight is 1 and the rows form a unitary matrix; for the POVM kind there
    are more rows than columns, the rows are not orthogonal, and
    weight * sum_m |t_m><t_m| = identity.
    """

    kind: str
    vectors: np.ndarray
    grid: np.ndarray
    weight: float

    def __post_init__(self):
        if self.kind not in (ORTHONORMAL, POVM):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.vectors.ndim != 2 or self.vectors.shape[0] != self.grid.shape[0]:
            raise ValueError("vectors and grid are inconsistent")
        self.vectors.setflags(write=False)
        self.grid.setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def state(self, m: int) -> np.ndarray:
        if not 0 <= m < self.n_states:
            raise IndexError(f"state index {m} outside grid of {self.n_states} points")
        return self.vectors[m]

    def gram(self) -> np.ndarray:
        """Overlap matrix G[m, m'] = <t_m | t_m'>."""
        return self.vectors.conj() @ self.vectors.T

    def projector_sum(self) -> np.ndarray:
        """sum_m |t_m><t_m| without the weight."""
        return self.vectors.T @ self.vectors.conj()

    def identity_residual(self) -> float:
        """Frobenius norm of weight * sum_m |t_m><t_m| - identity."""
        return float(np.linalg.norm(self.weight * self.projector_sum() - np.eye(self.dim)))


def time_states(spec: ClockSpec) -> TimeBasis:
    """Orthonormal time states (1/sqrt(d_c)) sum_n exp(-i E_n tau_m) |E_n>."""
    phases = np.exp(-1j * np.outer(spec.grid, spec.energies))
    vectors = phases / np.sqrt(spec.d_c)
    return TimeBasis(kind=ORTHONORMAL, vectors=vectors, grid=spec.grid.copy(), weight=1.0)


def time_operator(basis: TimeBasis) -> np.ndarray:
    """Hermitian observable sum_m tau_m |tau_m><tau_m| in the energy basis.

    Only defined for the orthonormal kind; the overcomplete POVM states do
    not admit a Hermitian observable with the grid as its spectrum.
    """
    if basis.kind != ORTHONORMAL:
        raise ValueError("time operator requires an orthonormal basis; POVM time states admit none")
    return (basis.vectors.T * basis.grid) @ basis.vectors.conj()


@dataclass(frozen=True)
class ConjugacyReport:
    """Worst-case errors of the two shift relations between ladder and grid."""

    max_err_shift_time: float
    max_err_shift_energy: float


def verify_conjugacy(spec: ClockSpec, basis: TimeBasis) -> ConjugacyReport:
    """Check that the ladder shifts the grid and the grid observable shifts the ladder.

    Time direction: exp(-i H_c (tau_m - tau_0)) |tau_0> must reproduce |tau_m>.
    Energy direction: exp(i tau_op (E_n - E_0)) |E_0> must reproduce |E_n>.
    Both exponentials are evaluated through their spectral decompositions,
    which are diagonal in the energy and time bases respectively.
    """
    if basis.kind != ORTHONORMAL:
        raise ValueError("conjugacy check requires an orthonormal basis")
    energies = spec.energies
    grid = basis.grid

    # exp(-i H_c dt) is a pure phase per energy component.
    shifted = np.exp(-1j * np.outer(grid - grid[0], energies)) * basis.vectors[0]
    err_time = np.linalg.norm(shifted - basis.vectors, axis=1)

    # exp(i tau_op dE) = sum_m exp(i tau_m dE) |tau_m><tau_m|, applied to |E_0>.
    overlaps = basis.vectors[:, 0].conj()
    phases = np.exp(1j * np.outer(energies - energies[0], grid))
    shifted_kets = (phases * overlaps) @ basis.vectors
    err_energy = np.linalg.norm(shifted_kets - np.eye(spec.d_c), axis=1)

    return ConjugacyReport(
        max_err_shift_time=float(err_time.max()),
        max_err_shift_energy=float(err_energy.max()),
    )


def age_rate(psi, spec: ClockSpec, basis: TimeBasis) -> float:
    """Instantaneous drift -i <psi| [tau_op, H_c] |psi> of the mean grid value.

    Vanishes on every energy eigenstate: a clock prepared in a stationary
    state shows no advancing reading.
    """
    vec = linalg.as_ket(psi)
    if vec.shape[0] != spec.d_c:
        raise ValueError(f"state dimension {vec.shape[0]} does not match clock dimension {spec.d_c}")
    if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
        raise ValueError("age rate requires a normalized state")
    tau_op = time_operator(basis)
    h_c = spec.hamiltonian()
    comm = tau_op @ h_c - h_c @ tau_op
    value = -1j * np.vdot(vec, comm @ vec)
    if abs(value.imag) > 1e-12:
        raise ValueError(f"age rate has spurious imaginary part {value.imag:.3e}")
    return float(value.real)
