"""Stationary clock+system composites and their conditioned dynamics.

A composite is built so that the total Hamiltonian annihilates the global
state: every populated system level E_k is paired with a clock level at
exactly -E_k, making the joint state stationary. Conditioning the frozen
global state on a clock reading then reproduces ordinary unitary dynamics
of the system along the clock grid, outcome statistics obey the Born rule
(with orthogonal or with overlapping time states alike), and the global
state can be reassembled from any single conditioned snapshot.

Two clock constructions are available. The "hermitian" kind hosts the
negated system levels on an equally spaced ladder, which exists whenever
the system gaps are commensurate. The "povm" kind places them on an
integer-labelled lattice and works for any spectrum, at the price of
non-orthogonal time states and, for non-commensurate input, a reported
approximation residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .clock import ORTHONORMAL, POVM, ClockSpec, TimeBasis, build_clock, time_states
from .povm import RationalSpectrum, alpha_states, default_state_count, rationalize, spectrum_from_labels

HERMITIAN_KIND = "hermitian"
POVM_KIND = "povm"

# System gaps must sit this close to lattice multiples for a hermitian clock.
GAP_TOL = 1e-9
COEFF_NORM_TOL = 1e-8


@dataclass(frozen=True)
class SystemSpec:
    """System Hamiltonian with the level populations of the global state.

    ``coefficients`` are amplitudes in the energy eigenbasis, normalized so
    the conditioned state at reading t is sum_k c_k exp(-i E_k t) |E_k>.
    """

    hamiltonian: np.ndarray
    energies: np.ndarray
    eigenvectors: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        for arr in (self.hamiltonian, self.energies, self.eigenvectors, self.coefficients):
            arr.setflags(write=False)

    @property
    def d_s(self) -> int:
        return int(self.energies.shape[0])

    @classmethod
    def from_energies(cls, energies, coefficients) -> "SystemSpec":
        """Diagonal system: eigenbasis is the computational basis."""
        e = np.asarray(energies, dtype=float)
        if e.ndim != 1 or e.size == 0:
            raise ValueError("energies must be a non-empty 1-D array")
        if np.any(np.diff(e) < 0):
            raise ValueError("energies must be sorted ascending")
        c = _normalized_coefficients(coefficients, e.shape[0])
        return cls(hamiltonian=np.diag(e.astype(complex)), energies=e,
                   eigenvectors=np.eye(e.shape[0], dtype=complex), coefficients=c)

    @classmethod
    def from_hamiltonian(cls, hamiltonian, coefficients=None, initial_state=None,
                         tau0: float = 0.0) -> "SystemSpec":
        """General Hermitian system, populated either directly or by a state.

        With ``initial_state``, the populations are chosen so the conditioned
        state at reading ``tau0`` equals that state.
        """
        h = linalg.require_hermitian(hamiltonian)
        w, v = linalg.hermitian_eig(h)
        if (coefficients is None) == (initial_state is None):
            raise ValueError("provide exactly one of coefficients or initial_state")
        if initial_state is not None:
            psi0 = linalg.as_ket(initial_state)
            if psi0.shape[0] != w.shape[0]:
                raise ValueError("initial state dimension does not match the Hamiltonian")
            c = _normalized_coefficients(np.exp(1j * w * tau0) * (v.conj().T @ psi0), w.shape[0])
        else:
            c = _normalized_coefficients(coefficients, w.shape[0])
        return cls(hamiltonian=h, energies=w, eigenvectors=v, coefficients=c)

    def state_at(self, t: float) -> np.ndarray:
        """Conditioned state sum_k c_k exp(-i E_k t) |E_k> in the computational basis."""
        return self.eigenvectors @ (self.coefficients * np.exp(-1j * self.energies * t))

    def unitary_at(self, t: float) -> np.ndarray:
        """Propagator exp(-i H_s t)."""
        return (self.eigenvectors * np.exp(-1j * self.energies * t)) @ self.eigenvectors.conj().T


def _normalized_coefficients(coefficients, d_s: int) -> np.ndarray:
    c = np.asarray(coefficients, dtype=complex)
    if c.shape != (d_s,):
        raise ValueError(f"expected {d_s} coefficients, got shape {c.shape}")
    norm = np.linalg.norm(c)
    if abs(norm - 1.0) > COEFF_NORM_TOL:
        raise ValueError(f"coefficient norm {norm:.12g} deviates from 1 beyond {COEFF_NORM_TOL:.1e}")
    return c / norm


@dataclass(frozen=True)
class UniverseState:
    """Stationary global state on clock (x) system with its level pairing."""

    system: SystemSpec
    clock_kind: str
    clock: ClockSpec | RationalSpectrum
    pairing: np.ndarray
    psi: np.ndarray
    t0: float
    rationalization_residual: float

    def __post_init__(self):
        self.pairing.setflags(write=False)
        self.psi.setflags(write=False)

    @property
    def d_s(self) -> int:
        return self.system.d_s

    @property
    def d_c(self) -> int:
        return int(self.clock.d_c if self.clock_kind == HERMITIAN_KIND else self.clock.n_levels)

    @property
    def clock_energies(self) -> np.ndarray:
        return self.clock.energies

    def paired_clock_energies(self) -> np.ndarray:
        """Clock level energies hosting the system levels (close to -E_k)."""
        return self.clock_energies[self.pairing]

    def constraint_residual(self) -> float:
        """Norm of (H_c (x) 1 + 1 (x) H_s) applied to the global state."""
        mat = self.psi.reshape(self.d_c, self.d_s)
        out = self.clock_energies[:, None] * mat + mat @ self.system.hamiltonian.T
        return float(np.linalg.norm(out))


def solve_constraint(system: SystemSpec, clock_kind: str = HERMITIAN_KIND, *,
                     d_c: int | None = None, t0: float = 0.0,
                     max_denominator: int = 4096, dim_ratio: int = 4,
                     gap_tol: float = GAP_TOL) -> UniverseState:
    """Pair each populated system level with a clock level at minus its energy.

    The clock is sized to d_c >= dim_ratio * d_s and to hold every required
    level. For the hermitian kind the system gaps must be commensurate
    within ``gap_tol`` (no silent snapping); the povm kind accepts any
    spectrum and reports the lattice-fit residual instead.
    """
    if clock_kind not in (HERMITIAN_KIND, POVM_KIND):
        raise ValueError(f"unknown clock kind {clock_kind!r}")
    energies = system.energies
    scale = max(1.0, float(np.max(np.abs(energies))))
    if np.any(np.diff(energies) <= 1e-12 * scale):
        raise ValueError("degenerate system levels would collide on one clock level; "
                         "pairing requires a nondegenerate spectrum")

    if system.d_s == 1:
        labels = np.array([0], dtype=np.int64)
        unit = 1.0
        residual = 0.0
    else:
        spec = rationalize(energies, max_denominator)
        if clock_kind == HERMITIAN_KIND and spec.residual > gap_tol:
            raise ValueError(
                f"system gaps are not commensurate within {gap_tol:.1e} "
                f"(lattice residual {spec.residual:.3e}); use clock_kind='povm'")
        labels = spec.labels
        unit = spec.unit
        residual = spec.residual

    top = int(labels[-1])
    needed = max(dim_ratio * system.d_s, top + 1)
    n_clock = needed if d_c is None else int(d_c)
    if n_clock < needed:
        raise ValueError(f"d_c={n_clock} too small: need at least {needed} "
                         f"(dim_ratio * d_s and every paired level)")

    e0_c = -(energies[0] + top * unit)
    if clock_kind == HERMITIAN_KIND:
        clk: ClockSpec | RationalSpectrum = build_clock(n_clock, e0_c, unit, tau0=t0)
        pairing = (top - labels).astype(np.int64)
    else:
        base = np.sort(top - labels)
        stride = top + 1
        reps = -(-n_clock // base.shape[0])
        all_labels = (base[None, :] + stride * np.arange(reps)[:, None]).ravel()[:n_clock]
        clk = spectrum_from_labels(e0_c, all_labels, unit)
        pairing = np.searchsorted(all_labels, top - labels).astype(np.int64)

    psi_mat = np.zeros((n_clock, system.d_s), dtype=complex)
    for k in range(system.d_s):
        psi_mat[pairing[k]] += system.coefficients[k] * system.eigenvectors[:, k]
    psi = psi_mat.ravel()

    return UniverseState(system=system, clock_kind=clock_kind, clock=clk,
                         pairing=pairing, psi=psi, t0=float(t0),
                         rationalization_residual=float(residual))


def time_basis(universe: UniverseState, n_states: int | None = None) -> TimeBasis:
    """Time states of the universe's clock (orthonormal or POVM kind)."""
    if universe.clock_kind == HERMITIAN_KIND:
        if n_states is not None and n_states != universe.d_c:
            raise ValueError("orthonormal bases have exactly d_c states")
        return time_states(universe.clock)
    n = n_states if n_states is not None else default_state_count(universe.clock)
    return alpha_states(universe.clock, n, alpha0=universe.t0)


def relative_state(universe: UniverseState, basis: TimeBasis, m: int) -> np.ndarray:
    """System state conditioned on clock reading m: sqrt(d_c) <t_m|Psi>.

    Returned in the system's computational basis; normalized up to rounding
    for every constructed universe.
    """
    _check_basis(universe, basis)
    vec = basis.state(m)
    mat = universe.psi.reshape(universe.d_c, universe.d_s)
    return np.sqrt(universe.d_c) * (vec.conj() @ mat)


@dataclass(frozen=True)
class Trajectory:
    """Conditioned states over the full grid with per-point diagnostics."""

    grid: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    infidelities: np.ndarray

    def __post_init__(self):
        for arr in (self.grid, self.states, self.norms, self.infidelities):
            arr.setflags(write=False)


def trajectory(universe: UniverseState, basis: TimeBasis) -> Trajectory:
    """Condition on every grid point and compare with unitary evolution.

    The infidelity at m is 1 - |<phi_m|U(t_m - t_0)|phi_0>|^2 with both
    states normalized, so norm drift is reported separately.
    """
    _check_basis(universe, basis)
    mat = universe.psi.reshape(universe.d_c, universe.d_s)
    states = np.sqrt(universe.d_c) * (basis.vectors.conj() @ mat)
    norms = np.linalg.norm(states, axis=1)

    states_eig = states @ universe.system.eigenvectors.conj()
    c0 = states_eig[0] / norms[0]
    dt = basis.grid - basis.grid[0]
    evolved = np.exp(-1j * np.outer(dt, universe.system.energies)) * c0
    overlaps = np.einsum("mk,mk->m", states_eig.conj(), evolved) / norms
    infidelities = 1.0 - np.abs(overlaps) ** 2

    return Trajectory(grid=basis.grid.copy(), states=states, norms=norms,
                      infidelities=infidelities)


def verify_schrodinger(universe: UniverseState, basis: TimeBasis) -> float:
    """Worst infidelity between conditioned states and unitary evolution."""
    return float(np.max(trajectory(universe, basis).infidelities))


def history_state(universe: UniverseState, basis: TimeBasis) -> np.ndarray:
    """Reassemble the global state from the snapshot at the grid origin.

    Sums weight-scaled |t_m> (x) U(t_m - t_0)|phi_0> over the grid; the
    prefactor is 1/sqrt(d_c) for the orthonormal kind and sqrt(d_c)/D for
    the POVM kind.
    """
    _check_basis(universe, basis)
    phi0 = relative_state(universe, basis, 0)
    phi0_eig = universe.system.eigenvectors.conj().T @ phi0
    dt = basis.grid - basis.grid[0]
    evolved_eig = np.exp(-1j * np.outer(dt, universe.system.energies)) * phi0_eig
    evolved = evolved_eig @ universe.system.eigenvectors.T
    if basis.kind == ORTHONORMAL:
        prefactor = 1.0 / np.sqrt(universe.d_c)
    else:
        prefactor = np.sqrt(universe.d_c) / basis.n_states
    return prefactor * (basis.vectors.T @ evolved).ravel()


def conditional_probability(universe: UniverseState, basis: TimeBasis, m: int,
                            observable, outcome_index: int, *,
                            agreement_tol: float = 1e-10) -> float:
    """Probability of an outcome given a clock reading, checked two ways.

    Computes the joint/marginal ratio
    |(<t_m| <a|) Psi|^2 / sum_a' |(<t_m| <a'|) Psi|^2 and independently the
    Born value |<a|U(t_m - t_0)|phi_0>|^2; raises if they disagree beyond
    ``agreement_tol``, returns the ratio.
    """
    _check_basis(universe, basis)
    w, v = linalg.hermitian_eig(observable)
    if w.shape[0] != universe.d_s:
        raise ValueError("observable dimension does not match the system")
    if not 0 <= outcome_index < w.shape[0]:
        raise ValueError(f"outcome index {outcome_index} out of range")

    vec = basis.state(m)
    mat = universe.psi.reshape(universe.d_c, universe.d_s)
    x = vec.conj() @ mat  # <t_m|Psi>, a system ket
    amplitudes = v.conj().T @ x
    marginal = float(np.sum(np.abs(amplitudes) ** 2))
    if marginal <= 1e-14:
        raise ValueError("clock reading has vanishing probability; cannot condition")
    ratio = float(np.abs(amplitudes[outcome_index]) ** 2) / marginal

    phi0 = relative_state(universe, basis, 0)
    phi0 /= np.linalg.norm(phi0)
    t = basis.grid[m] - basis.grid[0]
    born = float(np.abs(np.vdot(v[:, outcome_index], universe.system.unitary_at(t) @ phi0)) ** 2)
    if abs(ratio - born) > agreement_tol:
        raise ValueError(f"conditional probability {ratio:.15g} deviates from Born value "
                         f"{born:.15g} beyond {agreement_tol:.1e}")
    return ratio


def density_relative_state(universe: UniverseState, basis: TimeBasis, m: int) -> np.ndarray:
    """Conditioned reduced density matrix via the projector route.

    Projects the global density matrix on |t_m><t_m| in the clock factor,
    traces the clock out and normalizes. Requires the orthonormal kind.
    """
    _check_basis(universe, basis)
    if basis.kind != ORTHONORMAL:
        raise ValueError("density conditioning uses clock projectors; needs an orthonormal basis")
    p_clock = linalg.projector(basis.state(m))
    rho = np.outer(universe.psi, universe.psi.conj())
    reduced = linalg.partial_trace(np.kron(p_clock, np.eye(universe.d_s)) @ rho,
                                   (universe.d_c, universe.d_s), keep="B")
    tr = float(np.trace(reduced).real)
    if tr <= 1e-14:
        raise ValueError("clock reading has vanishing weight; marginal is degenerate")
    return reduced / tr


def vn_equation_residual(universe: UniverseState, basis: TimeBasis) -> float:
    """Worst defect of the conditioned density matrices against i[rho, H_s].

    Uses a central difference over the cyclic grid, so the residual shrinks
    quadratically with the grid step.
    """
    _check_basis(universe, basis)
    rhos = [density_relative_state(universe, basis, m) for m in range(basis.n_states)]
    h = universe.system.hamiltonian
    dt = universe.clock.delta_tau
    worst = 0.0
    n = len(rhos)
    for m in range(n):
        fd = (rhos[(m + 1) % n] - rhos[(m - 1) % n]) / (2.0 * dt)
        gen = 1j * (rhos[m] @ h - h @ rhos[m])
        worst = max(worst, float(np.linalg.norm(fd - gen)))
    return worst


def _check_basis(universe: UniverseState, basis: TimeBasis) -> None:
    if basis.dim != universe.d_c:
        raise ValueError(f"basis dimension {basis.dim} does not match clock dimension {universe.d_c}")
    expected = ORTHONORMAL if universe.clock_kind == HERMITIAN_KIND else POVM
    if basis.kind != expected:
        raise ValueError(f"{universe.clock_kind} universe needs a {expected} basis, got {basis.kind}")
