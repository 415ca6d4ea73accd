"""Clocks with rational-ratio level spacings and their POVM time states.

Ladders whose gaps have rational ratios fit a common lattice: every level can
be written E_i = E0 + r_i * (2*pi/T) with integer labels r_i. The time states
on such a ladder live on a grid of D >= r_p + 1 points over one period T.
They are overcomplete and non-orthogonal, but their projectors weighted by
(number of levels)/D still resolve the identity exactly, so they support
consistent conditioning even though individual readings overlap.

Arbitrary (non-rational) spectra are approximated on the lattice by
continued-fraction convergents with a capped denominator; the approximation
error is reported as a residual and propagates into the identity resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .clock import POVM, TWO_PI, TimeBasis

# Integer-label overflow guard; labels beyond this lose exactness headroom.
LABEL_LIMIT = 2**62


@dataclass(frozen=True)
class RationalSpectrum:
    """Ladder E_i = E0 + r_i * (2*pi/T) with integer labels r_i.

    ``input_energies`` keeps the caller's levels verbatim; ``energies`` holds
    the lattice values. ``residual`` is the largest gap between the two and
    is zero (up to rounding) when the input ratios were already rational.
    """

    input_energies: np.ndarray
    energies: np.ndarray
    labels: np.ndarray
    period: float
    residual: float

    def __post_init__(self):
        if self.labels[0] != 0 or np.any(np.diff(self.labels) <= 0):
            raise ValueError("labels must start at 0 and increase strictly")
        self.input_energies.setflags(write=False)
        self.energies.setflags(write=False)
        self.labels.setflags(write=False)

    @property
    def n_levels(self) -> int:
        return int(self.labels.shape[0])

    @property
    def e0(self) -> float:
        return float(self.energies[0])

    @property
    def top_label(self) -> int:
        return int(self.labels[-1])

    @property
    def unit(self) -> float:
        """Lattice spacing 2*pi/T."""
        return TWO_PI / self.period


def spectrum_from_labels(e0: float, labels, unit: float) -> RationalSpectrum:
    """Exact lattice ladder from integer labels and a spacing unit."""
    lab = np.asarray(labels, dtype=np.int64)
    if lab.ndim != 1 or lab.size == 0:
        raise ValueError("labels must be a non-empty 1-D integer array")
    if not unit > 0.0:
        raise ValueError("lattice unit must be positive")
    if lab[-1] > LABEL_LIMIT:
        raise ValueError(f"label {lab[-1]} exceeds limit 2^62")
    energies = e0 + lab * unit
    return RationalSpectrum(
        input_energies=energies.copy(),
        energies=energies,
        labels=lab,
        period=TWO_PI / unit,
        residual=0.0,
    )


def rationalize(energies, max_denominator: int) -> RationalSpectrum:
    """Fit strictly increasing levels onto an integer-labelled lattice.

    Each gap ratio (E_i - E0)/(E1 - E0) is replaced by its best rational
    approximation C_i/B_i with denominator at most ``max_denominator``
    (continued-fraction convergents). The first label r_1 is the least
    common multiple of the B_i, the remaining labels are r_1 * C_i / B_i,
    and the period is T = 2*pi*r_1/(E1 - E0).
    """
    inp = np.asarray(energies, dtype=float)
    if inp.ndim != 1 or inp.size < 2:
        raise ValueError("need at least two energy levels")
    if np.any(np.diff(inp) <= 0):
        raise ValueError("energy levels must be strictly increasing")
    if max_denominator < 1:
        raise ValueError("max_denominator must be at least 1")

    base_gap = inp[1] - inp[0]
    ratios = [Fraction(float(x)).limit_denominator(max_denominator)
              for x in (inp[1:] - inp[0]) / base_gap]
    if len(set(ratios)) != len(ratios):
        raise ValueError(
            f"levels indistinguishable at max_denominator={max_denominator}; increase it")

    r1 = 1
    for q in ratios:
        r1 = lcm(r1, q.denominator)
        if r1 > LABEL_LIMIT:
            raise ValueError(
                f"label lcm exceeds 2^62 at max_denominator={max_denominator}; decrease it")
    labels = [0]
    snapped = [float(inp[0])]
    for q in ratios:
        r_i = r1 * q.numerator // q.denominator
        if r_i > LABEL_LIMIT:
            raise ValueError(
                f"label {r_i} exceeds 2^62 at max_denominator={max_denominator}; decrease it")
        labels.append(r_i)
        # Multiply before dividing: restores exact floats for exact ratios.
        snapped.append(float(inp[0] + base_gap * q.numerator / q.denominator))

    lab = np.asarray(labels, dtype=np.int64)
    snap = np.asarray(snapped)
    return RationalSpectrum(
        input_energies=inp.copy(),
        energies=snap,
        labels=lab,
        period=TWO_PI * r1 / base_gap,
        residual=float(np.max(np.abs(snap - inp))),
    )


@dataclass(frozen=True)
class AlphaGrid:
    """Uniform grid of n_points readings over one period."""

    n_points: int
    alpha0: float
    period: float

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError("grid needs at least one point")

    @property
    def step(self) -> float:
        return self.period / self.n_points

    @property
    def values(self) -> np.ndarray:
        return self.alpha0 + np.arange(self.n_points) * self.step


def default_state_count(spectrum: RationalSpectrum) -> int:
    """Comfortable grid density: max(r_p + 1, 4 * number of levels)."""
    return max(spectrum.top_label + 1, 4 * spectrum.n_levels)


def alpha_states(spectrum: RationalSpectrum, n_states: int | None = None,
                 alpha0: float = 0.0, *, enforce_grid_bound: bool = True) -> TimeBasis:
    """POVM time states (1/sqrt(p+1)) sum_i exp(-i E_i alpha_m) |E_i>.

    The grid must hold at least r_p + 1 points: with fewer, label differences
    wrap around the grid length and the identity resolution fails (see
    ``verify_povm_identity``). ``enforce_grid_bound=False`` skips that check
    and exists only to demonstrate the failure.

    States are built from the input energies, so an approximated spectrum
    carries its rationalization error into the identity residual.
    """
    d = n_states if n_states is not None else default_state_count(spectrum)
    if enforce_grid_bound and d < spectrum.top_label + 1:
        raise ValueError(
            f"grid of {d} points is too small: need at least r_p + 1 = {spectrum.top_label + 1}")
    grid = AlphaGrid(n_points=int(d), alpha0=float(alpha0), period=spectrum.period)
    phases = np.exp(-1j * np.outer(grid.values, spectrum.input_energies))
    vectors = phases / np.sqrt(spectrum.n_levels)
    return TimeBasis(kind=POVM, vectors=vectors, grid=grid.values,
                     weight=spectrum.n_levels / d)


def verify_povm_identity(basis: TimeBasis) -> float:
    """Frobenius residual of weight * sum_m |alpha_m><alpha_m| - identity."""
    return basis.identity_residual()


def delta_sum(grid: AlphaGrid, energy_sum: float) -> complex:
    """Phase sum sum_m exp(-i alpha_m * energy_sum) over the grid.

    Equals n_points when energy_sum sits on a multiple of n_points lattice
    units (including zero) and vanishes on every other integer-label value.
    """
    return complex(np.sum(np.exp(-1j * grid.values * energy_sum)))
