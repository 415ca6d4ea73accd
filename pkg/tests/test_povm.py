import numpy as np
import pytest

from paw import (
    AlphaGrid,
    alpha_states,
    build_clock,
    default_state_count,
    delta_sum,
    rationalize,
    spectrum_from_labels,
    time_states,
    verify_povm_identity,
)
from paw.clock import TWO_PI


def geometric_phase_sum(delta_label, alpha0, unit, n_points):
    """Closed-form sum over m of exp(-i (alpha0 + m T/D) delta_label * unit)."""
    lead = np.exp(-1j * delta_label * unit * alpha0)
    if delta_label % n_points == 0:
        return lead * n_points
    q = np.exp(-2j * np.pi * delta_label / n_points)
    return lead * (1 - q**n_points) / (1 - q)


def identity_oracle(labels, alpha0, unit, n_points):
    """Weighted projector sum assembled from closed-form geometric sums."""
    d = len(labels)
    total = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for k in range(d):
            total[i, k] = geometric_phase_sum(labels[i] - labels[k], alpha0, unit, n_points) / d
    return (d / n_points) * total


class TestRationalize:
    def test_five_halves_ratio(self):
        spec = rationalize([0.0, 1.0, 2.5], 64)
        np.testing.assert_array_equal(spec.labels, [0, 2, 5])
        assert spec.period == 4 * np.pi
        assert spec.residual == 0.0
        np.testing.assert_array_equal(spec.energies, spec.input_energies)

    def test_equally_spaced_degenerates_to_unit_labels(self):
        spec = rationalize([0.0, 1.0, 2.0], 64)
        np.testing.assert_array_equal(spec.labels, [0, 1, 2])
        assert spec.period == TWO_PI

    def test_sqrt2_convergent(self):
        spec = rationalize([0.0, 1.0, np.sqrt(2.0)], 50)
        # best rational below denominator 50 is the convergent 41/29
        np.testing.assert_array_equal(spec.labels, [0, 29, 41])
        assert 0.0 < spec.residual <= 1.0 / 29**2

    def test_idempotent(self):
        first = rationalize([0.2, 1.4, 3.2, 4.1], 64)
        second = rationalize(first.energies, 64)
        np.testing.assert_array_equal(first.labels, second.labels)
        assert first.period == second.period
        assert second.residual <= 1e-15

    def test_non_increasing_rejected(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            rationalize([0.0, 1.0, 1.0], 16)

    def test_indistinguishable_levels_rejected(self):
        with pytest.raises(ValueError, match="indistinguishable"):
            rationalize([0.0, 1.0, 1.001], 3)

    def test_lcm_overflow_rejected(self):
        primes = [9973, 9967, 9949, 9941, 9931, 9929, 9923]
        energies = [0.0, 1.0] + [1.0 + 1.0 / p for p in primes]  # descending p: increasing
        with pytest.raises(ValueError, match="2\\^62"):
            rationalize(energies, 10000)


class TestAlphaStates:
    def test_three_levels_six_states(self):
        basis = alpha_states(rationalize([0.0, 1.0, 2.5], 64), 6)
        assert basis.vectors.shape == (6, 3)
        assert basis.weight == 0.5
        np.testing.assert_allclose(np.linalg.norm(basis.vectors, axis=1), 1.0, atol=1e-12)

    def test_oversampled_equally_spaced_identity(self):
        spec = rationalize([0.0, 1.0, 2.0, 3.0], 16)
        basis = alpha_states(spec, spec.n_levels + 1)
        assert verify_povm_identity(basis) <= 1e-12

    def test_matches_orthonormal_basis_at_critical_count(self):
        spec = rationalize([0.5, 1.5, 2.5, 3.5], 16)
        povm_basis = alpha_states(spec, spec.n_levels, alpha0=0.25)
        clock_basis = time_states(build_clock(4, 0.5, 1.0, tau0=0.25))
        assert np.linalg.norm(povm_basis.vectors - clock_basis.vectors) <= 1e-12
        assert np.linalg.norm(povm_basis.gram() - np.eye(4)) <= 1e-12

    def test_undersized_grid_rejected(self):
        spec = rationalize([0.0, 1.0, 2.5], 64)
        with pytest.raises(ValueError, match="too small"):
            alpha_states(spec, spec.top_label)

    def test_default_state_count(self):
        spec = rationalize([0.0, 1.0, 2.5], 64)
        assert default_state_count(spec) == 12  # max(5 + 1, 4 * 3)
        wide = spectrum_from_labels(0.0, [0, 7, 93], 1.0)
        assert default_state_count(wide) == 94


class TestPovmIdentity:
    def test_exact_spectrum(self):
        basis = alpha_states(rationalize([0.0, 1.0, 2.5], 64), 6)
        assert verify_povm_identity(basis) <= 1e-12

    def test_matches_geometric_oracle(self, rng):
        labels = np.sort(rng.choice(np.arange(1, 40), size=5, replace=False))
        labels = np.concatenate([[0], labels])
        spec = spectrum_from_labels(-1.3, labels, 0.73)
        n_points = spec.top_label + 3
        alpha0 = 0.4
        basis = alpha_states(spec, n_points, alpha0=alpha0)
        oracle = identity_oracle(spec.labels, alpha0, spec.unit, n_points)
        assert np.linalg.norm(basis.weight * basis.projector_sum() - oracle) <= 1e-10
        assert abs(verify_povm_identity(basis)
                   - np.linalg.norm(oracle - np.eye(spec.n_levels))) <= 1e-10

    def test_documented_failure_at_top_label(self):
        # with D = r_p the offset r_p - r_0 wraps to zero and survives
        spec = rationalize([0.0, 1.0, 2.5], 64)
        basis = alpha_states(spec, spec.top_label, enforce_grid_bound=False)
        assert verify_povm_identity(basis) > 0.1

    def test_rationalized_spectrum_reports_nonzero(self):
        spec = rationalize([0.0, 1.0, np.sqrt(2.0)], 12)
        basis = alpha_states(spec, spec.top_label + 1)
        residual = verify_povm_identity(basis)
        assert residual > 1e-6  # reported, grows with the lattice misfit

    @pytest.mark.parametrize("n_levels,top", [(8, 40), (16, 200), (64, 4095)])
    def test_exact_residual_across_sizes(self, rng, n_levels, top):
        labels = np.sort(rng.choice(np.arange(1, top + 1), size=n_levels - 1, replace=False))
        labels = np.concatenate([[0], labels])
        spec = spectrum_from_labels(float(rng.uniform(-2, 0)), labels, float(rng.uniform(0.3, 1.2)))
        basis = alpha_states(spec, spec.top_label + 1)
        assert verify_povm_identity(basis) <= 1e-10


class TestDeltaSum:
    def test_zero_energy_sum(self):
        grid = AlphaGrid(6, 0.0, 4 * np.pi)
        assert delta_sum(grid, 0.0) == 6

    def test_unit_label_cancels(self):
        grid = AlphaGrid(6, 0.0, 4 * np.pi)
        assert abs(delta_sum(grid, TWO_PI / (4 * np.pi))) <= 1e-12

    def test_aliasing_at_grid_size(self):
        # offset D behaves like offset 0: documents why D must exceed the span
        grid = AlphaGrid(6, 0.0, 4 * np.pi)
        unit = TWO_PI / (4 * np.pi)
        assert abs(delta_sum(grid, 6 * unit) - 6) <= 1e-10

    def test_periodic_in_label(self, rng):
        grid = AlphaGrid(9, 0.3, 5.0)
        unit = TWO_PI / 5.0
        for delta in rng.integers(-20, 20, size=8):
            a = delta_sum(grid, float(delta) * unit)
            b = delta_sum(grid, float(delta + 9) * unit)
            assert abs(a - b) <= 1e-10

    def test_matches_geometric_oracle(self, rng):
        grid = AlphaGrid(11, -0.2, 7.0)
        unit = TWO_PI / 7.0
        for delta in rng.integers(-30, 30, size=10):
            oracle = geometric_phase_sum(int(delta), -0.2, unit, 11)
            assert abs(delta_sum(grid, float(delta) * unit) - oracle) <= 1e-10
