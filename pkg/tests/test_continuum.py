import numpy as np
import pytest

import paw
from paw import ContinuumProbe, SystemSpec, phi_alpha, quadrature_identity, schrodinger_residual
from paw.povm import spectrum_from_labels


@pytest.fixture
def qubit_system():
    return SystemSpec.from_energies([0.0, 1.0], np.array([1, 1]) / np.sqrt(2))


class TestQuadratureIdentity:
    def test_equally_spaced(self):
        probe = ContinuumProbe(paw.rationalize([0.0, 1.0, 2.0], 16), nodes=16)
        assert quadrature_identity(probe) <= 1e-12

    def test_single_level_constant_integrand(self):
        probe = ContinuumProbe(spectrum_from_labels(0.7, [0], 1.0), nodes=2)
        assert quadrature_identity(probe) <= 1e-14

    @pytest.mark.parametrize("nodes", [12, 13, 17, 24, 40])
    def test_above_bandwidth_threshold(self, nodes):
        spec = paw.rationalize([0.0, 1.0, 2.5], 64)
        assert quadrature_identity(ContinuumProbe(spec, nodes=nodes)) <= 1e-12

    def test_below_bound_rejected(self):
        spec = paw.rationalize([0.0, 1.0, 2.5], 64)
        with pytest.raises(ValueError, match="bound"):
            ContinuumProbe(spec, nodes=11)

    def test_nonzero_origin(self):
        spec = paw.rationalize([0.0, 0.5, 1.75], 64)
        assert quadrature_identity(ContinuumProbe(spec, nodes=16, alpha0=0.9)) <= 1e-12


class TestPhiAlpha:
    def test_zero_reading(self, qubit_system):
        np.testing.assert_allclose(phi_alpha(qubit_system, 0.0),
                                   np.array([1, 1]) / np.sqrt(2), atol=1e-15)

    def test_full_period_global_phase(self):
        system = SystemSpec.from_energies([0.3, 1.3, 2.3],
                                          np.array([1, 1, 1]) / np.sqrt(3))
        period = 2 * np.pi  # unit gaps
        back = phi_alpha(system, period)
        aligned = back * np.exp(1j * 0.3 * period)
        np.testing.assert_allclose(aligned, phi_alpha(system, 0.0), atol=1e-12)

    def test_half_period_qubit(self, qubit_system):
        phi = phi_alpha(qubit_system, np.pi)
        expected = np.array([1, -1]) / np.sqrt(2)
        np.testing.assert_allclose(phi, expected, atol=1e-12)

    def test_normalized(self, qubit_system):
        assert abs(np.linalg.norm(phi_alpha(qubit_system, 2.31)) - 1.0) <= 1e-12

    def test_matches_relative_state_on_grid(self):
        system = SystemSpec.from_energies([0.0, 1.0, 2.5], np.array([1, 1, 1]) / np.sqrt(3))
        universe = paw.solve_constraint(system, "povm")
        basis = paw.time_basis(universe)
        for m in (0, 9, 30):
            np.testing.assert_allclose(paw.relative_state(universe, basis, m),
                                       phi_alpha(system, basis.grid[m]), atol=1e-10)

    @pytest.mark.parametrize("n_states", [48, 96, 192])
    def test_agreement_stable_as_grid_densifies(self, n_states):
        system = SystemSpec.from_energies([0.0, 1.0, 2.5], np.array([1, 1, 1]) / np.sqrt(3))
        universe = paw.solve_constraint(system, "povm")
        basis = paw.time_basis(universe, n_states)
        worst = max(np.linalg.norm(paw.relative_state(universe, basis, m)
                                   - phi_alpha(system, basis.grid[m]))
                    for m in range(n_states))
        assert worst <= 1e-10


class TestSchrodingerResidual:
    def test_second_order_halving(self, qubit_system):
        residuals = [schrodinger_residual(qubit_system, 0.3, h)
                     for h in (0.02, 0.01, 0.005)]
        for coarse, fine in zip(residuals, residuals[1:]):
            assert 3.5 <= coarse / fine <= 4.5

    def test_single_eigenstate_analytic_constant(self):
        # phi(a) = exp(-i E a)|E>; defect is |E - sin(E h)/h| = |E|^3 h^2/6 + O(h^4)
        energy = 2.0
        system = SystemSpec.from_energies([energy], [1.0])
        h = 1e-3
        measured = schrodinger_residual(system, 0.4, h)
        analytic = abs(energy - np.sin(energy * h) / h)
        assert abs(measured - analytic) <= 1e-12 * energy
        assert abs(measured - energy**3 * h**2 / 6) <= 1e-2 * measured

    def test_rounding_floor(self, qubit_system):
        # below h ~ 1e-6 rounding dominates and the defect stops improving
        assert (schrodinger_residual(qubit_system, 0.3, 1e-10)
                > schrodinger_residual(qubit_system, 0.3, 1e-4))

    def test_nonpositive_step_rejected(self, qubit_system):
        with pytest.raises(ValueError, match="positive"):
            schrodinger_residual(qubit_system, 0.3, 0.0)
