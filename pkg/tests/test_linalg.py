import numpy as np
import pytest

from paw import linalg


def random_ket(rng, dim):
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    kets = [random_ket(rng, dim) for _ in range(rank)]
    weights = rng.random(rank)
    weights /= weights.sum()
    return sum(w * np.outer(k, k.conj()) for w, k in zip(weights, kets))


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


class TestTensor:
    def test_basis_kets(self):
        out = linalg.tensor([1, 0], [0, 1])
        np.testing.assert_array_equal(out, [0, 1, 0, 0])

    def test_identity_operators(self):
        out = linalg.tensor(np.eye(2), np.eye(3))
        np.testing.assert_array_equal(out, np.eye(6))

    def test_hand_expansion(self):
        a = np.array([1, 1]) / np.sqrt(2)
        b = np.array([1, -1]) / np.sqrt(2)
        expected = np.array([1, -1, 1, -1]) / 2
        np.testing.assert_allclose(linalg.tensor(a, b), expected, atol=1e-15)

    def test_associativity(self, rng):
        for _ in range(10):
            a, b, c = (random_ket(rng, d) for d in (2, 3, 4))
            lhs = linalg.tensor(linalg.tensor(a, b), c)
            rhs = linalg.tensor(a, linalg.tensor(b, c))
            assert np.linalg.norm(lhs - rhs) <= 1e-12

    def test_mixed_kinds_rejected(self):
        with pytest.raises(ValueError, match="two kets or two operators"):
            linalg.tensor([1, 0], np.eye(2))

    def test_dimension_limit(self):
        big = np.ones(257)
        with pytest.raises(ValueError, match="exceeds limit"):
            linalg.tensor(np.kron(big, big), np.ones(2))


class TestPartialTrace:
    def test_product_state_factorizes(self, rng):
        for da, db in [(2, 2), (3, 4), (8, 2)]:
            rho_a = random_density(rng, da)
            rho_b = random_density(rng, db)
            joint = np.kron(rho_a, rho_b)
            np.testing.assert_allclose(linalg.partial_trace(joint, (da, db), "A"), rho_a, atol=1e-12)
            np.testing.assert_allclose(linalg.partial_trace(joint, (da, db), "B"), rho_b, atol=1e-12)

    def test_bell_state_marginal(self):
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        reduced = linalg.partial_trace(np.outer(bell, bell.conj()), (2, 2), "A")
        np.testing.assert_allclose(reduced, np.eye(2) / 2, atol=1e-15)

    def test_schmidt_spectra_agree(self, rng):
        psi = random_ket(rng, 6)
        rho = np.outer(psi, psi.conj())
        spec_a = np.linalg.eigvalsh(linalg.partial_trace(rho, (2, 3), "A"))
        spec_b = np.linalg.eigvalsh(linalg.partial_trace(rho, (2, 3), "B"))
        np.testing.assert_allclose(spec_a, spec_b[1:], atol=1e-12)

    def test_trace_preserved(self, rng):
        rho = random_density(rng, 6)
        reduced = linalg.partial_trace(rho, (2, 3), "B")
        assert abs(np.trace(reduced) - np.trace(rho)) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="does not factor"):
            linalg.partial_trace(np.eye(6), (2, 2), "A")


class TestHermitianEig:
    def test_already_diagonal(self):
        w, v = linalg.hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(w, [1, 2, 3], atol=1e-14)
        # permutation eigenvectors up to phase
        assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]], atol=1e-14)

    def test_known_two_level_spectrum(self):
        w, _ = linalg.hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
        np.testing.assert_allclose(w, [-1, 1], atol=1e-14)

    def test_reconstruction(self, rng):
        a = random_hermitian(rng, 8)
        w, v = linalg.hermitian_eig(a)
        scale = np.linalg.norm(a)
        assert np.linalg.norm(a @ v - v * w) <= 1e-10 * scale
        assert np.linalg.norm(v.conj().T @ v - np.eye(8)) <= 1e-10

    def test_two_by_two_characteristic_roots(self, rng):
        for _ in range(20):
            a = random_hermitian(rng, 2)
            tr = a[0, 0].real + a[1, 1].real
            det = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]).real
            disc = np.sqrt(tr**2 - 4 * det)
            roots = np.sort([(tr - disc) / 2, (tr + disc) / 2])
            w, _ = linalg.hermitian_eig(a)
            np.testing.assert_allclose(w, roots, atol=1e-10)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            linalg.hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestEvolveUnitary:
    def test_zero_time_is_identity(self, rng):
        h = random_hermitian(rng, 4)
        np.testing.assert_allclose(linalg.evolve_unitary(h, 0.0), np.eye(4), atol=1e-14)

    def test_full_period_of_diagonal_phase(self):
        omega = 1.7
        u = linalg.evolve_unitary(np.diag([0.0, omega]), 2 * np.pi / omega)
        np.testing.assert_allclose(u, np.eye(2), atol=1e-12)

    def test_half_period_phase(self):
        u = linalg.evolve_unitary(np.diag([0.0, np.pi]), 1.0)
        np.testing.assert_allclose(u, np.diag([1.0, -1.0]), atol=1e-12)

    def test_group_property(self, rng):
        h = random_hermitian(rng, 5)
        lhs = linalg.evolve_unitary(h, 0.3) @ linalg.evolve_unitary(h, 1.1)
        rhs = linalg.evolve_unitary(h, 1.4)
        assert np.linalg.norm(lhs - rhs) <= 1e-10

    def test_result_unitary(self, rng):
        h = random_hermitian(rng, 6)
        u = linalg.evolve_unitary(h, 2.5)
        assert np.linalg.norm(u.conj().T @ u - np.eye(6)) <= 1e-10


class TestVonNeumannEntropy:
    def test_pure_state(self, rng):
        psi = random_ket(rng, 4)
        assert linalg.von_neumann_entropy(np.outer(psi, psi.conj())) <= 1e-12

    def test_maximally_mixed_qubit(self):
        assert abs(linalg.von_neumann_entropy(np.eye(2) / 2) - np.log(2)) <= 1e-14

    def test_quarter_three_quarter(self):
        # -(1/4) ln(1/4) - (3/4) ln(3/4)
        expected = 0.5623351446188083
        assert abs(linalg.von_neumann_entropy(np.diag([0.25, 0.75])) - expected) <= 1e-14

    def test_range(self, rng):
        rho = random_density(rng, 5)
        s = linalg.von_neumann_entropy(rho)
        assert 0.0 <= s <= np.log(5) + 1e-12

    @pytest.mark.parametrize("bad", [
        np.diag([0.6, 0.6]),                       # trace != 1
        np.array([[0.5, 0.4], [0.1, 0.5]]),        # not Hermitian
        np.array([[1.2, 0.0], [0.0, -0.2]]),       # negative eigenvalue
    ])
    def test_invalid_density_rejected(self, bad):
        with pytest.raises(ValueError):
            linalg.von_neumann_entropy(bad)
