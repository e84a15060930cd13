import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_density_matrix, random_state_vector
from emprg import entangle
from emprg.states import DensityMatrix, PureState, reduce

BELL = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
SINGLET = PureState(np.array([0, 1, -1, 0]) / np.sqrt(2), (2, 2))


def werner(p):
    return DensityMatrix(p * SINGLET.density_matrix().matrix + (1 - p) * np.eye(4) / 4, (2, 2))


def concurrence_nonhermitian(rho):
    """Square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``."""
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    ev = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


class TestSchmidt:
    def test_reconstruction(self, rng):
        psi = PureState(random_state_vector(rng, 24), (2, 3, 4))
        split = ((0, 2), (1,))
        sd = entangle.schmidt_decompose(psi, split)
        assert sd.rank == 3
        assert_allclose(sd.coefficients.sum(), 1.0)
        assert np.all(np.diff(sd.coefficients) <= 0)
        assert_allclose(sd.reconstruct(), psi.as_matrix(split), atol=1e-12)

    def test_product_state_rank_one(self, rng):
        psi = PureState.product(random_state_vector(rng, 3), random_state_vector(rng, 2))
        sd = entangle.schmidt_decompose(psi, ((0,), (1,)))
        assert sd.rank == 1

    def test_coefficients_are_reduced_spectrum(self, rng):
        psi = PureState(random_state_vector(rng, 16), (2, 2, 2, 2))
        sd = entangle.schmidt_decompose(psi, ((0, 1), (2, 3)))
        w = np.sort(np.linalg.eigvalsh(reduce(psi, [0, 1]).matrix))[::-1]
        assert_allclose(sd.coefficients, w, atol=1e-12)

    def test_type(self):
        with pytest.raises(TypeError):
            entangle.schmidt_decompose(np.ones(4) / 2, ((0,), (1,)))


class TestEntropy:
    def test_bell(self):
        assert_allclose(entangle.von_neumann_entropy(reduce(BELL, [0])), 1.0, atol=1e-12)

    def test_maximally_mixed(self):
        assert_allclose(entangle.von_neumann_entropy(DensityMatrix.maximally_mixed((2, 2, 2))), 3.0)

    def test_pure_state_zero(self, rng):
        psi = PureState(random_state_vector(rng, 8), (2, 2, 2))
        assert abs(entangle.von_neumann_entropy(psi)) < 1e-10

    def test_probability_entropy(self):
        assert_allclose(entangle.probability_entropy([0.5, 0.25, 0.25, 0.0]), 1.5)

    def test_binary_entropy(self):
        assert entangle.binary_entropy(0.0) == 0.0
        assert entangle.binary_entropy(1.0) == 0.0
        assert_allclose(entangle.binary_entropy(0.5), 1.0)
        assert_allclose(entangle.binary_entropy(0.11), entangle.binary_entropy(0.89))


class TestConcurrence:
    def test_bell_and_singlet(self):
        assert_allclose(entangle.concurrence(BELL), 1.0, atol=1e-10)
        assert_allclose(entangle.concurrence(SINGLET.density_matrix()), 1.0, atol=1e-10)

    @pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
    def test_werner(self, p):
        assert_allclose(entangle.concurrence(werner(p)), max(0.0, (3 * p - 1) / 2), atol=1e-9)

    def test_product_state(self, rng):
        psi = PureState.product(random_state_vector(rng, 2), random_state_vector(rng, 2))
        assert entangle.concurrence(psi) < 1e-7

    def test_pure_state_formula(self, rng):
        for _ in range(10):
            a = random_state_vector(rng, 4)
            expected = 2 * abs(a[0] * a[3] - a[1] * a[2])
            assert_allclose(entangle.concurrence(PureState(a, (2, 2))), expected, atol=1e-7)

    def test_against_nonhermitian_form(self, rng):
        for rank in (1, 2, 4):
            rho = random_density_matrix(rng, 4, rank)
            assert_allclose(
                entangle.concurrence(DensityMatrix(rho, (2, 2))), concurrence_nonhermitian(rho), atol=1e-6
            )

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            entangle.concurrence(np.eye(8) / 8)
        with pytest.raises(ValueError):
            entangle.concurrence(DensityMatrix(np.eye(4) / 4, (1, 4)))


class TestEof:
    def test_endpoints(self):
        assert entangle.eof_from_concurrence(0.0) == 0.0
        assert_allclose(entangle.eof_from_concurrence(1.0), 1.0)
        assert entangle.eof_from_concurrence(-0.1) == 0.0

    def test_monotone(self):
        cs = np.linspace(0, 1, 50)
        e = [entangle.eof_from_concurrence(c) for c in cs]
        assert np.all(np.diff(e) >= 0)

    def test_pure_states_equal_entropy(self, rng):
        for _ in range(20):
            psi = PureState(random_state_vector(rng, 4), (2, 2))
            assert_allclose(
                entangle.eof_two_qubits(psi), entangle.von_neumann_entropy(reduce(psi, [0])), atol=1e-8
            )

    def test_werner_separable(self):
        assert entangle.eof_two_qubits(werner(0.3)) == 0.0


class TestFidelity:
    def test_identical(self, rng):
        rho = random_density_matrix(rng, 4)
        assert_allclose(entangle.fidelity(rho, rho), 1.0, atol=1e-8)

    def test_pure_overlap(self, rng):
        a, b = random_state_vector(rng, 3), random_state_vector(rng, 3)
        f = entangle.fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
        assert_allclose(f, abs(np.vdot(a, b)) ** 2, atol=1e-8)

    def test_orthogonal(self):
        assert entangle.fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            entangle.fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestLowerBound:
    def test_pure_state(self, rng):
        psi = PureState(random_state_vector(rng, 16), (2, 2, 2, 2))
        split = ((0, 1), (2, 3))
        assert_allclose(
            entangle.eof_lower_bound(psi, split),
            entangle.von_neumann_entropy(reduce(psi, [0, 1])),
            atol=1e-9,
        )

    def test_mixed_is_zero(self):
        assert entangle.eof_lower_bound(DensityMatrix.maximally_mixed((2, 2)), ((0,), (1,))) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_two_qubit_measures_bounded(seed, rank):
    rho = DensityMatrix(random_density_matrix(np.random.default_rng(seed), 4, rank), (2, 2))
    c = entangle.concurrence(rho)
    e = entangle.eof_two_qubits(rho)
    assert 0.0 <= c <= 1.0
    assert 0.0 <= e <= 1.0
    # the entropic bound never exceeds entanglement of formation
    assert entangle.eof_lower_bound(rho, ((0,), (1,))) <= e + 1e-7


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_local_unitaries_preserve_concurrence(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(rng, 4, 2)
    ua = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))[0]
    ub = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))[0]
    u = np.kron(ua, ub)
    rotated = u @ rho @ u.conj().T
    assert_allclose(
        entangle.concurrence(DensityMatrix(rho, (2, 2))),
        entangle.concurrence(DensityMatrix(rotated, (2, 2))),
        atol=1e-6,
    )
