import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_density_matrix, random_state_vector
from emprg.errors import NotHermitianError
from emprg.lattice import ModelSpec, build_hamiltonian
from emprg.states import DensityMatrix, PureState, ground_state, reduce, thermal_state


class TestPureState:
    def test_normalisation_checked(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]), (2,))
        psi = PureState.from_vector([1.0, 1.0], normalize=True)
        assert psi.dims == (2,)

    def test_dims_checked(self):
        with pytest.raises(ValueError):
            PureState(np.eye(8)[0], (2, 2))

    def test_product(self):
        psi = PureState.product([1, 0], [1, 1])
        assert psi.dims == (2, 2)
        assert_allclose(psi.amplitudes, np.array([1, 1, 0, 0]) / np.sqrt(2))

    def test_default_dims(self):
        assert PureState.from_vector(np.eye(8)[3]).dims == (2, 2, 2)
        assert PureState.from_vector(np.eye(6)[0]).dims == (6,)

    def test_as_matrix_reorders(self, rng):
        psi = PureState(random_state_vector(rng, 24), (2, 3, 4))
        t = psi.amplitudes.reshape(2, 3, 4)
        assert_allclose(psi.as_matrix(((1,), (0, 2))), t.transpose(1, 0, 2).reshape(3, 8))

    def test_split_validation(self, rng):
        psi = PureState(random_state_vector(rng, 8), (2, 2, 2))
        with pytest.raises(ValueError):
            psi.as_matrix(((0,), (1,)))
        with pytest.raises(ValueError):
            psi.as_matrix(((), (0, 1, 2)))


class TestDensityMatrix:
    def test_validation(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(2), (2,))
        with pytest.raises(NotHermitianError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]), (2,))
        with pytest.raises(ValueError, match="negative"):
            DensityMatrix(np.diag([1.5, -0.5]), (2,))
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4) / 4, (2, 3))

    def test_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed((2, 3))
        assert_allclose(rho.eigenvalues(), np.full(6, 1 / 6))


class TestGroundState:
    def test_energy_and_eigenvector(self):
        h = build_hamiltonian(ModelSpec(sites=4))
        psi = ground_state(h)
        assert_allclose(psi.meta["energy"], np.linalg.eigvalsh(h)[0], atol=1e-12)
        assert_allclose(h @ psi.amplitudes, psi.meta["energy"] * psi.amplitudes, atol=1e-10)
        assert not psi.meta["degenerate"]
        assert psi.dims == (2, 2, 2, 2)

    def test_degenerate_flag(self):
        # odd-length Heisenberg chains have a Kramers doublet
        psi = ground_state(build_hamiltonian(ModelSpec(sites=3)))
        assert psi.meta["degenerate"]

    def test_phase_fixed(self):
        h = build_hamiltonian(ModelSpec(sites=4))
        a = ground_state(h).amplitudes
        k = np.argmax(np.abs(a))
        assert a[k].real > 0 and abs(a[k].imag) < 1e-15


class TestThermalState:
    h = build_hamiltonian(ModelSpec(sites=4))

    def test_boltzmann_populations(self):
        kT = 0.7
        rho = thermal_state(self.h, kT)
        w = np.linalg.eigvalsh(self.h)
        p = np.exp(-w / kT)
        p /= p.sum()
        assert_allclose(np.sort(rho.eigenvalues()), np.sort(p), atol=1e-12)
        energy = np.trace(rho.matrix @ self.h).real
        assert_allclose(energy, np.dot(p, w), atol=1e-12)

    def test_zero_temperature_limit(self):
        rho0 = thermal_state(self.h, 0.0)
        psi = ground_state(self.h)
        assert_allclose(rho0.matrix, psi.density_matrix().matrix, atol=1e-12)
        assert_allclose(thermal_state(self.h, 1e-3).matrix, rho0.matrix, atol=1e-10)

    def test_zero_temperature_degenerate_mixture(self):
        h = np.diag([0.0, 0.0, 1.0])
        assert_allclose(thermal_state(h, 0.0).matrix, np.diag([0.5, 0.5, 0.0]))

    def test_high_temperature_limit(self):
        rho = thermal_state(self.h, 1e6)
        assert_allclose(rho.matrix, np.eye(16) / 16, atol=1e-6)

    def test_no_overflow_at_tiny_temperature(self):
        rho = thermal_state(100 * self.h, 1e-4)
        assert np.all(np.isfinite(rho.matrix))

    def test_negative_temperature(self):
        with pytest.raises(ValueError):
            thermal_state(self.h, -0.1)


class TestReduce:
    def test_pure_matches_mixed(self, rng):
        psi = PureState(random_state_vector(rng, 12), (2, 3, 2))
        for keep in ([0], [1, 2], [0, 2]):
            assert_allclose(reduce(psi, keep).matrix, reduce(psi.density_matrix(), keep).matrix, atol=1e-12)

    def test_dims_and_full_keep(self, rng):
        psi = PureState(random_state_vector(rng, 12), (2, 3, 2))
        assert reduce(psi, [2, 1]).dims == (3, 2)
        assert_allclose(reduce(psi, [0, 1, 2]).matrix, psi.density_matrix().matrix)

    def test_errors(self, rng):
        psi = PureState(random_state_vector(rng, 4), (2, 2))
        with pytest.raises(ValueError):
            reduce(psi, [])
        with pytest.raises(ValueError):
            reduce(psi, [5])


@settings(max_examples=30, deadline=None)
@given(kT=st.floats(0.01, 50.0), sites=st.integers(2, 5))
def test_thermal_state_is_valid(kT, sites):
    rho = thermal_state(build_hamiltonian(ModelSpec(sites=sites)), kT)
    w = rho.eigenvalues()
    assert w.min() > -1e-12
    assert_allclose(w.sum(), 1.0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_reduced_states_are_density_matrices(seed):
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(random_density_matrix(rng, 8), (2, 2, 2))
    for keep in ([0], [1], [0, 2]):
        r = reduce(rho, keep)
        assert_allclose(np.trace(r.matrix).real, 1.0, atol=1e-12)
        assert r.eigenvalues().min() > -1e-12
