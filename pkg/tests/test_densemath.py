import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import random_hermitian
from emprg import densemath as dm
from emprg.errors import NotHermitianError


def charpoly_faddeev(a):
    """Characteristic polynomial coefficients by the Faddeev-LeVerrier recursion."""
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.real(np.array(coeffs))


def roots_by_bisection(coeffs, lo, hi, n, grid=4000):
    """Real roots of a polynomial with ``n`` real roots in ``[lo, hi]``."""
    xs = np.linspace(lo, hi, grid)
    ys = np.polyval(coeffs, xs)
    roots = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], ys[:-1], ys[1:]):
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0:
            for _ in range(200):
                mid = 0.5 * (a + b)
                fm = np.polyval(coeffs, mid)
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    assert len(roots) == n
    return np.array(roots)


def taylor_exp(a, terms=80):
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


class TestHermitianEig:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
    def test_eigenvalues_match_characteristic_polynomial(self, rng, n):
        a = random_hermitian(rng, n)
        w, _ = dm.hermitian_eig(a)
        bound = np.abs(a).sum(axis=1).max() + 1.0
        expected = roots_by_bisection(charpoly_faddeev(a), -bound, bound, n)
        assert_allclose(w, np.sort(expected), atol=1e-9)

    @pytest.mark.parametrize("n", [4, 16, 40, 80])
    def test_decomposition(self, rng, n):
        a = random_hermitian(rng, n)
        w, v = dm.hermitian_eig(a)
        assert np.all(np.diff(w) >= -1e-12)
        assert_allclose(a @ v, v * w, atol=1e-10 * n)
        assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12 * n)

    def test_real_input_gives_real_vectors(self, rng):
        a = random_hermitian(rng, 6, real=True)
        w, v = dm.hermitian_eig(a)
        assert np.isrealobj(v)
        assert_allclose(a @ v, v * w, atol=1e-12)

    def test_degenerate_order_is_reproducible(self):
        a = np.diag([2.0, 1.0, 1.0, 1.0, 0.0]).astype(complex)
        w1, v1 = dm.hermitian_eig(a)
        w2, v2 = dm.hermitian_eig(a.copy())
        assert_allclose(w1, [0, 1, 1, 1, 2])
        assert np.array_equal(v1, v2)
        # tied eigenvalues keep the solver's column order
        assert_allclose(np.abs(v1[:, 1:4]), np.eye(5)[:, 1:4])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            dm.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            dm.check_hermitian(np.zeros((2, 3)))

    def test_tolerance_is_relative_to_scale(self):
        a = np.array([[1e6, 1e-5], [0.0, 1e6]])
        dm.check_hermitian(a)
        with pytest.raises(NotHermitianError):
            dm.check_hermitian(np.array([[1.0, 1e-8], [0.0, 1.0]]))


class TestTopEigvecs:
    def test_descending_and_tie_flag(self):
        vals, vecs, tie = dm.top_eigvecs(np.diag([0.1, 0.3, 0.3, 0.3]), 2)
        assert_allclose(vals, [0.3, 0.3])
        assert tie
        _, _, tie = dm.top_eigvecs(np.diag([0.1, 0.2, 0.3, 0.4]), 2)
        assert not tie

    def test_vectors(self, rng):
        a = random_hermitian(rng, 7)
        vals, vecs, _ = dm.top_eigvecs(a, 3)
        assert_allclose(vals, np.linalg.eigvalsh(a)[::-1][:3], atol=1e-12)
        assert_allclose(a @ vecs, vecs * vals, atol=1e-10)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            dm.top_eigvecs(np.eye(3), 4)


class TestSvd:
    def test_reconstruction(self, rng):
        m = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        u, s, v = dm.svd(m)
        assert_allclose((u * s) @ v.conj().T, m, atol=1e-12)
        assert np.all(np.diff(s) <= 0)


class TestPartialTrace:
    @staticmethod
    def loop_trace(rho, da, db, keep):
        out = np.zeros((da, da) if keep == "A" else (db, db), dtype=complex)
        for i in range(da):
            for k in range(da):
                for j in range(db):
                    for l in range(db):
                        val = rho[i * db + j, k * db + l]
                        if keep == "A" and j == l:
                            out[i, k] += val
                        if keep == "B" and i == k:
                            out[j, l] += val
        return out

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (4, 2)])
    @pytest.mark.parametrize("keep", ["A", "B"])
    def test_against_index_loops(self, rng, dims, keep):
        n = dims[0] * dims[1]
        rho = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        assert_allclose(dm.partial_trace(rho, dims, keep), self.loop_trace(rho, *dims, keep), atol=1e-12)

    def test_factors_matches_bipartite(self, rng):
        rho = random_hermitian(rng, 24)
        assert_allclose(
            dm.partial_trace_factors(rho, (2, 3, 4), [0, 1]),
            dm.partial_trace(rho, (6, 4), "A"),
            atol=1e-12,
        )
        assert_allclose(
            dm.partial_trace_factors(rho, (2, 3, 4), [2]),
            dm.partial_trace(rho, (6, 4), "B"),
            atol=1e-12,
        )

    def test_product_operator(self, rng):
        a, b, c = (random_hermitian(rng, d) for d in (2, 3, 2))
        rho = dm.kron(a, b, c)
        assert_allclose(dm.partial_trace_factors(rho, (2, 3, 2), [0, 2]), np.trace(b) * np.kron(a, c), atol=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            dm.partial_trace(np.eye(4), (2, 3), "A")
        with pytest.raises(ValueError):
            dm.partial_trace(np.eye(4), (2, 2), "C")
        with pytest.raises(ValueError):
            dm.partial_trace_factors(np.eye(4), (2, 2), [2])


class TestKron:
    def test_index_formula(self, rng):
        a = rng.standard_normal((2, 3))
        b = rng.standard_normal((3, 2))
        k = dm.kron(a, b)
        for i in range(2):
            for j in range(3):
                for p in range(3):
                    for q in range(2):
                        assert k[i * 3 + p, j * 2 + q] == a[i, j] * b[p, q]

    def test_single_argument(self):
        assert_allclose(dm.kron(np.eye(2)), np.eye(2))


class TestMatrixFunction:
    def test_exp_matches_taylor(self, rng):
        a = 0.5 * random_hermitian(rng, 4)
        assert_allclose(dm.matrix_function(a, "exp"), taylor_exp(a), atol=1e-12)

    def test_sqrt_squares_back(self, rng):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        p = g @ g.conj().T
        r = dm.matrix_function(p, "sqrt")
        assert_allclose(r @ r, p, atol=1e-10)

    def test_tiny_negative_eigenvalues_are_clipped(self):
        m = np.diag([1.0, -1e-12])
        assert_allclose(dm.matrix_function(m, "sqrt"), np.diag([1.0, 0.0]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            dm.matrix_function(np.diag([1.0, -1e-6]), "sqrt")
        with pytest.raises(ValueError):
            dm.matrix_function(np.diag([1.0, 0.0]), "log")
        with pytest.raises(ValueError):
            dm.matrix_function(np.eye(2), "tan")

    def test_callable(self):
        assert_allclose(dm.matrix_function(np.diag([1.0, 2.0]), lambda w: w ** 3), np.diag([1.0, 8.0]))


hermitian_sizes = st.integers(min_value=1, max_value=12)


@settings(max_examples=40, deadline=None)
@given(n=hermitian_sizes, seed=st.integers(0, 2**32 - 1))
def test_eig_residual_property(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    w, v = dm.hermitian_eig(a)
    assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-10)
    assert_allclose(w.sum(), np.trace(a).real, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    da=st.integers(1, 4),
    db=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_partial_trace_preserves_trace(da, db, seed):
    a = random_hermitian(np.random.default_rng(seed), da * db)
    for keep in "AB":
        assert_allclose(np.trace(dm.partial_trace(a, (da, db), keep)), np.trace(a), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = (rng.standard_normal((2, 2)) for _ in range(4))
    assert_allclose(dm.kron(a, b) @ dm.kron(c, d), dm.kron(a @ c, b @ d), atol=1e-12)
