"""Entanglement and distinguishability measures.

All entropies are in bits (ebits for entanglement measures).  Eigenvalues
below ``ZERO_TOL`` are treated as zero before taking logs or square roots.
"""
from dataclasses import dataclass

import numpy as np

from . import densemath as dm
from .states import DensityMatrix, PureState, _check_split, reduce

ZERO_TOL = 1e-12

# sigma_y (x) sigma_y, used for the spin flip
_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass
class SchmidtDecomposition:
    """``psi = sum_a sqrt(p_a) u_a (x) v_a`` with ``p`` descending."""

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self):
        return len(self.coefficients)

    def reconstruct(self):
        """The state as a ``dim(A) x dim(B)`` amplitude matrix."""
        return (self.basis_a * np.sqrt(self.coefficients)) @ self.basis_b.T


def _as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    if isinstance(rho, PureState):
        return rho.density_matrix().matrix
    return np.asarray(rho)


def schmidt_decompose(psi, split):
    """Schmidt decomposition of a pure state across ``split = (A, B)``.

    ``A`` and ``B`` are collections of factor indices.  Coefficients below
    ``ZERO_TOL`` are dropped.
    """
    if not isinstance(psi, PureState):
        raise TypeError("schmidt_decompose expects a PureState")
    _check_split(split, len(psi.dims))
    u, s, v = dm.svd(psi.as_matrix(split))
    p = s ** 2
    keep = p > ZERO_TOL
    # v columns span B; Schmidt vectors pair u_a with conj(v_a)
    return SchmidtDecomposition(p[keep] / p[keep].sum(), u[:, keep], v[:, keep].conj())


def probability_entropy(p):
    """Shannon entropy in bits of a probability vector."""
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_TOL]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho):
    """``-tr rho log2 rho``."""
    m = _as_matrix(rho)
    return probability_entropy(dm.hermitian_eig(m)[0])


def binary_entropy(x):
    if x <= ZERO_TOL or x >= 1.0 - ZERO_TOL:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def _two_qubit(rho):
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-qubit measure needs a 4x4 state, got {m.shape}")
    if isinstance(rho, DensityMatrix) and rho.dims not in ((2, 2), (4,)):
        raise ValueError(f"state dims {rho.dims} are not two qubits")
    return m


def concurrence(rho):
    """Wootters concurrence of a two-qubit state.

    The ``lambda_i`` are the square roots of the eigenvalues of
    ``sqrt(rho) rho~ sqrt(rho)`` with ``rho~ = (Y x Y) rho* (Y x Y)``; that
    Hermitian form has the same spectrum as ``rho rho~``.
    """
    m = _two_qubit(rho)
    sq = dm.matrix_function(m, "sqrt")
    flipped = _YY @ m.conj() @ _YY
    r = sq @ flipped @ sq
    r = 0.5 * (r + r.conj().T)
    mu = dm.hermitian_eig(r)[0]
    lam = np.sqrt(np.where(mu > ZERO_TOL, mu, 0.0))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def eof_from_concurrence(c):
    """Entanglement of formation (ebits) as a function of concurrence."""
    c = min(1.0, max(0.0, float(c)))
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c * c)))


def eof_two_qubits(rho):
    """Entanglement of formation of a two-qubit state via Wootters' formula."""
    return eof_from_concurrence(concurrence(rho))


def fidelity(rho1, rho2):
    """``(tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2``."""
    a, b = _as_matrix(rho1), _as_matrix(rho2)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sa = dm.matrix_function(a, "sqrt")
    inner = sa @ b @ sa
    inner = 0.5 * (inner + inner.conj().T)
    mu = dm.hermitian_eig(inner)[0]
    f = np.sum(np.sqrt(np.where(mu > ZERO_TOL, mu, 0.0))) ** 2
    return float(min(1.0, f))


def eof_lower_bound(rho_ab, split):
    """Entropic lower bound on entanglement of formation.

    ``max(0, S(A) - S(AB), S(B) - S(AB))`` in ebits, for ``split = (A, B)``
    factor sets of ``rho_ab``.
    """
    if isinstance(rho_ab, PureState):
        rho_ab = rho_ab.density_matrix()
    a, b = _check_split(split, len(rho_ab.dims))
    s_ab = von_neumann_entropy(rho_ab)
    s_a = von_neumann_entropy(reduce(rho_ab, a))
    s_b = von_neumann_entropy(reduce(rho_ab, b))
    return max(0.0, s_a - s_ab, s_b - s_ab)
