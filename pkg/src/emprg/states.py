"""Pure and mixed states of tensor-product systems, and their preparation."""
from dataclasses import dataclass, field

import numpy as np

from . import densemath as dm

NORM_TOL = 1e-10
GROUND_GAP_TOL = 1e-9


def _qubit_dims(n):
    L = int(round(np.log2(n))) if n > 0 else 0
    return (2,) * L if 2 ** L == n and L > 0 else (n,)


@dataclass
class PureState:
    """Normalised amplitude vector over factors of dimensions ``dims``."""

    amplitudes: np.ndarray
    dims: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        self.dims = tuple(int(d) for d in self.dims)
        if int(np.prod(self.dims)) != self.amplitudes.size:
            raise ValueError(f"dims {self.dims} do not match {self.amplitudes.size} amplitudes")
        norm = np.vdot(self.amplitudes, self.amplitudes).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {norm:.12g})")

    @classmethod
    def from_vector(cls, vec, dims=None, normalize=False, **meta):
        vec = np.asarray(vec, dtype=complex).ravel()
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(vec, dims if dims is not None else _qubit_dims(vec.size), dict(meta))

    @classmethod
    def product(cls, *vectors):
        """Tensor product of single-factor vectors (each normalised here)."""
        vecs = [np.asarray(v, dtype=complex) / np.linalg.norm(v) for v in vectors]
        return cls(dm.kron(*vecs), tuple(len(v) for v in vecs))

    def density_matrix(self):
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def as_matrix(self, split):
        """Amplitudes reshaped to a ``dim(A) x dim(B)`` matrix for a bipartition."""
        a, b = _check_split(split, len(self.dims))
        t = self.amplitudes.reshape(self.dims).transpose(list(a) + list(b))
        da = int(np.prod([self.dims[i] for i in a]))
        return t.reshape(da, -1)


@dataclass
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator over ``dims``."""

    matrix: np.ndarray
    dims: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        self.dims = tuple(int(d) for d in self.dims)
        n = int(np.prod(self.dims))
        if self.matrix.shape != (n, n):
            raise ValueError(f"dims {self.dims} do not match matrix of shape {self.matrix.shape}")
        dm.check_hermitian(self.matrix, NORM_TOL)
        tr = np.trace(self.matrix).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr:.12g}, not 1")
        # Cholesky of the shifted matrix succeeds iff no eigenvalue is below -NORM_TOL
        try:
            np.linalg.cholesky(self.matrix + NORM_TOL * np.eye(n))
        except np.linalg.LinAlgError:
            w = dm.hermitian_eig(self.matrix)[0]
            raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}") from None

    @classmethod
    def from_matrix(cls, m, dims=None, **meta):
        m = np.asarray(m, dtype=complex)
        return cls(m, dims if dims is not None else _qubit_dims(m.shape[0]), dict(meta))

    @classmethod
    def maximally_mixed(cls, dims):
        n = int(np.prod(dims))
        return cls(np.eye(n) / n, tuple(dims))

    def eigenvalues(self):
        return dm.hermitian_eig(self.matrix)[0]


def _check_split(split, n):
    a, b = (tuple(sorted(part)) for part in split)
    if not a or not b:
        raise ValueError("both sides of a bipartition must be non-empty")
    if sorted(a + b) != list(range(n)):
        raise ValueError(f"split {split} is not a bipartition of {n} factors")
    return a, b


def ground_state(h, dims=None):
    """Lowest eigenvector of ``h``.

    ``meta`` records the energy, the gap to the next level and whether the
    ground space is degenerate (gap below ``GROUND_GAP_TOL``).
    """
    w, v = dm.hermitian_eig(h)
    gap = float(w[1] - w[0]) if len(w) > 1 else np.inf
    vec = v[:, 0]
    # fix the global phase: largest component real positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    return PureState.from_vector(
        vec,
        dims if dims is not None else _qubit_dims(len(w)),
        energy=float(w[0]),
        gap=gap,
        degenerate=bool(gap < GROUND_GAP_TOL),
    )


def thermal_state(h, kT, dims=None):
    """Gibbs state ``exp(-h/kT) / Z``; ``kT = 0`` gives the uniform mixture
    over the ground space."""
    if kT < 0:
        raise ValueError(f"temperature must be non-negative, got {kT}")
    w, v = dm.hermitian_eig(h)
    if kT == 0:
        weights = (w - w[0] < GROUND_GAP_TOL).astype(float)
    else:
        # shift by the ground energy so every exponent is <= 0
        weights = np.exp(-(w - w[0]) / kT)
    weights /= weights.sum()
    rho = (v * weights) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix.from_matrix(
        rho, dims if dims is not None else _qubit_dims(len(w)), kT=float(kT), populations=weights
    )


def reduce(state, keep):
    """Reduced density matrix on the factors in ``keep`` (ascending order)."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one factor")
    if isinstance(state, PureState):
        n = len(state.dims)
        if any(k < 0 or k >= n for k in keep):
            raise ValueError(f"keep {keep} out of range for {n} factors")
        rest = [i for i in range(n) if i not in keep]
        if not rest:
            return state.density_matrix()
        m = state.as_matrix((keep, rest))
        rho = m @ m.conj().T
        dims = tuple(state.dims[i] for i in keep)
    else:
        rho = dm.partial_trace_factors(state.matrix, state.dims, keep)
        dims = tuple(state.dims[i] for i in keep)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, dims)
