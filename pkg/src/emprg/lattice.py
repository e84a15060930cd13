"""Spin-1/2 chain models, site operators and connected correlators.

Conventions
-----------
* Pauli matrices with ``sigma_z = diag(1, -1)``; basis state ``|0>`` is spin up.
* Site 0 is the most significant tensor factor, so the computational index of a
  basis state has the bit of site ``i`` at position ``L - 1 - i``.
* Heisenberg: ``H = J/2 * sum_<ij> sigma_i . sigma_j``.
* Transverse Ising: ``H = -J * sum_<ij> sz_i sz_j - h * sum_i sx_i``
  (critical at ``h = J``).
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

MAX_SITES = 14
KINDS = ("heisenberg", "transverse_ising")
BOUNDARIES = ("open", "periodic")

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}


@dataclass(frozen=True)
class ModelSpec:
    """Descriptor of a 1D spin-1/2 lattice model."""

    kind: str = "heisenberg"
    sites: int = 4
    coupling: float = 1.0
    field: float = 0.0
    boundary: str = "open"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}; choose from {KINDS}")
        if self.boundary not in BOUNDARIES:
            raise ConfigError(f"unknown boundary {self.boundary!r}; choose from {BOUNDARIES}")
        if int(self.sites) != self.sites or self.sites < 2:
            raise ConfigError(f"need at least 2 sites, got {self.sites}")
        if self.sites > MAX_SITES:
            raise ConfigError(f"{self.sites} sites exceeds the dense limit of {MAX_SITES}")
        if self.kind == "transverse_ising" and self.field < 0:
            raise ConfigError("transverse field must be non-negative")

    @property
    def dim(self):
        return 2 ** self.sites


def bonds(spec):
    """Nearest-neighbour bonds ``(i, j)`` of the chain."""
    out = [(i, i + 1) for i in range(spec.sites - 1)]
    if spec.boundary == "periodic" and spec.sites > 2:
        out.append((spec.sites - 1, 0))
    return out


def _bits(L):
    idx = np.arange(2 ** L)
    return idx, [(idx >> (L - 1 - i)) & 1 for i in range(L)]


def build_hamiltonian(spec):
    """Dense Hamiltonian of ``spec`` as a real ``2^L x 2^L`` array.

    Both models are real in the computational basis (``sy sy`` is real), so
    the matrix is returned with a float dtype.
    """
    if not isinstance(spec, ModelSpec):
        raise TypeError("build_hamiltonian expects a ModelSpec")
    L = spec.sites
    dim = 2 ** L
    idx, bit = _bits(L)
    h = np.zeros((dim, dim))
    diag = np.zeros(dim)
    J = float(spec.coupling)
    if spec.kind == "heisenberg":
        for i, j in bonds(spec):
            same = bit[i] == bit[j]
            diag += 0.5 * J * np.where(same, 1.0, -1.0)
            # sx sx + sy sy flips an anti-aligned pair with amplitude 2
            src = idx[~same]
            dst = src ^ ((1 << (L - 1 - i)) | (1 << (L - 1 - j)))
            h[dst, src] += J
    else:
        hx = float(spec.field)
        for i, j in bonds(spec):
            diag -= J * np.where(bit[i] == bit[j], 1.0, -1.0)
        for i in range(L):
            h[idx ^ (1 << (L - 1 - i)), idx] -= hx
    h[idx, idx] += diag
    return h


def site_operator(L, i, axis):
    """``I x ... x sigma^axis x ... x I`` with the Pauli matrix at site ``i``."""
    if not 0 <= i < L:
        raise ValueError(f"site {i} out of range for {L} sites")
    op = PAULI[axis]
    return np.kron(np.kron(np.eye(2 ** i), op), np.eye(2 ** (L - i - 1)))


def _state_matrix(state):
    # accepts PureState / DensityMatrix / raw arrays
    from .states import DensityMatrix, PureState

    if isinstance(state, PureState):
        return state.dims, state.amplitudes, None
    if isinstance(state, DensityMatrix):
        return state.dims, None, state.matrix
    arr = np.asarray(state)
    n = arr.shape[0]
    L = int(round(np.log2(n)))
    if 2 ** L != n:
        raise ValueError("raw state must live on qubits")
    if arr.ndim == 1:
        return (2,) * L, arr, None
    return (2,) * L, None, arr


def connected_correlator(state, i, alpha, j, beta):
    """``<s_i^alpha s_j^beta> - <s_i^alpha><s_j^beta>`` for a pure or mixed state.

    Evaluated on the two-site reduced density matrix, so the full-size
    operators are never formed.
    """
    from .densemath import partial_trace_factors

    dims, psi, rho = _state_matrix(state)
    n = len(dims)
    if i == j:
        raise ValueError("connected correlator needs two distinct sites")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"sites ({i}, {j}) out of range for {n} sites")
    if any(dims[k] != 2 for k in (i, j)):
        raise ValueError("correlator sites must be qubits")
    if psi is not None:
        t = np.moveaxis(psi.reshape(dims), (i, j), (0, 1)).reshape(4, -1)
        rij = t @ t.conj().T
    else:
        rij = partial_trace_factors(rho, dims, [i, j])
        if i > j:
            # partial_trace_factors orders kept factors ascending
            rij = rij.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    oa, ob = PAULI[alpha], PAULI[beta]
    joint = np.trace(rij @ np.kron(oa, ob)).real
    ri = np.einsum("ajbj->ab", rij.reshape(2, 2, 2, 2))
    rj = np.einsum("iaib->ab", rij.reshape(2, 2, 2, 2))
    return float(joint - np.trace(ri @ oa).real * np.trace(rj @ ob).real)
