"""Rank-m projections of a block: isometries, truncation error and the
density-matrix (DMRG) choice of retained subspace."""
from dataclasses import dataclass, field

import numpy as np

from .. import densemath as dm
from ..states import DensityMatrix, PureState, _check_split, reduce

ORTHO_TOL = 1e-9


@dataclass
class Isometry:
    """``d x m`` matrix with orthonormal columns spanning the kept subspace."""

    columns: np.ndarray
    degenerate: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = np.atleast_2d(np.asarray(self.columns, dtype=complex))
        d, m = self.columns.shape
        if not 1 <= m <= d:
            raise ValueError(f"isometry shape {self.columns.shape} needs 1 <= m <= d")
        gram = self.columns.conj().T @ self.columns
        dev = np.max(np.abs(gram - np.eye(m)))
        if dev > ORTHO_TOL:
            raise ValueError(f"columns are not orthonormal (Gram deviation {dev:.2e})")

    @property
    def d(self):
        return self.columns.shape[0]

    @property
    def m(self):
        return self.columns.shape[1]

    def projector(self):
        return self.columns @ self.columns.conj().T

    def compress(self, op):
        """``W^dag op W``."""
        return self.columns.conj().T @ op @ self.columns

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d))


def orthonormalize(w):
    """Orthonormal basis of the column span of ``w`` (QR, positive diagonal)."""
    q, r = np.linalg.qr(w)
    ph = np.diagonal(r)
    ph = np.where(np.abs(ph) > 0, ph / np.abs(ph), 1.0)
    return q * ph


def complement(w):
    """Orthonormal basis of the orthogonal complement of ``span(w)``."""
    q = np.linalg.qr(w, mode="complete")[0]
    return q[:, w.shape[1]:]


def random_isometry(d, m, rng):
    """Haar-random ``d x m`` isometry."""
    z = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
    return orthonormalize(z)


def truncation_error(P, psi, split):
    """``|| psi - (P (x) 1) psi ||^2`` with ``P`` acting on the ``A`` side."""
    mat = psi.as_matrix(split)
    if P.d != mat.shape[0]:
        raise ValueError(f"isometry acts on dimension {P.d}, block A has {mat.shape[0]}")
    w = P.columns
    diff = mat - w @ (w.conj().T @ mat)
    return float(np.vdot(diff, diff).real)


def retained_weight(P, rho_a):
    """``tr(P rho_A)``; the truncation error equals one minus this."""
    m = rho_a.matrix if isinstance(rho_a, DensityMatrix) else np.asarray(rho_a)
    return float(np.trace(P.compress(m)).real)


def _top_subspace(rho_a, m):
    d = rho_a.matrix.shape[0]
    if not 1 <= m <= d:
        raise ValueError(f"cannot keep {m} states of a {d}-dimensional block")
    vals, vecs, tie = dm.top_eigvecs(rho_a.matrix, m)
    return Isometry(vecs, degenerate=tie, meta={"weights": vals})


def dmrg_projection(psi, split, m):
    """Projection onto the ``m`` dominant eigenvectors of ``rho_A``.

    This minimises :func:`truncation_error` over all rank-``m`` projections.
    ``degenerate`` is set when the eigenvalue at the cut is tied, in which
    case the basis is the solver's deterministic choice.
    """
    if not isinstance(psi, PureState):
        raise TypeError("dmrg_projection expects a PureState")
    a, _ = _check_split(split, len(psi.dims))
    return _top_subspace(reduce(psi, a), m)


def dmrg_projection_mixed(rho_ab, split, m):
    """Dominant ``m`` eigenvectors of ``rho_A = tr_B rho_AB``."""
    if isinstance(rho_ab, PureState):
        rho_ab = rho_ab.density_matrix()
    a, _ = _check_split(split, len(rho_ab.dims))
    return _top_subspace(reduce(rho_ab, a), m)
