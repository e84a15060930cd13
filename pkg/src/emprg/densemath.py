"""Dense complex linear algebra used throughout the package.

Matrices are plain 2-D numpy arrays.  Hermitian-only routines check the input
first and raise :class:`~emprg.errors.NotHermitianError` with the size of the
asymmetry.

Small Hermitian problems (``n <= JACOBI_MAX_DIM``) are diagonalised with the
cyclic Jacobi kernel from :mod:`emprg.kernels`; larger ones go to LAPACK.
Either way eigenvalues come back ascending, and eigenvalues that agree to
within ``TIE_TOL`` keep the solver's column order so that the basis chosen
inside a degenerate eigenspace is reproducible.
"""
import numpy as np

from . import kernels
from .errors import NotHermitianError

HERMITIAN_TOL = 1e-10
ZERO_TOL = 1e-12
CLIP_TOL = 1e-10
TIE_TOL = 1e-10
JACOBI_MAX_DIM = 64

_NAMED = {
    "exp": (np.exp, False),
    "sqrt": (np.sqrt, True),
    "log": (np.log, True),
    "log2": (np.log2, True),
}


def hermitian_asymmetry(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m, tol=HERMITIAN_TOL):
    """Return ``m`` as a square array, raising if it is not Hermitian."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    asym = hermitian_asymmetry(m)
    if asym > tol * scale:
        raise NotHermitianError(asym, tol * scale)
    return m


def _tie_stable_order(w):
    # ascending order; near-equal values keep their original relative order
    order = np.argsort(w, kind="stable")
    groups = []
    for idx in order:
        if groups and abs(w[idx] - w[groups[-1][0]]) <= TIE_TOL * max(1.0, abs(w[idx])):
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return np.array([i for g in groups for i in sorted(g)], dtype=int)


def hermitian_eig(m):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of ``m``.

    Parameters
    ----------
    m : (n, n) array_like
        Hermitian matrix (checked to ``HERMITIAN_TOL``).

    Returns
    -------
    w : (n,) ndarray of float
    v : (n, n) ndarray
        ``m @ v[:, k] == w[k] * v[:, k]``.
    """
    m = check_hermitian(m)
    n = m.shape[0]
    if n <= JACOBI_MAX_DIM:
        w, v = kernels.jacobi_eigh(m)
    else:
        w, v = np.linalg.eigh(m)
    order = _tie_stable_order(w)
    w, v = w[order], v[:, order]
    if np.isrealobj(m) and np.iscomplexobj(v):
        # Jacobi rotations of a real symmetric matrix stay real
        v = np.ascontiguousarray(v.real)
    return w, v


def top_eigvecs(m, k):
    """The ``k`` eigenvectors of ``m`` with largest eigenvalues.

    Ties at the cut are broken by the solver's column order.  Returns
    ``(values, vectors, tie_at_cut)``; values are descending.
    """
    w, v = hermitian_eig(m)
    n = len(w)
    if not 1 <= k <= n:
        raise ValueError(f"cannot keep {k} of {n} eigenvectors")
    # reverse group order, keep within-group order
    groups = []
    for i in range(n):
        if groups and abs(w[i] - w[groups[-1][0]]) <= TIE_TOL * max(1.0, abs(w[i])):
            groups[-1].append(i)
        else:
            groups.append([i])
    order = [i for g in reversed(groups) for i in g]
    tie = k < n and abs(w[order[k - 1]] - w[order[k]]) <= TIE_TOL * max(1.0, abs(w[order[k]]))
    sel = order[:k]
    return w[sel], v[:, sel], bool(tie)


def svd(m):
    """Singular value decomposition ``m = U @ diag(s) @ V^dag``.

    Returns ``(U, s, V)`` with ``s`` descending and non-negative; note ``V``
    (not ``V^dag``) is returned.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"svd needs a matrix, got shape {m.shape}")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return u, s, vh.conj().T


def partial_trace(rho, dims, keep):
    """Trace out one side of a bipartite operator.

    ``dims = (dA, dB)``; ``keep`` is ``"A"`` or ``"B"``.
    """
    rho = np.asarray(rho)
    da, db = dims
    if rho.shape != (da * db, da * db):
        raise ValueError(f"operator of shape {rho.shape} does not match dims {dims}")
    r = rho.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace_factors(rho, dims, keep):
    """Reduce an operator on ``prod(dims)`` factors to the factors in ``keep``.

    Kept factors appear in ascending index order.
    """
    rho = np.asarray(rho)
    dims = tuple(int(d) for d in dims)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one factor")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep {keep} out of range for {len(dims)} factors")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"operator of shape {rho.shape} does not match dims {dims}")
    drop = [i for i in range(len(dims)) if i not in keep]
    n = len(dims)
    t = rho.reshape(dims + dims)
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(perm)
    dk = int(np.prod([dims[i] for i in keep]))
    dd = int(np.prod([dims[i] for i in drop])) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ijkj->ik", t)


def matrix_function(m, f, nonnegative=None):
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    ``f`` is a callable or one of ``"exp"``, ``"sqrt"``, ``"log"``,
    ``"log2"``.  For functions needing a non-negative argument, eigenvalues in
    ``[-CLIP_TOL, 0)`` are clipped to zero; anything more negative is an
    error, as is a non-finite result.
    """
    if isinstance(f, str):
        try:
            f, default_nonneg = _NAMED[f]
        except KeyError:
            raise ValueError(f"unknown matrix function {f!r}") from None
        if nonnegative is None:
            nonnegative = default_nonneg
    w, v = hermitian_eig(m)
    if nonnegative:
        if w.size and w.min() < -CLIP_TOL:
            raise ValueError(f"eigenvalue {w.min():.3e} outside the function's domain")
        w = np.where(w < 0.0, 0.0, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        fw = np.asarray(f(w))
    if not np.all(np.isfinite(fw)):
        raise ValueError("matrix function undefined on the spectrum")
    return (v * fw) @ v.conj().T


def kron(*ops):
    """Kronecker product of one or more matrices, left to right."""
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, op)
    return out
