"""Numpy implementation of the kernels in ``_kernels.pyx``.

Used when the compiled extension is not built, or when the environment
variable ``EMPRG_PURE_PYTHON`` is set.  Gradients are evaluated on stacks of
perturbed isometries so the per-call overhead stays bounded.
"""
import numpy as np

BACKEND = "python"

CLIP = 1e-12
MAX_SWEEPS = 100
EPS = np.finfo(float).eps
TINY = 1e-150

_FLIP_SIGNS = np.array([-1.0, 1.0, 1.0, -1.0])


def jacobi_eigh(a):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in the solver's natural (diagonal) order.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = np.sum(np.abs(a) ** 2)
    if n == 0 or fro == 0.0:
        return np.real(np.diagonal(a)).copy(), v
    iu = np.triu_indices(n, 1)
    # rounding leaves an off-diagonal floor of order (n eps)^2 fro
    tol = (n * EPS) ** 2 * fro
    prev = np.inf
    for _ in range(MAX_SWEEPS):
        off = np.sum(np.abs(a[iu]) ** 2)
        if off <= tol or off >= prev:
            break
        prev = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                if r < TINY or r <= EPS * EPS * (abs(app) + abs(aqq)):
                    # below rounding of the diagonal: drop instead of rotating
                    a[p, q] = a[q, p] = 0.0
                    continue
                e = complex(apq.real / r, apq.imag / r)
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ec = np.conj(e)
                x, y = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * x - s * ec * y
                a[:, q] = s * x + c * ec * y
                x, y = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * x - s * e * y
                a[q, :] = s * x + c * e * y
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                x, y = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * x - s * ec * y
                v[:, q] = s * x + c * ec * y
    return np.real(np.diagonal(a)).copy(), v


def _entropy_bits(lam):
    lam = np.where(lam > CLIP, lam, 1.0)
    return -np.sum(lam * np.log2(lam), axis=-1)


def _binary_entropy(x):
    x = np.asarray(x, dtype=float)
    inside = (x > CLIP) & (x < 1.0 - CLIP)
    xs = np.where(inside, x, 0.5)
    h = -xs * np.log2(xs) - (1.0 - xs) * np.log2(1.0 - xs)
    return np.where(inside, h, 0.0)


def _orth(w):
    # subspace-preserving orthonormalisation of a stack of d x m matrices
    q, r = np.linalg.qr(w)
    phase = np.diagonal(r, axis1=-2, axis2=-1)
    phase = np.where(np.abs(phase) > 0, phase / np.abs(phase), 1.0)
    return q * phase[..., None, :]


def _entropy_batch(rho, ws):
    sig = np.einsum("nia,ij,njb->nab", ws.conj(), rho, ws)
    tr = np.real(np.trace(sig, axis1=1, axis2=2))
    ok = tr > 1e-10
    sig = sig / np.where(ok, tr, 1.0)[:, None, None]
    lam = np.linalg.eigvalsh(sig)
    return np.where(ok, _entropy_bits(lam), -np.inf)


def _margin_batch(rho, was, wbs):
    da, db = was.shape[1], wbs.shape[1]
    r4 = rho.reshape(da, db, da, db)
    sig = np.einsum("nia,njb,ijkl,nkc,nld->nabcd", was.conj(), wbs.conj(), r4, was, wbs)
    sig = sig.reshape(-1, 4, 4)
    tr = np.real(np.trace(sig, axis1=1, axis2=2))
    ok = tr > 1e-10
    sig = sig / np.where(ok, tr, 1.0)[:, None, None]
    lam, vec = np.linalg.eigh(sig)
    sq = np.einsum("nik,nk,njk->nij", vec, np.sqrt(np.where(lam > CLIP, lam, 0.0)), vec.conj())
    flip = _FLIP_SIGNS[:, None] * _FLIP_SIGNS[None, :] * sig[:, ::-1, ::-1].conj()
    m = sq @ flip @ sq
    m = 0.5 * (m + np.conj(np.swapaxes(m, 1, 2)))
    mu = np.linalg.eigvalsh(m)
    mu = np.sqrt(np.where(mu > CLIP, mu, 0.0))[:, ::-1]
    margin = mu[:, 0] - mu[:, 1] - mu[:, 2] - mu[:, 3]
    return np.where(ok, margin, -np.inf)


def _eof_batch(rho, was, wbs):
    margin = _margin_batch(rho, was, wbs)
    conc = np.clip(np.where(np.isfinite(margin), margin, 0.0), 0.0, 1.0)
    eof = _binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - conc * conc)))
    return np.where(np.isfinite(margin), eof, -np.inf)


def projected_entropy(rho, w):
    """Entropy in bits of ``W^dag rho W`` renormalised to unit trace."""
    rho = np.asarray(rho, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    return float(_entropy_batch(rho, w[None])[0])


def projected_eof(rho, wa, wb):
    """Two-qubit EoF of ``rho`` compressed by ``wa (x) wb`` (each with 2 columns)."""
    rho = np.asarray(rho, dtype=np.complex128)
    wa = np.asarray(wa, dtype=np.complex128)
    wb = np.asarray(wb, dtype=np.complex128)
    if wa.shape[1] != 2 or wb.shape[1] != 2:
        raise ValueError("projected_eof needs two retained columns on each side")
    return float(_eof_batch(rho, wa[None], wb[None])[0])


def projected_concurrence_margin(rho, wa, wb):
    """Concurrence of the compressed two-qubit state before clipping at zero."""
    rho = np.asarray(rho, dtype=np.complex128)
    wa = np.asarray(wa, dtype=np.complex128)
    wb = np.asarray(wb, dtype=np.complex128)
    if wa.shape[1] != 2 or wb.shape[1] != 2:
        raise ValueError("projected_concurrence_margin needs two retained columns on each side")
    return float(_margin_batch(rho, wa[None], wb[None])[0])


def _perturbations(w, perp, h):
    """Stack of orth(W +/- h * unit * perp[:, k] e_l^T), ordered (k, l, part, sign)."""
    d, m = w.shape
    nperp = perp.shape[1]
    units = np.array([1.0, 1.0j])
    signs = np.array([1.0, -1.0])
    delta = np.zeros((nperp, m, 2, 2, d, m), dtype=np.complex128)
    for k in range(nperp):
        for l in range(m):
            delta[k, l, :, :, :, l] = (
                h * units[:, None, None] * signs[None, :, None] * perp[None, None, :, k]
            )
    stack = w[None] + delta.reshape(-1, d, m)
    return _orth(stack)


def _collect(values, nperp, m, h):
    vals = values.reshape(nperp, m, 2, 2)
    fp, fm = vals[..., 0], vals[..., 1]
    good = np.isfinite(fp) & np.isfinite(fm)
    slope = np.where(good, (fp - fm) / (2.0 * h), 0.0)
    return slope[..., 0] + 1j * slope[..., 1]


def projected_entropy_grad(rho, w, perp, h):
    """Central-difference gradient of :func:`projected_entropy`; see the
    compiled twin for the return convention."""
    rho = np.asarray(rho, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    perp = np.asarray(perp, dtype=np.complex128)
    f0 = projected_entropy(rho, w)
    nperp, m = perp.shape[1], w.shape[1]
    if nperp == 0:
        return f0, np.zeros((0, m), dtype=np.complex128)
    vals = _entropy_batch(rho, _perturbations(w, perp, h))
    return f0, _collect(vals, nperp, m, h)


def _pair_grad(batch, rho, wa, wb, pa, pb, h):
    rho = np.asarray(rho, dtype=np.complex128)
    wa = np.asarray(wa, dtype=np.complex128)
    wb = np.asarray(wb, dtype=np.complex128)
    pa = np.asarray(pa, dtype=np.complex128)
    pb = np.asarray(pb, dtype=np.complex128)
    if wa.shape[1] != 2 or wb.shape[1] != 2:
        raise ValueError("two-qubit gradients need two retained columns on each side")
    f0 = float(batch(rho, wa[None], wb[None])[0])
    na, nb = pa.shape[1], pb.shape[1]
    ga = np.zeros((na, 2), dtype=np.complex128)
    gb = np.zeros((nb, 2), dtype=np.complex128)
    if na:
        sa = _perturbations(wa, pa, h)
        vals = batch(rho, sa, np.broadcast_to(wb, (len(sa),) + wb.shape))
        ga = _collect(vals, na, 2, h)
    if nb:
        sb = _perturbations(wb, pb, h)
        vals = batch(rho, np.broadcast_to(wa, (len(sb),) + wa.shape), sb)
        gb = _collect(vals, nb, 2, h)
    return f0, ga, gb


def projected_eof_grad(rho, wa, wb, pa, pb, h):
    """Central-difference gradient of :func:`projected_eof` over both sides."""
    return _pair_grad(_eof_batch, rho, wa, wb, pa, pb, h)


def projected_margin_grad(rho, wa, wb, pa, pb, h):
    """Central-difference gradient of :func:`projected_concurrence_margin`."""
    return _pair_grad(_margin_batch, rho, wa, wb, pa, pb, h)
