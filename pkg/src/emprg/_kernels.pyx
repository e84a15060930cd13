# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: complex Jacobi diagonalization and the projected
entanglement objectives used by the EMP optimizer.

Every function here has a numpy twin in ``_kernels_py`` with the same
signature and semantics; ``emprg.kernels`` picks one at import time.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, log2, INFINITY
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.float cimport DBL_EPSILON

cnp.import_array()

ctypedef double complex cplx

cdef enum:
    MAX_SWEEPS = 100

cdef double CLIP = 1e-12
cdef double EPS = DBL_EPSILON
cdef double TINY = 1e-150

BACKEND = "cython"


cdef void _jacobi(cplx* a, cplx* v, Py_ssize_t n) noexcept nogil:
    """Cyclic Jacobi on the Hermitian n x n matrix ``a`` (row-major, in place).

    On return the diagonal of ``a`` holds the eigenvalues and the columns of
    ``v`` the eigenvectors.  ``v`` is initialised here.
    """
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double fro = 0.0, off, prev = INFINITY, tol, r, theta, t, c, s, app, aqq
    cdef cplx apq, e, ec, x, y, sec, cec, se, ce

    for p in range(n):
        for q in range(n):
            v[p * n + q] = 1.0 if p == q else 0.0
            fro += a[p * n + q].real * a[p * n + q].real + a[p * n + q].imag * a[p * n + q].imag
    if fro == 0.0:
        return
    # rounding leaves an off-diagonal floor of order (n eps)^2 fro
    tol = (n * EPS) * (n * EPS) * fro

    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p * n + q].real * a[p * n + q].real + a[p * n + q].imag * a[p * n + q].imag
        if off <= tol or off >= prev:
            break
        prev = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                r = hypot(apq.real, apq.imag)
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                if r < TINY or r <= EPS * EPS * (fabs(app) + fabs(aqq)):
                    # below rounding of the diagonal: drop instead of rotating
                    a[p * n + q] = 0.0
                    a[q * n + p] = 0.0
                    continue
                e.real = apq.real / r
                e.imag = apq.imag / r
                ec = e.conjugate()
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                sec = s * ec
                cec = c * ec
                se = s * e
                ce = c * e
                for k in range(n):
                    x = a[k * n + p]
                    y = a[k * n + q]
                    a[k * n + p] = c * x - sec * y
                    a[k * n + q] = s * x + cec * y
                for k in range(n):
                    x = a[p * n + k]
                    y = a[q * n + k]
                    a[p * n + k] = c * x - se * y
                    a[q * n + k] = s * x + ce * y
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = app - t * r
                a[q * n + q] = aqq + t * r
                for k in range(n):
                    x = v[k * n + p]
                    y = v[k * n + q]
                    v[k * n + p] = c * x - sec * y
                    v[k * n + q] = s * x + cec * y


def jacobi_eigh(a):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in the solver's natural (diagonal) order, not
    sorted.
    """
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0]
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] vecs = np.empty((n, n), dtype=np.complex128)
    if n:
        with nogil:
            _jacobi(&work[0, 0], &vecs[0, 0], n)
    return np.ascontiguousarray(np.diagonal(work).real), vecs


cdef int _orthonormalize(cplx* w, Py_ssize_t d, Py_ssize_t m) noexcept nogil:
    """Modified Gram-Schmidt (two passes) on the columns of a d x m matrix."""
    cdef Py_ssize_t j, k, i
    cdef int rep
    cdef cplx proj
    cdef double nrm
    for j in range(m):
        for rep in range(2):
            for k in range(j):
                proj = 0.0
                for i in range(d):
                    proj = proj + w[i * m + k].conjugate() * w[i * m + j]
                for i in range(d):
                    w[i * m + j] = w[i * m + j] - proj * w[i * m + k]
        nrm = 0.0
        for i in range(d):
            nrm += w[i * m + j].real * w[i * m + j].real + w[i * m + j].imag * w[i * m + j].imag
        nrm = sqrt(nrm)
        if nrm < 1e-14:
            return -1
        for i in range(d):
            w[i * m + j] = w[i * m + j] / nrm
    return 0


cdef double _entropy_bits(double* lam, Py_ssize_t n) noexcept nogil:
    cdef double h = 0.0, x
    cdef Py_ssize_t i
    for i in range(n):
        x = lam[i]
        if x > CLIP:
            h -= x * log2(x)
    return h


cdef double _binary_entropy(double x) noexcept nogil:
    if x <= CLIP or x >= 1.0 - CLIP:
        return 0.0
    return -x * log2(x) - (1.0 - x) * log2(1.0 - x)


cdef double _entropy_value(const cplx* rho, const cplx* w, Py_ssize_t d, Py_ssize_t m) noexcept nogil:
    """Entropy (bits) of W^dag rho W / tr, or -inf when the trace vanishes."""
    cdef Py_ssize_t i, j, a, b
    cdef cplx acc
    cdef double tr = 0.0
    cdef cplx* t = <cplx*> malloc(d * m * sizeof(cplx))
    cdef cplx* sig = <cplx*> malloc(m * m * sizeof(cplx))
    cdef cplx* vec = <cplx*> malloc(m * m * sizeof(cplx))
    cdef double* lam = <double*> malloc(m * sizeof(double))
    cdef double out
    for i in range(d):
        for b in range(m):
            acc = 0.0
            for j in range(d):
                acc = acc + rho[i * d + j] * w[j * m + b]
            t[i * m + b] = acc
    for a in range(m):
        for b in range(m):
            acc = 0.0
            for i in range(d):
                acc = acc + w[i * m + a].conjugate() * t[i * m + b]
            sig[a * m + b] = acc
        tr += sig[a * m + a].real
    if tr <= 1e-10:
        out = -INFINITY
    else:
        for a in range(m):
            for b in range(m):
                sig[a * m + b] = sig[a * m + b] / tr
        _jacobi(sig, vec, m)
        for a in range(m):
            lam[a] = sig[a * m + a].real
        out = _entropy_bits(lam, m)
    free(t)
    free(sig)
    free(vec)
    free(lam)
    return out


cdef double _margin_value(const cplx* rho, const cplx* wa, const cplx* wb,
                          Py_ssize_t da, Py_ssize_t db) noexcept nogil:
    """Unclipped concurrence l1 - l2 - l3 - l4 of (Wa x Wb)^dag rho (Wa x Wb) / tr."""
    cdef Py_ssize_t n = da * db
    cdef Py_ssize_t i, j, r, c, k, ia, jb
    cdef cplx acc
    cdef double tr = 0.0
    cdef cplx* wk = <cplx*> malloc(n * 4 * sizeof(cplx))
    cdef cplx* t = <cplx*> malloc(n * 4 * sizeof(cplx))
    cdef cplx sig[16]
    cdef cplx work[16]
    cdef cplx vec[16]
    cdef cplx sq[16]
    cdef cplx flip[16]
    cdef cplx tmp[16]
    cdef double lam[4]
    cdef double sgn[4]
    cdef double x
    sgn[0] = -1.0
    sgn[1] = 1.0
    sgn[2] = 1.0
    sgn[3] = -1.0

    for ia in range(da):
        for jb in range(db):
            r = ia * db + jb
            for c in range(4):
                wk[r * 4 + c] = wa[ia * 2 + c // 2] * wb[jb * 2 + c % 2]
    for r in range(n):
        for c in range(4):
            acc = 0.0
            for k in range(n):
                acc = acc + rho[r * n + k] * wk[k * 4 + c]
            t[r * 4 + c] = acc
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for r in range(n):
                acc = acc + wk[r * 4 + i].conjugate() * t[r * 4 + j]
            sig[i * 4 + j] = acc
        tr += sig[i * 4 + i].real
    free(wk)
    free(t)
    if tr <= 1e-10:
        return -INFINITY
    for i in range(16):
        sig[i] = sig[i] / tr
        work[i] = sig[i]

    # sqrt(sigma)
    _jacobi(work, vec, 4)
    for k in range(4):
        x = work[k * 4 + k].real
        lam[k] = sqrt(x) if x > CLIP else 0.0
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                acc = acc + vec[i * 4 + k] * lam[k] * vec[j * 4 + k].conjugate()
            sq[i * 4 + j] = acc
    # spin-flipped state (Y x Y) sigma^* (Y x Y)
    for i in range(4):
        for j in range(4):
            flip[i * 4 + j] = sgn[i] * sgn[j] * sig[(3 - i) * 4 + (3 - j)].conjugate()
    # sqrt(sigma) flip sqrt(sigma), hermitised
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                acc = acc + flip[i * 4 + k] * sq[k * 4 + j]
            tmp[i * 4 + j] = acc
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for k in range(4):
                acc = acc + sq[i * 4 + k] * tmp[k * 4 + j]
            work[i * 4 + j] = acc
    for i in range(4):
        for j in range(i, 4):
            acc = 0.5 * (work[i * 4 + j] + work[j * 4 + i].conjugate())
            work[i * 4 + j] = acc
            work[j * 4 + i] = acc.conjugate()
    _jacobi(work, vec, 4)
    for k in range(4):
        x = work[k * 4 + k].real
        lam[k] = sqrt(x) if x > CLIP else 0.0
    # largest first
    for i in range(1, 4):
        x = lam[i]
        j = i - 1
        while j >= 0 and lam[j] < x:
            lam[j + 1] = lam[j]
            j -= 1
        lam[j + 1] = x
    return lam[0] - lam[1] - lam[2] - lam[3]


cdef double _eof_value(const cplx* rho, const cplx* wa, const cplx* wb,
                       Py_ssize_t da, Py_ssize_t db) noexcept nogil:
    """EoF (ebits) of the two-qubit state (Wa x Wb)^dag rho (Wa x Wb) / tr."""
    cdef double conc = _margin_value(rho, wa, wb, da, db)
    if conc == -INFINITY:
        return conc
    if conc <= 0.0:
        return 0.0
    if conc > 1.0:
        conc = 1.0
    return _binary_entropy(0.5 * (1.0 + sqrt(1.0 - conc * conc)))


cdef inline double _pair_value(const cplx* rho, const cplx* wa, const cplx* wb,
                               Py_ssize_t da, Py_ssize_t db, bint margin) noexcept nogil:
    if margin:
        return _margin_value(rho, wa, wb, da, db)
    return _eof_value(rho, wa, wb, da, db)


cdef inline cnp.ndarray _c(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def projected_entropy(rho, w):
    """Entropy in bits of ``W^dag rho W`` renormalised to unit trace."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] r = _c(rho)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] ww = _c(w)
    cdef Py_ssize_t d = ww.shape[0], m = ww.shape[1]
    return _entropy_value(&r[0, 0], &ww[0, 0], d, m)


def projected_eof(rho, wa, wb):
    """Two-qubit EoF of ``rho`` compressed by ``wa (x) wb`` (each with 2 columns)."""
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] r = _c(rho)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] a = _c(wa)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] b = _c(wb)
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("projected_eof needs two retained columns on each side")
    return _eof_value(&r[0, 0], &a[0, 0], &b[0, 0], a.shape[0], b.shape[0])


def projected_concurrence_margin(rho, wa, wb):
    """Concurrence of the compressed two-qubit state before clipping at zero.

    Negative values measure how deep inside the separable region the state
    lies; the entanglement of formation is a monotone function of
    ``max(0, margin)``.
    """
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] r = _c(rho)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] a = _c(wa)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] b = _c(wb)
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("projected_concurrence_margin needs two retained columns on each side")
    return _margin_value(&r[0, 0], &a[0, 0], &b[0, 0], a.shape[0], b.shape[0])


cdef void _shift(cplx* dst, const cplx* w, const cplx* perp, Py_ssize_t d, Py_ssize_t m,
                 Py_ssize_t nperp, Py_ssize_t k, Py_ssize_t l, cplx step) noexcept nogil:
    # dst = orth(W + step * perp[:, k] e_l^T)
    cdef Py_ssize_t i
    memcpy(dst, w, d * m * sizeof(cplx))
    for i in range(d):
        dst[i * m + l] = dst[i * m + l] + step * perp[i * nperp + k]
    _orthonormalize(dst, d, m)


def projected_entropy_grad(rho, w, perp, double h):
    """Central-difference gradient of :func:`projected_entropy` along the
    horizontal directions ``perp @ X``.

    Returns ``(value, G)`` with ``G`` of shape ``(d - m, m)``; ``perp @ G``
    is the ascent direction.
    """
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] r = _c(rho)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] ww = _c(w)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] pp = _c(perp)
    cdef Py_ssize_t d = ww.shape[0], m = ww.shape[1], np_ = pp.shape[1]
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] g = np.zeros((np_, m), dtype=np.complex128)
    cdef double f0 = _entropy_value(&r[0, 0], &ww[0, 0], d, m)
    cdef double fp, fm, gre, gim
    cdef Py_ssize_t k, l, part
    cdef cplx unit
    cdef cplx* buf
    if np_ == 0:
        return f0, g
    buf = <cplx*> malloc(d * m * sizeof(cplx))
    with nogil:
        for k in range(np_):
            for l in range(m):
                for part in range(2):
                    unit = 1.0 if part == 0 else 1.0j
                    _shift(buf, &ww[0, 0], &pp[0, 0], d, m, np_, k, l, h * unit)
                    fp = _entropy_value(&r[0, 0], buf, d, m)
                    _shift(buf, &ww[0, 0], &pp[0, 0], d, m, np_, k, l, -h * unit)
                    fm = _entropy_value(&r[0, 0], buf, d, m)
                    if fp == -INFINITY or fm == -INFINITY:
                        continue
                    if part == 0:
                        g[k, l] = g[k, l] + (fp - fm) / (2.0 * h)
                    else:
                        g[k, l] = g[k, l] + 1.0j * (fp - fm) / (2.0 * h)
    free(buf)
    return f0, g


def _pair_grad(rho, wa, wb, pa, pb, double h, bint margin):
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] r = _c(rho)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] a = _c(wa)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] b = _c(wb)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] qa = _c(pa)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] qb = _c(pb)
    cdef Py_ssize_t da = a.shape[0], db = b.shape[0]
    cdef Py_ssize_t na = qa.shape[1], nb = qb.shape[1]
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("two-qubit gradients need two retained columns on each side")
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] ga = np.zeros((na, 2), dtype=np.complex128)
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] gb = np.zeros((nb, 2), dtype=np.complex128)
    cdef double f0 = _pair_value(&r[0, 0], &a[0, 0], &b[0, 0], da, db, margin)
    cdef double fp, fm, slope
    cdef Py_ssize_t k, l, part
    cdef cplx unit
    cdef cplx* buf = <cplx*> malloc(max(da, db) * 2 * sizeof(cplx))
    with nogil:
        for k in range(na):
            for l in range(2):
                for part in range(2):
                    unit = 1.0 if part == 0 else 1.0j
                    _shift(buf, &a[0, 0], &qa[0, 0], da, 2, na, k, l, h * unit)
                    fp = _pair_value(&r[0, 0], buf, &b[0, 0], da, db, margin)
                    _shift(buf, &a[0, 0], &qa[0, 0], da, 2, na, k, l, -h * unit)
                    fm = _pair_value(&r[0, 0], buf, &b[0, 0], da, db, margin)
                    if fp == -INFINITY or fm == -INFINITY:
                        continue
                    slope = (fp - fm) / (2.0 * h)
                    ga[k, l] = ga[k, l] + unit * slope
        for k in range(nb):
            for l in range(2):
                for part in range(2):
                    unit = 1.0 if part == 0 else 1.0j
                    _shift(buf, &b[0, 0], &qb[0, 0], db, 2, nb, k, l, h * unit)
                    fp = _pair_value(&r[0, 0], &a[0, 0], buf, da, db, margin)
                    _shift(buf, &b[0, 0], &qb[0, 0], db, 2, nb, k, l, -h * unit)
                    fm = _pair_value(&r[0, 0], &a[0, 0], buf, da, db, margin)
                    if fp == -INFINITY or fm == -INFINITY:
                        continue
                    slope = (fp - fm) / (2.0 * h)
                    gb[k, l] = gb[k, l] + unit * slope
    free(buf)
    return f0, ga, gb


def projected_eof_grad(rho, wa, wb, pa, pb, double h):
    """Central-difference gradient of :func:`projected_eof` over both sides.

    Returns ``(value, GA, GB)``; ``pa @ GA`` and ``pb @ GB`` are the ascent
    directions for ``wa`` and ``wb``.
    """
    return _pair_grad(rho, wa, wb, pa, pb, h, False)


def projected_margin_grad(rho, wa, wb, pa, pb, double h):
    """Central-difference gradient of :func:`projected_concurrence_margin`,
    with the same conventions as :func:`projected_eof_grad`."""
    return _pair_grad(rho, wa, wb, pa, pb, h, True)
