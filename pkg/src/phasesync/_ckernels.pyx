# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Mirrors ``_pykernels`` signature for signature."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, cos, sin, M_PI, INFINITY, isfinite
from scipy.linalg.cython_blas cimport zgemv

cnp.import_array()


cdef inline void _matvec(double complex[:, ::1] H, double complex[::1] v,
                         double complex[::1] out) noexcept nogil:
    # C-ordered H read as Fortran is H^T, so 'T' gives H v.
    cdef int n = H.shape[0]
    cdef int inc = 1
    cdef double complex one = 1.0
    cdef double complex zero = 0.0
    cdef char trans = b'T'
    zgemv(&trans, &n, &n, &one, &H[0, 0], &n, &v[0], &inc, &zero, &out[0], &inc)


cdef inline double _norm(double complex[::1] v) noexcept nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0
    for k in range(v.shape[0]):
        s += v[k].real * v[k].real + v[k].imag * v[k].imag
    return sqrt(s)


cdef inline void _deflate(double complex[::1] v, double complex[::1] q) noexcept nogil:
    cdef Py_ssize_t k
    cdef double complex dot = 0.0
    for k in range(v.shape[0]):
        dot = dot + q[k].conjugate() * v[k]
    for k in range(v.shape[0]):
        v[k] = v[k] - q[k] * dot


def phase_project(v):
    cdef double complex[::1] src = np.ascontiguousarray(v, dtype=np.complex128)
    out = np.empty(src.shape[0], dtype=np.complex128)
    cdef double complex[::1] dst = out
    cdef Py_ssize_t k
    cdef double a
    with nogil:
        for k in range(src.shape[0]):
            a = hypot(src[k].real, src[k].imag)
            if a > 0:
                dst[k] = src[k] / a
            else:
                dst[k] = 1.0
    return out


def gpm_step(C, x):
    cdef double complex[:, ::1] H = np.ascontiguousarray(C, dtype=np.complex128)
    cdef double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    n = H.shape[0]
    w = np.empty(n, dtype=np.complex128)
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] wv = w
    cdef double complex[::1] ov = out
    cdef Py_ssize_t k
    cdef double a
    cdef long zeros = 0
    with nogil:
        _matvec(H, xv, wv)
        for k in range(wv.shape[0]):
            a = hypot(wv[k].real, wv[k].imag)
            if a > 0:
                ov[k] = wv[k] / a
            else:
                ov[k] = 1.0
                zeros += 1
    return out, w, int(zeros)


def power_iterate(H, v0, double alpha, double shift, double tol, long max_iter,
                  deflate=None, double stop_below=-INFINITY):
    cdef double complex[:, ::1] Hm = np.ascontiguousarray(H, dtype=np.complex128)
    cdef Py_ssize_t n = Hm.shape[0]
    v_arr = np.array(v0, dtype=np.complex128)
    w_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] w = w_arr
    cdef double complex[::1] q
    cdef bint has_q = deflate is not None
    if has_q:
        q = np.ascontiguousarray(deflate, dtype=np.complex128)
    cdef Py_ssize_t k
    cdef long it = 0
    cdef double lam = 0.0, res = INFINITY, nrm, r2, dre, dim
    cdef double complex d
    cdef bint converged = False, broke = False
    with nogil:
        if has_q:
            _deflate(v, q)
        nrm = _norm(v)
        for k in range(n):
            v[k] = v[k] / nrm
        while it < max_iter:
            it += 1
            _matvec(Hm, v, w)
            if has_q:
                _deflate(w, q)
            lam = 0.0
            for k in range(n):
                lam += v[k].real * w[k].real + v[k].imag * w[k].imag
            r2 = 0.0
            for k in range(n):
                dre = w[k].real - lam * v[k].real
                dim = w[k].imag - lam * v[k].imag
                r2 += dre * dre + dim * dim
            res = sqrt(r2) / (fabs(lam) if fabs(lam) > 1.0 else 1.0)
            if res <= tol:
                converged = True
                break
            if lam < stop_below:
                break
            for k in range(n):
                v[k] = alpha * w[k] + shift * v[k]
            if has_q:
                _deflate(v, q)
            nrm = _norm(v)
            if nrm == 0.0 or not isfinite(nrm):
                broke = True
                break
            for k in range(n):
                v[k] = v[k] / nrm
    return lam, v_arr, res, int(it), bool(converged)


def jacobi_eigh(A, double tol=1e-12, int max_sweeps=100):
    """Cyclic-by-row Jacobi; returns (eigenvalues, eigenvectors, sweeps)."""
    a_arr = np.array(A, dtype=np.float64, order="C")
    cdef double[:, ::1] a = a_arr
    cdef Py_ssize_t m = a.shape[0]
    if m % 2:
        raise ValueError("jacobi_eigh expects an even order")
    v_arr = np.eye(m)
    cdef double[:, ::1] V = v_arr
    cdef Py_ssize_t p, q, k
    cdef double fro = 0.0, off, apq, tau, t, c, s, akp, akq
    cdef int sweep = 0
    for p in range(m):
        for q in range(m):
            fro += a[p, q] * a[p, q]
    fro = sqrt(fro)
    if fro == 0.0:
        return np.zeros(m), v_arr, 0
    with nogil:
        while True:
            off = 0.0
            for p in range(m):
                for q in range(m):
                    if p != q:
                        off += a[p, q] * a[p, q]
            off = sqrt(off)
            if off <= tol * fro or sweep == max_sweeps:
                break
            sweep += 1
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if tau >= 0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(m):
                        akp = a[p, k]
                        akq = a[q, k]
                        a[p, k] = c * akp - s * akq
                        a[q, k] = s * akp + c * akq
                    for k in range(m):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(m):
                        akp = V[k, p]
                        akq = V[k, q]
                        V[k, p] = c * akp - s * akq
                        V[k, q] = s * akp + c * akq
    if off > tol * fro:
        raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
    return np.diag(a_arr).copy(), v_arr, sweep


def dinf_grid(x, y, long ngrid):
    cdef double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef double complex[::1] yv = np.ascontiguousarray(y, dtype=np.complex128)
    out = np.empty(ngrid)
    cdef double[::1] o = out
    cdef Py_ssize_t j, k
    cdef double th, cr, ci, re, im, d2, best
    with nogil:
        for j in range(ngrid):
            th = 2.0 * M_PI * j / ngrid
            cr = cos(th)
            ci = sin(th)
            best = 0.0
            for k in range(xv.shape[0]):
                re = xv[k].real * cr - xv[k].imag * ci - yv[k].real
                im = xv[k].real * ci + xv[k].imag * cr - yv[k].imag
                d2 = re * re + im * im
                if d2 > best:
                    best = d2
            o[j] = sqrt(best)
    return out
