# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. ``_kernels_py`` mirrors this module line for line."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, log

cnp.import_array()


cdef inline void _monic_point(double x, const double[::1] alpha, const double[::1] beta,
                              int n, double* pn, double* pnm1, double* dpn) noexcept nogil:
    cdef double p0 = 1.0, p1, d0 = 0.0, d1 = 1.0, p2, d2
    cdef int k
    if n == 0:
        pn[0] = 1.0
        pnm1[0] = 0.0
        dpn[0] = 0.0
        return
    p1 = x - alpha[0]
    for k in range(1, n):
        p2 = (x - alpha[k]) * p1 - beta[k] * p0
        d2 = p1 + (x - alpha[k]) * d1 - beta[k] * d0
        p0 = p1
        p1 = p2
        d0 = d1
        d1 = d2
    pn[0] = p1
    pnm1[0] = p0
    dpn[0] = d1


def monic_eval(const double[::1] x, const double[::1] alpha, const double[::1] beta, int n):
    """Return (p_n, p_{n-1}, p_n') at every point of ``x``."""
    cdef Py_ssize_t i, m = x.shape[0]
    out = np.empty((3, m))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(m):
            _monic_point(x[i], alpha, beta, n, &o[0, i], &o[1, i], &o[2, i])
    return out[0], out[1], out[2]


cdef inline int _roots_below(double x, const double[::1] alpha, const double[::1] beta,
                             int n) noexcept nogil:
    # Sturm count via ratios r_k = p_k / p_{k-1}; each negative ratio is one sign change.
    cdef double r = x - alpha[0]
    cdef int k, changes = 0
    if r < 0.0:
        changes += 1
    for k in range(1, n):
        if r == 0.0:
            r = 1e-300
        r = (x - alpha[k]) - beta[k] / r
        if r < 0.0:
            changes += 1
    return n - changes


def monic_roots(const double[::1] alpha, const double[::1] beta, int n,
                double lo, double hi, double tol=1e-15, int max_bisect=200):
    """Roots of p_n by Sturm-count bisection followed by guarded Newton steps.

    Returns (roots, failed) where ``failed`` is the index of the first root that
    did not settle, or -1.
    """
    roots = np.empty(n)
    cdef double[::1] r = roots
    cdef int j, it, failed = -1
    cdef double a, b, mid, pn, pnm1, dpn, step, xn
    with nogil:
        for j in range(n):
            a = lo
            b = hi
            for it in range(max_bisect):
                mid = 0.5 * (a + b)
                if _roots_below(mid, alpha, beta, n) <= j:
                    a = mid
                else:
                    b = mid
                if b - a <= tol * (1.0 + fabs(mid)):
                    break
            else:
                if failed < 0:
                    failed = j
            xn = 0.5 * (a + b)
            for it in range(3):
                _monic_point(xn, alpha, beta, n, &pn, &pnm1, &dpn)
                if dpn == 0.0:
                    break
                step = pn / dpn
                if xn - step <= a or xn - step >= b:
                    break
                xn = xn - step
            r[j] = xn
    return roots, failed


def laguerre_table(const double[::1] t, int nmax):
    """Orthonormal generalized Laguerre functions (alpha = 1/2), shape (nmax, len(t)).

    Normalized so that int_0^inf t^{1/2} e^{-t} l_j l_k dt = delta_jk.
    """
    cdef Py_ssize_t i, m = t.shape[0]
    cdef int k
    cdef double l0, l1, l2, ti
    cdef double norm0 = 1.0 / sqrt(0.886226925452758)  # 1/sqrt(Gamma(3/2))
    out = np.empty((nmax, m))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(m):
            ti = t[i]
            l0 = norm0
            o[0, i] = l0
            if nmax > 1:
                l1 = (1.5 - ti) * l0 / sqrt(1.5)
                o[1, i] = l1
                for k in range(1, nmax - 1):
                    l2 = ((2 * k + 1.5 - ti) * l1 - sqrt(k * (k + 0.5)) * l0) / sqrt((k + 1) * (k + 1.5))
                    o[k + 1, i] = l2
                    l0 = l1
                    l1 = l2
    return out


cdef inline double _series_point(const double[::1] coef, double t) noexcept nogil:
    cdef int k, nmax = coef.shape[0]
    cdef double l0 = 1.0 / sqrt(0.886226925452758), l1, l2, acc
    acc = coef[0] * l0
    if nmax == 1:
        return acc
    l1 = (1.5 - t) * l0 / sqrt(1.5)
    acc += coef[1] * l1
    for k in range(1, nmax - 1):
        l2 = ((2 * k + 1.5 - t) * l1 - sqrt(k * (k + 0.5)) * l0) / sqrt((k + 1) * (k + 1.5))
        acc += coef[k + 1] * l2
        l0 = l1
        l1 = l2
    return acc


def laguerre_series(const double[::1] coef, const double[::1] t):
    """sum_k coef[k] * l_k(t) at every point of ``t``."""
    cdef Py_ssize_t i, m = t.shape[0]
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _series_point(coef, t[i])
    return out


def refine_brackets(const double[::1] coef, double c, const double[::1] lo, const double[::1] hi,
                    double tol=1e-13):
    """Bisect sign changes of x -> sum_k coef[k] l_k(c x^2) inside each [lo, hi]."""
    cdef Py_ssize_t i, m = lo.shape[0]
    cdef double a, b, fa, fm, mid
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            a = lo[i]
            b = hi[i]
            fa = _series_point(coef, c * a * a)
            while b - a > tol * (1.0 + fabs(a)):
                mid = 0.5 * (a + b)
                fm = _series_point(coef, c * mid * mid)
                if fm == 0.0:
                    a = mid
                    b = mid
                    break
                if (fm > 0.0) == (fa > 0.0):
                    a = mid
                    fa = fm
                else:
                    b = mid
            o[i] = 0.5 * (a + b)
    return out


def phi_log_phi(const double[::1] phi):
    """phi * ln|phi| with the removable value 0 at phi == 0."""
    cdef Py_ssize_t i, m = phi.shape[0]
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            if phi[i] == 0.0:
                o[i] = 0.0
            else:
                o[i] = phi[i] * log(fabs(phi[i]))
    return out
