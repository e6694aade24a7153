"""Pure-numpy fallback for the compiled kernels in ``_kernels.pyx``.

Signatures and results match the extension; loops run across points (or
roots) as numpy vectors instead of scalar C loops.
"""
import numpy as np

_NORM0 = 1.0 / np.sqrt(0.886226925452758)  # 1/sqrt(Gamma(3/2))


def monic_eval(x, alpha, beta, n):
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x), np.zeros_like(x), np.zeros_like(x)
    p0, p1 = np.ones_like(x), x - alpha[0]
    d0, d1 = np.zeros_like(x), np.ones_like(x)
    for k in range(1, n):
        p0, p1, d0, d1 = p1, (x - alpha[k]) * p1 - beta[k] * p0, d1, p1 + (x - alpha[k]) * d1 - beta[k] * d0
    return p1, p0, d1


def _roots_below(x, alpha, beta, n):
    r = x - alpha[0]
    changes = (r < 0).astype(int)
    for k in range(1, n):
        r = np.where(r == 0.0, 1e-300, r)
        r = (x - alpha[k]) - beta[k] / r
        changes += r < 0
    return n - changes


def monic_roots(alpha, beta, n, lo, hi, tol=1e-15, max_bisect=200):
    j = np.arange(n)
    a = np.full(n, float(lo))
    b = np.full(n, float(hi))
    for _ in range(max_bisect):
        mid = 0.5 * (a + b)
        below = _roots_below(mid, alpha, beta, n) <= j
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
        if np.all(b - a <= tol * (1.0 + np.abs(mid))):
            break
    unsettled = np.nonzero(b - a > tol * (1.0 + np.abs(0.5 * (a + b))))[0]
    failed = int(unsettled[0]) if unsettled.size else -1
    xn = 0.5 * (a + b)
    active = np.ones(n, dtype=bool)
    for _ in range(3):
        pn, _, dpn = monic_eval(xn, alpha, beta, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = xn - pn / dpn
        ok = active & (dpn != 0.0) & (trial > a) & (trial < b)
        xn = np.where(ok, trial, xn)
        active = ok
    return xn, failed


def laguerre_table(t, nmax):
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax, t.size))
    out[0] = _NORM0
    if nmax > 1:
        out[1] = (1.5 - t) * _NORM0 / np.sqrt(1.5)
    for k in range(1, nmax - 1):
        out[k + 1] = ((2 * k + 1.5 - t) * out[k] - np.sqrt(k * (k + 0.5)) * out[k - 1]) / np.sqrt(
            (k + 1) * (k + 1.5)
        )
    return out


def laguerre_series(coef, t):
    return np.asarray(coef) @ laguerre_table(t, len(coef))


def refine_brackets(coef, c, lo, hi, tol=1e-13):
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    if a.size == 0:
        return a
    fa = laguerre_series(coef, c * a * a)
    while True:
        open_ = b - a > tol * (1.0 + np.abs(a))
        if not open_.any():
            break
        mid = 0.5 * (a + b)
        fm = laguerre_series(coef, c * mid * mid)
        exact = open_ & (fm == 0.0)
        same = open_ & ~exact & ((fm > 0.0) == (fa > 0.0))
        flip = open_ & ~exact & ~same
        a = np.where(same | exact, mid, a)
        fa = np.where(same, fm, fa)
        b = np.where(flip | exact, mid, b)
    return 0.5 * (a + b)


def phi_log_phi(phi):
    phi = np.asarray(phi, dtype=float)
    out = np.zeros_like(phi)
    nz = phi != 0.0
    out[nz] = phi[nz] * np.log(np.abs(phi[nz]))
    return out
