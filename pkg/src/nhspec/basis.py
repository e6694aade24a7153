"""Basis families: generalized Laguerre functions on [0, inf), Hermite
functions on the line, and the Dirichlet cosine/sine box basis on [-T, T].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from ._core import kernels

__all__ = [
    "LaguerreBasisSpec",
    "HermiteBasisSpec",
    "BoxBasisSpec",
    "laguerre_eval",
    "laguerre_norm",
    "laguerre_orthonormal",
    "laguerre_series",
    "laguerre_series_derivatives",
    "h0_diagonal",
    "hermite_phi_eval",
    "hermite_phi_table",
    "hermite_x_action",
    "hermite_x_matrix",
    "hermite_x_power",
    "hermite_kinetic",
    "hermite_kinetic_matrix",
    "box_function",
    "box_wavenumber",
    "box_matrix_element",
    "box_potential_matrix",
]


# -- Laguerre -----------------------------------------------------------------

@dataclass(frozen=True)
class LaguerreBasisSpec:
    """Members n = 1..N are L(n-1, 1/2, c x^2) with weight x^2 exp(-c x^2)."""

    c: float
    N: int

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if self.N < 1:
            raise ValueError(f"basis size must be >= 1, got {self.N}")

    def check_index(self, n: int):
        if not 1 <= n <= self.N:
            raise IndexError(f"basis index {n} outside 1..{self.N}")


def laguerre_eval(spec: LaguerreBasisSpec, n: int, x):
    """L(n-1, 1/2, c x^2) by the upward three-term recurrence."""
    spec.check_index(n)
    t = spec.c * np.square(np.asarray(x, dtype=float))
    l0 = np.ones_like(t)
    if n == 1:
        return l0
    l1 = 1.5 - t
    for k in range(1, n - 1):
        l0, l1 = l1, ((2 * k + 1.5 - t) * l1 - (k + 0.5) * l0) / (k + 1)
    return l1


def laguerre_norm(spec: LaguerreBasisSpec, n: int) -> float:
    """N_n = Gamma(n + 1/2) / (2 c^{3/2} (n-1)!)."""
    spec.check_index(n)
    return math.exp(gammaln(n + 0.5) - gammaln(n)) / (2.0 * spec.c**1.5)


def h0_diagonal(spec: LaguerreBasisSpec, n: int) -> float:
    """Eigenvalue 2c(n-1) of H0 = -(D^2 + (2/x) D)/2 + c x D on member n."""
    spec.check_index(n)
    return 2.0 * spec.c * (n - 1)


def _orthonormal_scale(c: float) -> float:
    # l_k(t) is orthonormal in t^{1/2} e^{-t} dt; x^2 dx = t^{1/2} dt / (2 c^{3/2})
    return math.sqrt(2.0 * c**1.5)


def laguerre_orthonormal(spec: LaguerreBasisSpec, x) -> np.ndarray:
    """Rows m = 0..N-1 hold L(m, 1/2, c x^2) / sqrt(N_{m+1}) at ``x``."""
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    table = np.asarray(kernels.laguerre_table(spec.c * x * x, spec.N))
    return table * _orthonormal_scale(spec.c)


def laguerre_series(spec: LaguerreBasisSpec, coef, x) -> np.ndarray:
    """sum_m coef[m] L(m, 1/2, c x^2) / sqrt(N_{m+1})."""
    coef = np.ascontiguousarray(np.asarray(coef, dtype=float)) * _orthonormal_scale(spec.c)
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    return np.asarray(kernels.laguerre_series(coef, spec.c * x * x))


def laguerre_series_derivatives(spec: LaguerreBasisSpec, coef, x):
    """Value, first and second x-derivative of the orthonormal series.

    Uses d/dt L_k^(a) = -L_{k-1}^(a+1) and t = c x^2.
    """
    x = np.asarray(x, dtype=float)
    t = spec.c * x * x
    f = np.zeros_like(t)
    ft = np.zeros_like(t)
    ftt = np.zeros_like(t)
    for m, a in enumerate(np.asarray(coef, dtype=float)):
        if a == 0.0:
            continue
        scale = a / math.sqrt(laguerre_norm(spec, m + 1))
        f += scale * eval_genlaguerre(m, 0.5, t)
        if m >= 1:
            ft -= scale * eval_genlaguerre(m - 1, 1.5, t)
        if m >= 2:
            ftt += scale * eval_genlaguerre(m - 2, 2.5, t)
    c = spec.c
    return f, 2 * c * x * ft, 2 * c * ft + 4 * c * c * x * x * ftt


# -- Hermite ------------------------------------------------------------------

@dataclass(frozen=True)
class HermiteBasisSpec:
    """Orthonormal Hermite functions phi_n(x), n = 0..N-1, at scale alpha."""

    alpha: float
    N: int

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.N < 1:
            raise ValueError(f"basis size must be >= 1, got {self.N}")


def hermite_phi_table(spec: HermiteBasisSpec, x, nmax: int | None = None) -> np.ndarray:
    """phi_0..phi_{nmax-1} at ``x`` via the normalized recurrence.

    phi_n = (alpha/pi)^{1/4} H_n(sqrt(alpha) x) exp(-alpha x^2 / 2) / sqrt(2^n n!)
    """
    nmax = spec.N if nmax is None else nmax
    y = math.sqrt(spec.alpha) * np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((nmax, y.size))
    out[0] = (spec.alpha / math.pi) ** 0.25 * np.exp(-0.5 * y * y)
    if nmax > 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * y * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_phi_eval(spec: HermiteBasisSpec, n: int, x):
    if not 0 <= n < spec.N:
        raise IndexError(f"Hermite index {n} outside 0..{spec.N - 1}")
    values = hermite_phi_table(spec, x, n + 1)[n]
    return values if np.ndim(x) else float(values[0])


def hermite_x_action(spec: HermiteBasisSpec) -> list[tuple[int, int, float]]:
    """Couplings (n, m, <phi_m|x|phi_n>) from x phi_n = (sqrt(n+1) phi_{n+1} + sqrt(n) phi_{n-1}) / sqrt(2 alpha).

    Only partners inside 0..N-1 are listed.
    """
    if spec.N < 2:
        raise ValueError("x-action needs at least two basis functions")
    s = math.sqrt(2.0 * spec.alpha)
    table = []
    for n in range(spec.N):
        if n > 0:
            table.append((n, n - 1, math.sqrt(n) / s))
        if n + 1 < spec.N:
            table.append((n, n + 1, math.sqrt(n + 1) / s))
    return table


def hermite_x_matrix(spec: HermiteBasisSpec, size: int | None = None) -> np.ndarray:
    """<phi_m|x|phi_n> for m, n < size (tridiagonal, exact)."""
    size = spec.N if size is None else size
    off = np.sqrt(np.arange(1, size) / (2.0 * spec.alpha))
    return np.diag(off, 1) + np.diag(off, -1)


def hermite_x_power(spec: HermiteBasisSpec, power: int, size: int | None = None) -> np.ndarray:
    """<phi_m|x^power|phi_n> for m, n < size, exact despite truncation."""
    size = spec.N if size is None else size
    big = hermite_x_matrix(spec, size + power)
    return np.linalg.matrix_power(big, power)[:size, :size]


def hermite_kinetic(spec: HermiteBasisSpec) -> list[tuple[int, int, float]]:
    """Couplings of -D^2 phi_n = (alpha(2n+1) - alpha^2 x^2) phi_n at offsets 0, +-2."""
    K = hermite_kinetic_matrix(spec)
    return [(n, m, float(K[m, n])) for n in range(spec.N) for m in (n - 2, n, n + 2) if 0 <= m < spec.N]


def hermite_kinetic_matrix(spec: HermiteBasisSpec, size: int | None = None) -> np.ndarray:
    size = spec.N if size is None else size
    n = np.arange(size)
    x2 = hermite_x_power(spec, 2, size)
    return np.diag(spec.alpha * (2 * n + 1.0)) - spec.alpha**2 * x2


# -- box ----------------------------------------------------------------------

@dataclass(frozen=True)
class BoxBasisSpec:
    """omega_k on [-T, T], k = 1..N: cos(k pi x / 2T) for odd k, sin(k pi x / 2T) for even k."""

    T: float
    N: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"half-width T must be positive, got {self.T}")
        if self.N < 1:
            raise ValueError(f"basis size must be >= 1, got {self.N}")


def box_wavenumber(spec: BoxBasisSpec, k: int) -> float:
    return k * math.pi / (2.0 * spec.T)


def box_function(spec: BoxBasisSpec, k: int, x, normalized: bool = True):
    """omega_k(x), divided by sqrt(T) when ``normalized``."""
    if not 1 <= k <= spec.N:
        raise IndexError(f"box index {k} outside 1..{spec.N}")
    arg = box_wavenumber(spec, k) * np.asarray(x, dtype=float)
    values = np.cos(arg) if k % 2 else np.sin(arg)
    return values / math.sqrt(spec.T) if normalized else values


def _exp_moment(m: int, q: float, T: float) -> complex:
    """int_{-T}^{T} x^m exp(i q x) dx by repeated integration by parts (q != 0)."""
    e_plus, e_minus = complex(math.cos(q * T), math.sin(q * T)), complex(math.cos(q * T), -math.sin(q * T))
    value = 2.0 * math.sin(q * T) / q
    for j in range(1, m + 1):
        edge = (T**j * e_plus - (-T) ** j * e_minus) / (1j * q)
        value = edge - j / (1j * q) * value
    return value


def box_matrix_element(spec: BoxBasisSpec, m_pow: int, i: int, j: int) -> float:
    """(1/T) int_{-T}^{T} x^m_pow omega_i omega_j dx in closed form.

    With A the sine wavenumber and B the cosine one,
    2 cos(Bx) sin(Ax) = Im[exp(i(A+B)x) + exp(i(A-B)x)].
    """
    if m_pow < 1 or m_pow % 2 == 0:
        raise ValueError(f"potential exponent must be a positive odd integer, got {m_pow}")
    for k in (i, j):
        if not 1 <= k <= spec.N:
            raise IndexError(f"box index {k} outside 1..{spec.N}")
    if (i + j) % 2 == 0:
        return 0.0
    k_cos, k_sin = (i, j) if i % 2 else (j, i)
    A = box_wavenumber(spec, k_sin)
    B = box_wavenumber(spec, k_cos)
    im = (_exp_moment(m_pow, A + B, spec.T) + _exp_moment(m_pow, A - B, spec.T)).imag
    return 0.5 * im / spec.T


def box_potential_matrix(spec: BoxBasisSpec, m_pow: int) -> np.ndarray:
    """Real symmetric matrix of box_matrix_element over all index pairs."""
    V = np.zeros((spec.N, spec.N))
    for i in range(1, spec.N + 1):
        for j in range(i + 1, spec.N + 1, 2):
            V[i - 1, j - 1] = V[j - 1, i - 1] = box_matrix_element(spec, m_pow, i, j)
    return V
