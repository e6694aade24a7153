"""Logarithmic radial Schroedinger equation with a Coulomb potential.

    (-1/2 D^2 - (1/r) D - 1/r - s ln|psi|) psi = E psi,    s > 0.

In the scaled variable x = sqrt(s) r the equation becomes

    (-1/2 D^2 - (1/x) D - kappa/x - ln|psi|) psi = E_hat psi,   kappa = 1/sqrt(s),  E = s E_hat.

Writing psi = phi exp(-c x^2 / 2) gives

    H0 phi + V(phi) = (E_hat - 3c/2) phi,
    H0 = -(D^2 + (2/x) D)/2 + c x D,
    V(phi) = (c(1-c) x^2/2 - kappa/x - ln|phi|) phi,

and H0 is diagonal on the Laguerre members L(n-1, 1/2, c x^2) with
eigenvalue 2c(n-1).  Excited states follow from a damped
Brillouin-Wigner-type fixed point around one chosen member.

Scale bookkeeping: if psi solves the equation with eigenvalue E, then
lambda * psi solves it with E - s ln(lambda).  Iterates are kept at unit
coefficient norm, which in the orthonormal basis means int x^2 psi^2 dx = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._core import kernels
from .basis import (
    LaguerreBasisSpec,
    h0_diagonal,
    laguerre_orthonormal,
    laguerre_series,
    laguerre_series_derivatives,
)
from .quadrature import WeightSpec, composite_rule

__all__ = [
    "LogNlsConfig",
    "IterationState",
    "LogNlsSolution",
    "ConvergenceError",
    "WrongStateError",
    "exact_ground_state",
    "eq1_residual",
    "apply_vhat",
    "iterate_once",
    "initial_state",
    "solve_state",
    "find_nodes",
    "phi_zeros",
    "table_preset",
    "TABLE_S_VALUES",
]

TABLE_S_VALUES = (0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0)

# psi ~ exp(-x^2/2) at large x; beyond this exponent the tail is negligible
_TAIL_EXPONENT = 40.0
_GRID_STEP = 1e-3
_LOBE_FLOOR = 1e-3


class ConvergenceError(RuntimeError):
    def __init__(self, message, history=None, state=None):
        super().__init__(message)
        self.history = history or []
        self.state = state


class WrongStateError(RuntimeError):
    def __init__(self, message, found, requested, solution=None):
        super().__init__(message)
        self.found = found
        self.requested = requested
        self.solution = solution


@dataclass(frozen=True)
class LogNlsConfig:
    """One solve: strength ``s``, target ``state`` (state - 1 nodes), basis (N, c), damping ``nu``."""

    s: float
    state: int = 1
    N: int = 20
    c: float = 1.0
    nu: float = 0.8
    tol_coeff: float = 1e-9
    max_iter: int = 2000
    quad_order: int | None = None

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not 0 < self.nu <= 1:
            raise ValueError(f"damping nu must lie in (0, 1], got {self.nu}")
        if not 1 <= self.state <= self.N:
            raise ValueError(f"state {self.state} needs 1 <= state <= N = {self.N}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")

    @property
    def mu(self) -> float:
        return math.sqrt(self.s)

    @property
    def coulomb(self) -> float:
        """Strength of the -kappa/x term in scaled units."""
        return 1.0 / self.mu

    @property
    def basis(self) -> LaguerreBasisSpec:
        return LaguerreBasisSpec(self.c, self.N)

    @property
    def panel_order(self) -> int:
        # products L_m * phi * x^2 reach degree 4N; keep panels exact on the polynomial part
        return self.quad_order if self.quad_order is not None else max(40, 2 * self.N + 2)

    @property
    def x_max(self) -> float:
        return math.sqrt(2.0 * _TAIL_EXPONENT / self.c)


@dataclass(frozen=True, eq=False)
class IterationState:
    a: np.ndarray
    E1: float = 0.0
    iteration: int = 0
    change: float = math.inf


@dataclass(frozen=True, eq=False)
class LogNlsSolution:
    """Converged state.

    ``E`` is the eigenvalue for int r^2 psi^2 dr = 1 and ``E_hat = E / s``.
    ``E_unit_coeff`` uses unit coefficient norm, ``E_origin`` the scaling psi(0) = 1
    (the convention of the closed-form ground state).
    """

    config: LogNlsConfig
    a: np.ndarray
    E: float
    E_hat: float
    E_unit_coeff: float
    E_origin: float
    N0: float
    nodes_r: tuple
    iterations: int
    history: list = field(repr=False, default_factory=list)

    def wavefunction(self, r):
        """psi(r), psi'(r), psi''(r) at physical normalization."""
        cfg = self.config
        mu, c = cfg.mu, cfg.c
        x = mu * np.asarray(r, dtype=float)
        f, f1, f2 = laguerre_series_derivatives(cfg.basis, self.a, x)
        g = np.exp(-0.5 * c * x * x)
        psi = f * g
        d1 = (f1 - c * x * f) * g
        d2 = (f2 - 2 * c * x * f1 + (c * c * x * x - c) * f) * g
        return self.N0 * psi, self.N0 * mu * d1, self.N0 * mu * mu * d2

    def residual(self, r):
        psi, d1, d2 = self.wavefunction(r)
        return eq1_residual(psi, d1, d2, r, self.E, self.config.s)

    def as_dict(self) -> dict:
        return {
            "s": self.config.s,
            "state": self.config.state,
            "N": self.config.N,
            "c": self.config.c,
            "nu": self.config.nu,
            "E": self.E,
            "E_hat": self.E_hat,
            "E_unit_coeff": self.E_unit_coeff,
            "E_origin": self.E_origin,
            "N0": self.N0,
            "nodes_r": list(self.nodes_r),
            "iterations": self.iterations,
            "coefficients": [float(v) for v in self.a],
            "history": [{"E1": e, "change": d} for e, d in self.history],
        }


def table_preset(state: int, s: float) -> tuple[int, float]:
    """Basis size and scale used for the tabulated excited states.

    The ground state takes c = 1, the Gaussian factor of the closed-form solution.
    """
    if state == 1:
        return 20, 1.0
    if state == 3:
        return 25, (0.59 if s in (0.5, 1.0) else 0.5)
    if s >= 9:
        c = 0.5
    elif s in (0.05, 0.5):
        c = 1.5
    else:
        c = 1.0
    return 20, c


def exact_ground_state(s: float):
    """Closed-form ground state psi = exp(-s r^2/2 - r), E = -1/2 + 3s/2 (unnormalized).

    Returns (E, psi) with psi(r, deriv=0) giving the value or a derivative.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")

    def psi(r, deriv: int = 0):
        r = np.asarray(r, dtype=float)
        value = np.exp(-0.5 * s * r * r - r)
        slope = -(s * r + 1.0)
        if deriv == 0:
            return value
        if deriv == 1:
            return slope * value
        if deriv == 2:
            return (slope * slope - s) * value
        raise ValueError("deriv must be 0, 1 or 2")

    return -0.5 + 1.5 * s, psi


def eq1_residual(psi, dpsi, d2psi, r, E, s):
    """(-psi''/2 - psi'/r - psi/r - s ln|psi| psi) - E psi, pointwise."""
    psi = np.asarray(psi, dtype=float)
    r = np.asarray(r, dtype=float)
    plog = np.asarray(kernels.phi_log_phi(np.ascontiguousarray(np.atleast_1d(psi)))).reshape(psi.shape)
    return -0.5 * d2psi - dpsi / r - psi / r - s * plog - E * psi


def phi_zeros(basis: LaguerreBasisSpec, a, x_max: float, step: float = _GRID_STEP) -> np.ndarray:
    """All sign changes of the coefficient series on (0, x_max], refined by bisection."""
    grid = np.arange(step, x_max + step, step)
    f = laguerre_series(basis, a, grid)
    idx = np.nonzero(np.signbit(f[:-1]) != np.signbit(f[1:]))[0]
    if idx.size == 0:
        return np.empty(0)
    coef = np.ascontiguousarray(np.asarray(a, dtype=float) * math.sqrt(2.0 * basis.c**1.5))
    lo = np.ascontiguousarray(grid[idx])
    hi = np.ascontiguousarray(grid[idx + 1])
    return np.asarray(kernels.refine_brackets(coef, basis.c, lo, hi, 1e-14))


def _significant_zeros(basis: LaguerreBasisSpec, a, x_max: float, zeros=None) -> np.ndarray:
    """Drop outer zeros whose outer lobe of |psi| is negligible (basis-truncation ripples)."""
    zeros = phi_zeros(basis, a, x_max) if zeros is None else zeros
    if zeros.size == 0:
        return zeros
    grid = np.arange(0.0, x_max + _GRID_STEP, _GRID_STEP)
    psi = np.abs(laguerre_series(basis, a, grid)) * np.exp(-0.5 * basis.c * grid * grid)
    peak = psi.max()
    keep = zeros.size
    while keep > 0:
        tail = psi[grid > zeros[keep - 1]]
        if tail.size and tail.max() >= _LOBE_FLOOR * peak:
            break
        keep -= 1
    return zeros[:keep]


def find_nodes(a, config: LogNlsConfig) -> list[float]:
    """Physical nodes of the state, ascending, in the radial variable r."""
    zeros = _significant_zeros(config.basis, a, config.x_max)
    return [float(z) / config.mu for z in zeros]


@dataclass(frozen=True, eq=False)
class VhatProjection:
    projections: np.ndarray
    breakpoints: tuple
    n_nodes: int


def _breakpoints(zeros) -> list[float]:
    out: list[float] = []
    for z in zeros:
        if out and z - out[-1] < 1e-10:  # near-double root: one panel edge is enough
            continue
        out.append(float(z))
    return out


def apply_vhat(config: LogNlsConfig, a, zeros=None) -> VhatProjection:
    """<L_m | V(phi)> in the x^2 exp(-c x^2) inner product, m = 1..N (orthonormal members).

    Quadrature panels break at the zeros of phi, where phi ln|phi| has a
    singular derivative; the product itself is evaluated as a whole and is 0
    at a zero.
    """
    a = np.asarray(a, dtype=float)
    basis = config.basis
    if zeros is None:
        zeros = phi_zeros(basis, a, config.x_max)
    bps = _breakpoints(zeros)
    rule = composite_rule(WeightSpec(config.c, 0.0, math.inf), bps, config.panel_order)
    x = rule.nodes
    B = laguerre_orthonormal(basis, x)
    phi = a @ B
    plog = np.asarray(kernels.phi_log_phi(np.ascontiguousarray(phi)))
    c = config.c
    vphi = (0.5 * c * (1.0 - c) * x * x - config.coulomb / x) * phi - plog
    proj = B @ (rule.weights * x * x * vphi)
    return VhatProjection(proj, tuple(bps), x.size)


def initial_state(config: LogNlsConfig) -> IterationState:
    a = np.zeros(config.N)
    a[config.state - 1] = 1.0
    return IterationState(a)


def iterate_once(config: LogNlsConfig, state: IterationState) -> IterationState:
    """One damped step around basis member n = config.state.

    E1 = <L_n|V(phi)> / a_n, then for m != n
        a_m <- (E1 a_m - <L_m|V(phi)>) / (2c(m - n)),
    blended as a_new ~ a_plain + (1 - nu) a_old and renormalized with a_n > 0.
    """
    n = config.state
    a = state.a
    if abs(a[n - 1]) < 1e-8:
        raise ConvergenceError(
            f"target coefficient a_{n} = {a[n - 1]:.3e} collapsed; the iteration lost state {n}",
            state=state,
        )
    proj = apply_vhat(config, a).projections
    E1 = proj[n - 1] / a[n - 1]
    m = np.arange(1, config.N + 1)
    off = m != n
    plain = a.copy()
    plain[off] = (E1 * a[off] - proj[off]) / (2.0 * config.c * (m[off] - n))
    new = plain + (1.0 - config.nu) * a
    new /= np.linalg.norm(new)
    if new[n - 1] < 0:
        new = -new
    return IterationState(new, float(E1), state.iteration + 1, float(np.max(np.abs(new - a))))


def solve_state(config: LogNlsConfig, start: IterationState | None = None) -> LogNlsSolution:
    """Iterate from a = e_n until max|a_new - a_old| < tol_coeff."""
    state = initial_state(config) if start is None else start
    history = []
    while state.iteration < config.max_iter:
        state = iterate_once(config, state)
        history.append((state.E1, state.change))
        if not math.isfinite(state.change):
            break
        if state.change < config.tol_coeff:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {config.max_iter} iterations (last change {state.change:.3e})",
            history,
            state,
        )
    if not state.change < config.tol_coeff:
        raise ConvergenceError(f"iteration diverged at step {state.iteration}", history, state)

    n, c, s = config.state, config.c, config.s
    e_hat_unit = h0_diagonal(config.basis, n) + state.E1 + 1.5 * c
    E_unit = s * e_hat_unit
    N0 = s**0.75
    E = E_unit - s * math.log(N0)
    phi0 = float(laguerre_series(config.basis, state.a, [0.0])[0])
    nodes = tuple(find_nodes(state.a, config))
    solution = LogNlsSolution(
        config=config,
        a=state.a,
        E=E,
        E_hat=E / s,
        E_unit_coeff=E_unit,
        E_origin=E_unit + s * math.log(abs(phi0)),
        N0=N0,
        nodes_r=nodes,
        iterations=state.iteration,
        history=history,
    )
    if len(nodes) != n - 1:
        raise WrongStateError(
            f"converged to a state with {len(nodes)} nodes, expected {n - 1}", len(nodes), n - 1, solution
        )
    return solution
