"""PT-symmetric Hamiltonians H = -D^2 + i x^m (m odd).

Two discretizations:

* confined: Dirichlet box [-T, T], cosine/sine basis, full opposite-parity coupling;
* infinite: Hermite functions in the scaled coordinate y = x / gamma, where
  the operator becomes h = -D_y^2 + i gamma^(m+2) y^m with eigenvalue E0 = E gamma^2.

Because x^m only couples Hermite indices within m of each other, the part of
h a that leaks out of a truncated basis is known exactly and gives the
residual Delta of an approximate eigenpair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .basis import (
    BoxBasisSpec,
    HermiteBasisSpec,
    box_potential_matrix,
    hermite_kinetic_matrix,
    hermite_phi_table,
    hermite_x_power,
)
from .eigensolver import REAL, SpectrumReport, classify, eig_pt

__all__ = [
    "ConfinedProblem",
    "InfiniteProblem",
    "ResidualReport",
    "AsymptoticEnvelope",
    "ScanCell",
    "ScanFlip",
    "ScanResult",
    "InfiniteState",
    "build_confined",
    "solve_confined",
    "scan_confined",
    "parity_defect",
    "build_infinite",
    "solve_infinite",
    "residual_delta",
    "infinite_states",
    "hermite_wavefunction",
    "asymptotic_envelope",
]


def _check_odd(m_pow):
    if int(m_pow) != m_pow or m_pow < 1 or m_pow % 2 == 0:
        raise ValueError(f"potential exponent must be a positive odd integer, got {m_pow}")


# -- confined -------------------------------------------------------------------

@dataclass(frozen=True)
class ConfinedProblem:
    T: float
    N: int
    m_pow: int = 1

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"confined basis needs N >= 2, got {self.N}")
        if not self.T > 0:
            raise ValueError(f"half-width T must be positive, got {self.T}")
        _check_odd(self.m_pow)

    @property
    def basis(self) -> BoxBasisSpec:
        return BoxBasisSpec(self.T, self.N)


def build_confined(problem: ConfinedProblem, potential: bool = True) -> np.ndarray:
    """Complex-symmetric matrix diag(k^2 pi^2 / 4T^2) + i V.

    ``potential=False`` drops the coupling (free particle in the box).
    """
    k = np.arange(1, problem.N + 1)
    H = np.diag(k * k * math.pi**2 / (4.0 * problem.T**2)).astype(complex)
    if potential:
        H += 1j * box_potential_matrix(problem.basis, problem.m_pow)
    return H


def solve_confined(problem: ConfinedProblem, tol_im=None, tol_pair=None) -> SpectrumReport:
    return classify(eig_pt(build_confined(problem)), tol_im, tol_pair)


def parity_defect(vector) -> float:
    """Distance from the unbroken-PT coefficient pattern.

    The vector is phased so its largest cosine-type (odd index) coefficient is
    real positive; the result is max(|Im cos-block|, |Re sin-block|).
    """
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    cos_block, sin_block = v[0::2], v[1::2]
    lead = cos_block[np.argmax(np.abs(cos_block))]
    if lead == 0:
        return math.inf
    v = v * (abs(lead) / lead)
    cos_block, sin_block = v[0::2], v[1::2]
    return float(max(np.max(np.abs(cos_block.imag), initial=0.0), np.max(np.abs(sin_block.real), initial=0.0)))


@dataclass(frozen=True, eq=False)
class ScanCell:
    T: float
    N: int
    eigenvalues: np.ndarray
    classes: tuple
    n_pairs: int


@dataclass(frozen=True)
class ScanFlip:
    """State ``index`` (by real part in ``before``) changes class between neighbouring cells."""

    axis: str
    before: tuple
    after: tuple
    index: int
    from_class: str
    to_class: str


@dataclass(frozen=True, eq=False)
class ScanResult:
    m_pow: int
    T_values: tuple
    N_values: tuple
    cells: dict = field(repr=False)
    flips: list = field(default_factory=list)

    def cell(self, T, N) -> ScanCell:
        return self.cells[(T, N)]


def _scan_cell(args) -> ScanCell:
    T, N, m_pow = args
    rep = solve_confined(ConfinedProblem(T, N, m_pow))
    return ScanCell(T, N, rep.eigenvalues, rep.classes, rep.n_pairs)


def _match(a: ScanCell, b: ScanCell):
    """Pairs (i, j) matching states of ``a`` and ``b`` by nearest real part."""
    cost = np.abs(a.eigenvalues.real[:, None] - b.eigenvalues.real[None, :])
    rows, cols = linear_sum_assignment(cost)
    return sorted(zip(rows.tolist(), cols.tolist()))


def _flips(axis, a: ScanCell, b: ScanCell) -> list:
    out = []
    for i, j in _match(a, b):
        if a.classes[i] != b.classes[j]:
            out.append(ScanFlip(axis, (a.T, a.N), (b.T, b.N), i, a.classes[i], b.classes[j]))
    return out


def scan_confined(m_pow, T_list, N_list, executor=None) -> ScanResult:
    """Classify every (T, N) cell and report class flips along each axis.

    ``executor`` (anything with an order-preserving ``map``) parallelizes the
    cells; results do not depend on it.
    """
    _check_odd(m_pow)
    T_list, N_list = tuple(T_list), tuple(N_list)
    if not T_list or not N_list:
        raise ValueError("scan needs at least one T and one N")
    jobs = [(T, N, m_pow) for T in T_list for N in N_list]
    mapper = map if executor is None else executor.map
    cells = {(c.T, c.N): c for c in mapper(_scan_cell, jobs)}
    flips = []
    for N in N_list:
        for T0, T1 in zip(T_list, T_list[1:]):
            flips += _flips("T", cells[(T0, N)], cells[(T1, N)])
    for T in T_list:
        for N0, N1 in zip(N_list, N_list[1:]):
            flips += _flips("N", cells[(T, N0)], cells[(T, N1)])
    return ScanResult(m_pow, T_list, N_list, cells, flips)


# -- infinite interval ------------------------------------------------------------

@dataclass(frozen=True)
class InfiniteProblem:
    m_pow: int = 3
    alpha: float = 1.0
    gamma: float = 0.5
    N: int = 90

    def __post_init__(self):
        _check_odd(self.m_pow)
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.N < 1:
            raise ValueError(f"basis size must be >= 1, got {self.N}")

    @property
    def band(self) -> int:
        return self.m_pow

    @property
    def basis(self) -> HermiteBasisSpec:
        return HermiteBasisSpec(self.alpha, self.N)


def _scaled_operator(problem: InfiniteProblem, rows: int, cols: int) -> np.ndarray:
    size = max(rows, cols)
    spec = HermiteBasisSpec(problem.alpha, size)
    H = hermite_kinetic_matrix(spec, size).astype(complex)
    H += 1j * problem.gamma ** (problem.m_pow + 2) * hermite_x_power(spec, problem.m_pow, size)
    return H[:rows, :cols]


def build_infinite(problem: InfiniteProblem) -> np.ndarray:
    """Truncated scaled operator; its eigenvalues are E0 = E gamma^2."""
    return _scaled_operator(problem, problem.N, problem.N)


@dataclass(frozen=True, eq=False)
class ResidualReport:
    E0: complex
    Delta: float
    a: np.ndarray = field(repr=False)
    leak: np.ndarray = field(repr=False)


def residual_delta(problem: InfiniteProblem, E0, a) -> ResidualReport:
    """Delta = <chi|chi>, chi = sum_{m=N}^{N+M-1} (h a)_m phi_m, in E0 units.

    ``a`` must have unit norm.  Inside the basis (h - E0) a vanishes for an
    eigenpair, so chi is the whole residual and is orthogonal to the basis.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (problem.N,):
        raise ValueError(f"coefficient vector must have length {problem.N}, got shape {a.shape}")
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"coefficient vector must be unit norm, got |a| = {norm:.12g}")
    N, M = problem.N, problem.band
    leak_block = _scaled_operator(problem, N + M, N)[N:]
    leak = leak_block @ a
    return ResidualReport(complex(E0), float(np.vdot(leak, leak).real), a, leak)


@dataclass(frozen=True, eq=False)
class InfiniteState:
    E: complex
    E0: complex
    cls: str
    Delta: float
    a: np.ndarray = field(repr=False)


def solve_infinite(problem: InfiniteProblem, tol_im=None, tol_pair=None) -> SpectrumReport:
    return classify(eig_pt(build_infinite(problem)), tol_im, tol_pair)


def infinite_states(problem: InfiniteProblem, k: int | None = 10, include_pairs: bool = False) -> list[InfiniteState]:
    """Lowest ``k`` states (REAL only unless ``include_pairs``) with physical E and Delta."""
    rep = solve_infinite(problem)
    g2 = problem.gamma**2
    out = []
    for j, lam in enumerate(rep.eigenvalues):
        if rep.classes[j] != REAL and not include_pairs:
            continue
        vec = rep.eigenvectors[:, j]
        res = residual_delta(problem, lam, vec / np.linalg.norm(vec))
        E = complex(lam) / g2
        out.append(InfiniteState(E.real if rep.classes[j] == REAL else E, complex(lam), rep.classes[j], res.Delta, vec))
        if k is not None and len(out) >= k:
            break
    return out


def hermite_wavefunction(problem: InfiniteProblem, a, x) -> np.ndarray:
    """psi(x) = sum_n a_n phi_n(x / gamma) in the physical coordinate."""
    a = np.asarray(a, dtype=complex)
    y = np.atleast_1d(np.asarray(x, dtype=float)) / problem.gamma
    table = hermite_phi_table(HermiteBasisSpec(problem.alpha, a.size), y)
    return a @ table


# -- asymptotics -------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticEnvelope:
    """|psi| ~ exp(-Re(b) |x|^p) |x|^q for H = -D^2 + i x^m at large |x|."""

    m_pow: int
    p: float
    b: complex
    q: float

    def magnitude(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        return np.exp(-self.b.real * ax**self.p) * ax**self.q

    def log_magnitude(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        return -self.b.real * ax**self.p + self.q * np.log(ax)


def asymptotic_envelope(m_pow: int, half_line: int = 1) -> AsymptoticEnvelope:
    """Decay law on x > 0 (``half_line=+1``) or x < 0 (``-1``).

    psi = exp(-b x^p) x^q with b^2 p^2 = i x^m balancing gives p = (m+2)/2 and
    b = sqrt(2)(1 +- i)/(m+2); the next order fixes q = -m/4.
    """
    _check_odd(m_pow)
    if half_line not in (1, -1):
        raise ValueError("half_line must be +1 or -1")
    p = (m_pow + 2) / 2.0
    b = math.sqrt(2.0) / (m_pow + 2) * complex(1.0, float(half_line))
    return AsymptoticEnvelope(m_pow, p, b, -m_pow / 4.0)

