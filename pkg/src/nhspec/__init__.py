"""Spectral solvers for the logarithmic radial Schroedinger equation and
PT-symmetric x^m Hamiltonians, with Gauss rules for exp(-c x^2) weights."""
from ._core import COMPILED
from .eigensolver import PAIR, REAL, SpectrumReport, classify, eig_dense
from .lognls import LogNlsConfig, LogNlsSolution, exact_ground_state, solve_state
from .ptspec import (
    ConfinedProblem,
    InfiniteProblem,
    asymptotic_envelope,
    build_confined,
    build_infinite,
    residual_delta,
    scan_confined,
)
from .quadrature import WeightSpec, build_monic_chain, composite_integrate, gauss_rule, integrate

__version__ = "0.1.0"

__all__ = [
    "COMPILED",
    "PAIR",
    "REAL",
    "SpectrumReport",
    "classify",
    "eig_dense",
    "LogNlsConfig",
    "LogNlsSolution",
    "exact_ground_state",
    "solve_state",
    "ConfinedProblem",
    "InfiniteProblem",
    "asymptotic_envelope",
    "build_confined",
    "build_infinite",
    "residual_delta",
    "scan_confined",
    "WeightSpec",
    "build_monic_chain",
    "composite_integrate",
    "gauss_rule",
    "integrate",
]
