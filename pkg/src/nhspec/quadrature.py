"""Gauss rules for the weight exp(-c x^2) on finite or semi-infinite intervals.

The monic orthogonal polynomials p_k are generated by the three-term
recurrence

    p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x),   b_k = gamma_k / gamma_{k-1},

with gamma_k = int p_k^2 w dx.  Integrating by parts against exp(-c x^2)
turns every inner product the recurrence needs into a boundary term:

    gamma_k = (k / 2c) gamma_{k-1} - (1/2c) [w p_{k-1} p_k]_a^b
    a_k     = -(1 / 2c gamma_k) [w p_k^2]_a^b

so the chain only ever evaluates p_k at the two endpoints.  The first
identity subtracts two nearly equal numbers on short panels, so the chain is
accumulated in multiprecision arithmetic.  A chain is accepted only when two
runs at different working precisions agree to double precision.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import gmpy2
import numpy as np

from ._core import kernels

__all__ = [
    "QuadratureError",
    "WeightSpec",
    "MonicChain",
    "QuadratureRule",
    "CompositeRule",
    "build_monic_chain",
    "gauss_rule",
    "weighted_gauss_rule",
    "integrate",
    "composite_rule",
    "composite_integrate",
]

_GUARD_BITS = 64
_MAX_BITS = 1 << 14
# starting precision per chain shape, learned from the last successful build
_bits_hint: dict = {}


class QuadratureError(ArithmeticError):
    """Raised when a rule cannot be built or applied."""


@dataclass(frozen=True)
class WeightSpec:
    """Weight exp(-c x^2) restricted to (a, b); either end may be infinite."""

    c: float
    a: float = 0.0
    b: float = math.inf

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"weight exponent c must be positive and finite, got {self.c}")
        if math.isnan(self.a) or math.isnan(self.b) or not self.a < self.b:
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")
        if self.a == math.inf or self.b == -math.inf:
            raise ValueError(f"empty interval ({self.a}, {self.b})")

    def __call__(self, x):
        return np.exp(-self.c * np.square(x))


@dataclass(frozen=True, eq=False)
class MonicChain:
    """Recurrence data for p_0..p_K under a :class:`WeightSpec`.

    ``recurrence_a`` holds a_0..a_{K-1}, ``recurrence_b`` holds b_1..b_{K-1}
    and ``gamma`` holds gamma_0..gamma_{K-1}.
    """

    spec: WeightSpec
    recurrence_a: np.ndarray
    recurrence_b: np.ndarray
    gamma: np.ndarray
    precision_bits: int

    @property
    def degree(self) -> int:
        return len(self.recurrence_a)

    def _beta_full(self) -> np.ndarray:
        return np.concatenate(([0.0], self.recurrence_b))

    def evaluate(self, k: int, x) -> np.ndarray:
        """p_k at ``x`` via the recurrence."""
        if not 0 <= k <= self.degree:
            raise ValueError(f"k={k} outside chain of degree {self.degree}")
        x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
        pk, _, _ = kernels.monic_eval(x, self.recurrence_a, self._beta_full(), k)
        return np.asarray(pk)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    spec: WeightSpec

    @property
    def order(self) -> int:
        return len(self.nodes)

    def __call__(self, f) -> float:
        return integrate(self, f)


@dataclass(frozen=True, eq=False)
class CompositeRule:
    """Panels (b_0, b_1), (b_1, b_2), ... each carrying its own restricted-weight rule."""

    breakpoints: tuple
    panels: tuple

    @property
    def nodes(self) -> np.ndarray:
        return np.concatenate([p.nodes for p in self.panels])

    @property
    def weights(self) -> np.ndarray:
        return np.concatenate([p.weights for p in self.panels])

    def __call__(self, f) -> float:
        return float(sum(integrate(p, f) for p in self.panels))


def _mass(c, a, b):
    """int_a^b exp(-c x^2) dx in the active gmpy2 context."""
    rc = gmpy2.sqrt(c)
    half = gmpy2.sqrt(gmpy2.const_pi()) / (2 * rc)
    if a >= 0:  # both ends right of the peak: erfc avoids cancellation
        hi = gmpy2.erfc(rc * a)
        lo = gmpy2.mpfr(0) if math.isinf(b) else gmpy2.erfc(rc * b)
        return half * (hi - lo)
    if b <= 0:
        lo = gmpy2.erfc(-rc * b)
        hi = gmpy2.mpfr(0) if math.isinf(a) else gmpy2.erfc(-rc * a)
        return half * (lo - hi)
    ea = gmpy2.mpfr(-1) if math.isinf(a) else gmpy2.erf(rc * a)
    eb = gmpy2.mpfr(1) if math.isinf(b) else gmpy2.erf(rc * b)
    return half * (eb - ea)


def _chain_at_precision(spec: WeightSpec, K: int, bits: int):
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        c = gmpy2.mpfr(spec.c)
        two_c = 2 * c
        ends = []
        for e in (spec.a, spec.b):
            if math.isinf(e):
                ends.append(None)
            else:
                e = gmpy2.mpfr(e)
                ends.append((e, gmpy2.exp(-c * e * e)))

        gamma = [_mass(c, spec.a, spec.b)]
        alpha = []
        beta = []
        # endpoint values of p_{k-1}, p_k, keyed by endpoint index
        prev = [gmpy2.mpfr(0), gmpy2.mpfr(0)]
        cur = [gmpy2.mpfr(1), gmpy2.mpfr(1)]
        lost = 0.0
        for k in range(K):
            if k > 0:
                lead = k * gamma[k - 1] / two_c
                g = lead - _bracket_pair(ends, prev, cur) / two_c
                if g <= 0:
                    return None, float("inf")
                lost += max(0.0, math.log2(abs(float(lead / g))))
                gamma.append(g)
                beta.append(g / gamma[k - 1])
            a_k = -_bracket_sq(ends, cur) / (two_c * gamma[k])
            alpha.append(a_k)
            nxt = [gmpy2.mpfr(0), gmpy2.mpfr(0)]
            for i, end in enumerate(ends):
                if end is None:
                    continue
                t1 = (end[0] - a_k) * cur[i]
                t2 = beta[k - 1] * prev[i] if k > 0 else gmpy2.mpfr(0)
                nxt[i] = t1 - t2
                if nxt[i] != 0:
                    lost += max(0.0, math.log2(float(max(abs(t1), abs(t2)) / abs(nxt[i]))))
            prev, cur = cur, nxt
        return (
            np.array([float(v) for v in alpha]),
            np.array([float(v) for v in beta]),
            np.array([float(v) for v in gamma]),
        ), lost


def _bracket_pair(ends, prev, cur):
    out = gmpy2.mpfr(0)
    for i, sign in ((0, -1), (1, 1)):
        if ends[i] is not None:
            out += sign * ends[i][1] * prev[i] * cur[i]
    return out


def _bracket_sq(ends, cur):
    out = gmpy2.mpfr(0)
    for i, sign in ((0, -1), (1, 1)):
        if ends[i] is not None:
            out += sign * ends[i][1] * cur[i] * cur[i]
    return out


def _agree(d1, d2) -> bool:
    return all(np.allclose(u, v, rtol=1e-14, atol=1e-14 * max(1.0, float(np.max(np.abs(v), initial=0.0))))
               for u, v in zip(d1, d2))


@functools.lru_cache(maxsize=256)
def build_monic_chain(spec: WeightSpec, K: int) -> MonicChain:
    """Monic orthogonal chain p_0..p_K for ``spec`` from the boundary-term identities.

    The chain is accepted once two runs at different working precisions agree
    to double precision; the observed cancellation picks the next precision.
    """
    if K < 1:
        raise ValueError(f"chain degree must be >= 1, got {K}")
    shape = (K, math.isinf(spec.a), math.isinf(spec.b))
    bits = _bits_hint.get(shape, 128)
    while True:
        data, lost = _chain_at_precision(spec, K, bits)
        if data is not None and 2 * lost + _GUARD_BITS <= bits:
            check, _ = _chain_at_precision(spec, K, bits + _GUARD_BITS)
            if check is not None and _agree(data, check):
                _bits_hint[shape] = max(128, 64 * math.ceil((2 * lost + 2 * _GUARD_BITS) / 64))
                data = check
                break
        if bits >= _MAX_BITS:
            raise QuadratureError(f"monic chain for {spec} lost {lost:.0f} bits at {bits}-bit precision")
        want = 64 * math.ceil((2 * lost + 2 * _GUARD_BITS) / 64) if math.isfinite(lost) else 0
        bits = min(_MAX_BITS, max(2 * bits, want))
    alpha, beta, gamma = data
    if not (np.all(np.isfinite(gamma)) and np.all(gamma > 0)):
        raise QuadratureError(f"gamma under/overflowed converting chain for {spec} to double")
    for arr in (alpha, beta, gamma):
        arr.setflags(write=False)
    return MonicChain(spec, alpha, beta, gamma, bits + _GUARD_BITS)


def _node_bracket(chain: MonicChain, n: int):
    alpha = chain.recurrence_a[:n]
    off = np.sqrt(chain.recurrence_b[: n - 1])
    left = np.concatenate(([0.0], off))
    right = np.concatenate((off, [0.0]))
    lo = float(np.min(alpha - left - right))
    hi = float(np.max(alpha + left + right))
    spec = chain.spec
    pad = 1e-12 * (1.0 + max(abs(lo), abs(hi)))
    return max(lo - pad, spec.a), min(hi + pad, spec.b)


def gauss_rule(chain: MonicChain, n1: int) -> QuadratureRule:
    """n1-point Gauss rule: nodes are the zeros of p_{n1}, and

        W_j = gamma_{n1-1} / (p_{n1-1}(x_j) p'_{n1}(x_j)).
    """
    if not 1 <= n1 <= chain.degree:
        raise ValueError(f"rule order {n1} needs a chain of degree >= {n1} (have {chain.degree})")
    beta = chain._beta_full()
    lo, hi = _node_bracket(chain, n1)
    nodes, failed = kernels.monic_roots(chain.recurrence_a, beta, n1, lo, hi)
    nodes = np.asarray(nodes)
    if failed >= 0:
        raise QuadratureError(f"root {failed} of p_{n1} for {chain.spec} did not converge in [{lo}, {hi}]")
    _, pnm1, dpn = kernels.monic_eval(np.ascontiguousarray(nodes), chain.recurrence_a, beta, n1)
    # divide in two steps: the product p_{n1-1} p'_{n1} overflows for high orders
    weights = chain.gamma[n1 - 1] / np.asarray(pnm1) / np.asarray(dpn)
    spec = chain.spec
    bad = ~np.isfinite(weights) | (weights <= 0) | (nodes <= spec.a) | (nodes >= spec.b)
    if np.any(np.diff(nodes) <= 0) or bad.any():
        raise QuadratureError(f"degenerate {n1}-point rule for {spec}: nodes {nodes}")
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, spec)


def weighted_gauss_rule(spec: WeightSpec, n1: int) -> QuadratureRule:
    return gauss_rule(build_monic_chain(spec, n1), n1)


def integrate(rule: QuadratureRule, f: Callable) -> float:
    """Sum_j W_j f(x_j).  ``f`` receives the node array and must be vectorized."""
    values = np.asarray(f(rule.nodes), dtype=float)
    values = np.broadcast_to(values, rule.nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.argmax(bad))
        raise QuadratureError(f"integrand is {values[j]} at node x={rule.nodes[j]!r}")
    return float(np.dot(rule.weights, values))


def composite_rule(spec: WeightSpec, breakpoints: Sequence[float], panel_order: int) -> CompositeRule:
    bps = [float(x) for x in breakpoints]
    if any(not (spec.a < x < spec.b) for x in bps):
        raise ValueError(f"breakpoints {bps} must lie strictly inside ({spec.a}, {spec.b})")
    if any(x1 >= x2 for x1, x2 in zip(bps, bps[1:])):
        raise ValueError(f"breakpoints must be strictly ascending, got {bps}")
    edges = [spec.a, *bps, spec.b]
    panels = tuple(
        weighted_gauss_rule(WeightSpec(spec.c, lo, hi), panel_order) for lo, hi in zip(edges, edges[1:])
    )
    return CompositeRule(tuple(edges), panels)


def composite_integrate(spec: WeightSpec, breakpoints: Sequence[float], panel_order: int, f: Callable) -> float:
    """Integrate f exp(-c x^2) over the spec interval with panels split at ``breakpoints``."""
    return composite_rule(spec, breakpoints, panel_order)(f)
