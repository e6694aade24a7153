"""Compiled kernels vs the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Per-kernel timings call both modules directly. ``--end-to-end`` also times one
log-equation solve in two subprocesses, the second with NHSPEC_PURE_PYTHON=1.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from nhspec import _kernels_py
from nhspec.quadrature import WeightSpec, build_monic_chain

try:
    from nhspec import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases():
    chain = build_monic_chain(WeightSpec(0.5, 0.0, np.inf), 52)
    a = np.ascontiguousarray(chain.recurrence_a)
    b = np.concatenate([[0.0], chain.recurrence_b])
    x = np.linspace(0.0, 10.0, 2000)
    t = x * x
    coef = np.random.default_rng(0).normal(size=25) / 5
    grid = np.linspace(0.01, 6.0, 401)
    f = _kernels_py.laguerre_series(coef, grid * grid)
    k = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    lo, hi = np.ascontiguousarray(grid[k]), np.ascontiguousarray(grid[k + 1])
    phi = np.random.default_rng(1).normal(size=20000)
    return {
        "monic_eval n=52, 2000 pts": lambda m: m.monic_eval(x, a, b, 52),
        "monic_roots n=52": lambda m: m.monic_roots(a, b, 52, 0.0, 60.0),
        "laguerre_table 25 x 2000": lambda m: m.laguerre_table(t, 25),
        "laguerre_series 25 x 2000": lambda m: m.laguerre_series(coef, t),
        f"refine_brackets {len(k)} roots": lambda m: m.refine_brackets(coef, 1.0, lo, hi),
        "phi_log_phi 20000": lambda m: m.phi_log_phi(phi),
    }


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


SOLVE = "from nhspec.lognls import LogNlsConfig, solve_state; import time; t=time.perf_counter(); solve_state(LogNlsConfig(2.0, 2, 20, 1.0)); print(time.perf_counter()-t)"


def end_to_end():
    out = {}
    for label, pure in (("compiled", "0"), ("fallback", "1")):
        env = dict(os.environ, NHSPEC_PURE_PYTHON=pure)
        proc = subprocess.run([sys.executable, "-c", SOLVE], env=env, capture_output=True, text=True, check=True)
        out[label] = float(proc.stdout.strip())
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if _kernels is None:
        sys.exit("compiled extension not available; build with pip install -e .")
    print(f"{'kernel':32s} {'compiled':>12s} {'fallback':>12s} {'speedup':>8s}")
    for name, call in cases().items():
        tc = best(lambda: call(_kernels), args.repeat)
        tp = best(lambda: call(_kernels_py), args.repeat)
        print(f"{name:32s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}")
    if args.end_to_end:
        t = end_to_end()
        print(f"{'solve s=2 state 2 N=20':32s} {t['compiled']:11.2f}s {t['fallback']:11.2f}s {t['fallback'] / t['compiled']:8.1f}")


if __name__ == "__main__":
    main()
