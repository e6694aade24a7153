"""Compiled kernels against the numpy fallback."""
import numpy as np
import pytest

from nhspec import _kernels_py as py
from nhspec.quadrature import WeightSpec, build_monic_chain

compiled = pytest.importorskip("nhspec._kernels")


@pytest.fixture(scope="module")
def chain():
    return build_monic_chain(WeightSpec(0.7, 0.0, np.inf), 24)


def test_selection_flag():
    from nhspec import _core

    assert _core.COMPILED == (_core.kernels is compiled)


def test_monic_eval(chain):
    x = np.linspace(0.0, 6.0, 37)
    a, b = chain.recurrence_a, np.concatenate([[0.0], chain.recurrence_b])
    for n in (0, 1, 7, 24):
        for got, ref in zip(compiled.monic_eval(x, a, b, n), py.monic_eval(x, a, b, n)):
            assert np.allclose(got, ref, rtol=1e-13, atol=1e-300)


def test_monic_roots(chain):
    a, b = chain.recurrence_a, np.concatenate([[0.0], chain.recurrence_b])
    x1, f1 = compiled.monic_roots(a, b, 24, 0.0, 20.0)
    x2, f2 = py.monic_roots(a, b, 24, 0.0, 20.0)
    assert f1 == f2 == -1
    assert np.allclose(x1, x2, rtol=1e-14, atol=0)


def test_laguerre_table_and_series():
    t = np.linspace(0.0, 30.0, 53)
    assert np.allclose(compiled.laguerre_table(t, 25), py.laguerre_table(t, 25), rtol=1e-12, atol=1e-14)
    coef = np.random.default_rng(4).normal(size=25)
    assert np.allclose(compiled.laguerre_series(coef, t), py.laguerre_series(coef, t), rtol=1e-11, atol=1e-12)


def test_refine_brackets():
    coef = np.array([0.3, -0.8, 0.5, 0.1])
    x = np.linspace(0.01, 5.0, 400)
    f = py.laguerre_series(coef, x * x)
    k = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    lo, hi = x[k], x[k + 1]
    z1 = np.asarray(compiled.refine_brackets(coef, 1.0, lo, hi))
    z2 = py.refine_brackets(coef, 1.0, lo, hi)
    assert len(z1) == len(k) > 0
    assert np.allclose(z1, z2, atol=1e-12)


def test_phi_log_phi():
    phi = np.array([0.0, 1.0, -0.5, 1e-300, 3.0])
    assert np.array_equal(np.asarray(compiled.phi_log_phi(phi)), py.phi_log_phi(phi))


def test_read_only_inputs():
    t = np.linspace(0.0, 1.0, 5)
    t.flags.writeable = False
    assert np.asarray(compiled.laguerre_table(t, 3)).shape == (3, 5)
