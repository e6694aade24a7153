import math

import numpy as np
import pytest
from scipy import integrate as spi
from scipy.special import eval_genlaguerre

from nhspec.basis import (
    BoxBasisSpec,
    HermiteBasisSpec,
    LaguerreBasisSpec,
    box_function,
    box_matrix_element,
    box_potential_matrix,
    h0_diagonal,
    hermite_kinetic,
    hermite_kinetic_matrix,
    hermite_phi_eval,
    hermite_phi_table,
    hermite_x_action,
    hermite_x_matrix,
    hermite_x_power,
    laguerre_eval,
    laguerre_norm,
    laguerre_orthonormal,
    laguerre_series,
    laguerre_series_derivatives,
)
from nhspec.quadrature import WeightSpec, integrate, weighted_gauss_rule


def quad(f, a, b):
    return spi.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0]


class TestLaguerre:
    def test_low_members(self):
        spec = LaguerreBasisSpec(1.0, 5)
        assert laguerre_eval(spec, 1, 0.37) == 1.0
        assert laguerre_eval(spec, 2, 0.0) == pytest.approx(1.5)
        assert laguerre_eval(spec, 2, math.sqrt(1.5)) == pytest.approx(0.0, abs=1e-15)

    def test_matches_scipy(self):
        spec = LaguerreBasisSpec(0.7, 12)
        x = np.linspace(0, 4, 9)
        for n in range(1, 13):
            assert np.allclose(laguerre_eval(spec, n, x), eval_genlaguerre(n - 1, 0.5, 0.7 * x * x), rtol=1e-12, atol=1e-12)

    def test_index_checked(self):
        spec = LaguerreBasisSpec(1.0, 3)
        with pytest.raises(IndexError):
            laguerre_eval(spec, 4, 1.0)
        with pytest.raises(IndexError):
            laguerre_norm(spec, 0)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            LaguerreBasisSpec(0.0, 3)
        with pytest.raises(ValueError):
            LaguerreBasisSpec(1.0, 0)

    def test_norm_closed_form(self):
        assert laguerre_norm(LaguerreBasisSpec(1.0, 1), 1) == pytest.approx(math.sqrt(math.pi) / 4, rel=1e-14)
        assert laguerre_norm(LaguerreBasisSpec(4.0, 1), 1) == pytest.approx(math.sqrt(math.pi) / 32, rel=1e-14)

    def test_norm_by_quadrature(self):
        spec = LaguerreBasisSpec(1.3, 10)
        for n in range(1, 11):
            direct = quad(lambda x: laguerre_eval(spec, n, x) ** 2 * x * x * math.exp(-1.3 * x * x), 0, math.inf)
            assert laguerre_norm(spec, n) == pytest.approx(direct, rel=1e-9)

    def test_orthogonality(self):
        spec = LaguerreBasisSpec(1.0, 15)
        rule = weighted_gauss_rule(WeightSpec(1.0), 40)
        for m in range(1, 16):
            for n in range(1, m):
                ip = integrate(rule, lambda x: laguerre_eval(spec, m, x) * laguerre_eval(spec, n, x) * x * x)
                assert abs(ip) <= 1e-9 * math.sqrt(laguerre_norm(spec, m) * laguerre_norm(spec, n))

    def test_orthonormal_table(self):
        spec = LaguerreBasisSpec(0.59, 25)
        # products of two members reach degree 98 in x
        rule = weighted_gauss_rule(WeightSpec(0.59), 52)
        B = laguerre_orthonormal(spec, rule.nodes)
        G = (B * rule.weights * rule.nodes**2) @ B.T
        assert np.allclose(G, np.eye(25), atol=1e-9)

    def test_series_and_derivatives(self):
        spec = LaguerreBasisSpec(0.8, 8)
        rng = np.random.default_rng(3)
        a = rng.normal(size=8)
        x = np.linspace(0.1, 3.0, 11)
        f, f1, f2 = laguerre_series_derivatives(spec, a, x)
        assert np.allclose(laguerre_series(spec, a, x), f, rtol=1e-12, atol=1e-12)
        h = 1e-5
        fp = laguerre_series(spec, a, x + h)
        fm = laguerre_series(spec, a, x - h)
        assert np.allclose(f1, (fp - fm) / (2 * h), atol=1e-7)
        assert np.allclose(f2, (fp - 2 * f + fm) / h**2, atol=1e-4)

    def test_h0_diagonal_values(self):
        assert h0_diagonal(LaguerreBasisSpec(1.0, 3), 1) == 0
        assert h0_diagonal(LaguerreBasisSpec(1.0, 3), 3) == 4

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_h0_finite_difference(self, x):
        # H0 = -(D^2 + (2/x) D)/2 + c x D applied to L(2, 1/2, x^2)
        spec = LaguerreBasisSpec(1.0, 3)
        f = lambda t: laguerre_eval(spec, 3, t)
        h = 1e-4
        d1 = (f(x + h) - f(x - h)) / (2 * h)
        d2 = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
        h0 = -0.5 * (d2 + 2 / x * d1) + x * d1
        assert h0 == pytest.approx(h0_diagonal(spec, 3) * f(x), abs=1e-5)


class TestHermite:
    def test_ground_value(self):
        assert hermite_phi_eval(HermiteBasisSpec(1.0, 3), 0, 0.0) == pytest.approx(math.pi**-0.25, rel=1e-15)

    def test_odd_at_origin(self):
        assert hermite_phi_eval(HermiteBasisSpec(2.5, 3), 1, 0.0) == 0.0

    def test_orthonormal(self):
        for alpha in (1.0, 2.0):
            spec = HermiteBasisSpec(alpha, 21)
            rule = weighted_gauss_rule(WeightSpec(alpha, -math.inf, math.inf), 40)
            T = hermite_phi_table(spec, rule.nodes) * np.exp(0.5 * alpha * rule.nodes**2)
            G = (T * rule.weights) @ T.T
            assert np.allclose(G, np.eye(21), atol=1e-10)

    def test_phi3_phi5(self):
        spec = HermiteBasisSpec(1.0, 6)
        assert abs(quad(lambda x: hermite_phi_eval(spec, 3, x) * hermite_phi_eval(spec, 5, x), -20, 20)) < 1e-10

    def test_recurrence_pointwise(self):
        alpha = 1.7
        spec = HermiteBasisSpec(alpha, 17)
        x = np.linspace(-5, 5, 41)
        T = hermite_phi_table(spec, x)
        s = math.sqrt(2 * alpha)
        for n in range(16):
            rhs = (math.sqrt(n + 1) * T[n + 1] + (math.sqrt(n) * T[n - 1] if n else 0)) / s
            assert np.max(np.abs(x * T[n] - rhs)) < 1e-10

    def test_x_action(self):
        table = {(n, m): v for n, m, v in hermite_x_action(HermiteBasisSpec(1.0, 5))}
        assert table[(0, 1)] == pytest.approx(1 / math.sqrt(2))
        assert (0, -1) not in table
        with pytest.raises(ValueError):
            hermite_x_action(HermiteBasisSpec(1.0, 1))

    def test_x_action_by_quadrature(self):
        spec = HermiteBasisSpec(2.0, 5)
        direct = quad(lambda x: x * hermite_phi_eval(spec, 2, x) * hermite_phi_eval(spec, 3, x), -15, 15)
        assert direct == pytest.approx(math.sqrt(3) / math.sqrt(4.0), abs=1e-9)

    def test_x_cubed_exact(self):
        spec = HermiteBasisSpec(1.3, 6)
        X3 = hermite_x_power(spec, 3)
        assert X3[0, 3] == pytest.approx(math.sqrt(6) / (2 * 1.3) ** 1.5, rel=1e-14)
        # the truncation does not spoil elements near the edge
        for m, n in [(5, 4), (5, 2), (3, 4)]:
            direct = quad(lambda x: x**3 * hermite_phi_eval(spec, m, x) * hermite_phi_eval(spec, n, x), -15, 15)
            assert X3[m, n] == pytest.approx(direct, abs=1e-10)

    def test_kinetic(self):
        K = hermite_kinetic_matrix(HermiteBasisSpec(1.0, 6))
        assert K[0, 0] == pytest.approx(0.5)
        assert np.allclose(K, K.T)
        table = hermite_kinetic(HermiteBasisSpec(1.0, 6))
        offsets = {m - n for n, m, _ in table}
        assert offsets <= {-2, 0, 2}

    def test_kinetic_finite_difference(self):
        alpha, x, h = 1.0, 0.7, 1e-4
        spec = HermiteBasisSpec(alpha, 8)
        f = lambda t: hermite_phi_eval(spec, 4, t)
        lhs = -(f(x + h) - 2 * f(x) + f(x - h)) / h**2
        rhs = (alpha * 9 - alpha**2 * x * x) * f(x)
        assert lhs == pytest.approx(rhs, abs=1e-5)

    def test_kinetic_matrix_by_quadrature(self):
        alpha = 1.6
        spec = HermiteBasisSpec(alpha, 6)
        K = hermite_kinetic_matrix(spec)
        x = np.linspace(-12, 12, 20001)
        T = hermite_phi_table(spec, x)
        dT = np.gradient(T, x, axis=1)
        direct = spi.trapezoid(dT[:, None, :] * dT[None, :, :], x, axis=2)
        assert np.allclose(K, direct, atol=1e-5)


class TestBox:
    def test_boundary_and_orthonormal(self):
        for T in (1.0, 5.0):
            spec = BoxBasisSpec(T, 8)
            for k in range(1, 9):
                assert abs(box_function(spec, k, T)) < 1e-14 and abs(box_function(spec, k, -T)) < 1e-14
                for j in range(1, k + 1):
                    ip = quad(lambda x: box_function(spec, k, x) * box_function(spec, j, x), -T, T)
                    assert ip == pytest.approx(float(j == k), abs=1e-12)

    def test_same_parity_zero(self):
        assert box_matrix_element(BoxBasisSpec(1.0, 4), 1, 1, 3) == 0.0

    def test_known_element(self):
        assert box_matrix_element(BoxBasisSpec(1.0, 4), 1, 1, 2) == pytest.approx(32 / (9 * math.pi**2), rel=1e-13)

    def test_even_power_rejected(self):
        with pytest.raises(ValueError):
            box_matrix_element(BoxBasisSpec(1.0, 4), 2, 1, 2)

    def test_bounded_by_T(self):
        for T in (1.0, 5.0, 15.0):
            V = box_potential_matrix(BoxBasisSpec(T, 20), 1)
            assert np.max(np.abs(V)) <= T

    @pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
    @pytest.mark.parametrize("T", [1.0, 5.0, 15.0])
    @pytest.mark.parametrize("m_pow", [1, 3])
    def test_closed_form_vs_quadrature(self, T, m_pow):
        spec = BoxBasisSpec(T, 12)
        V = box_potential_matrix(spec, m_pow)
        for i in range(1, 13):
            for j in range(i + 1, 13):
                f = lambda x: x**m_pow * box_function(spec, i, x, False) * box_function(spec, j, x, False) / T
                assert V[i - 1, j - 1] == pytest.approx(quad(f, -T, T), abs=1e-10 * max(1.0, T**m_pow))

    def test_scaling_in_T(self):
        for m_pow, factor in ((1, 2.0), (3, 8.0)):
            V1 = box_potential_matrix(BoxBasisSpec(3.0, 10), m_pow)
            V2 = box_potential_matrix(BoxBasisSpec(6.0, 10), m_pow)
            assert np.allclose(V2, factor * V1, rtol=1e-12, atol=1e-13)
