import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from qht import specfun
from qht.errors import NonConvergence


def hermite_poly_coeffs(k_max):
    """Exact integer coefficients of the physicists' Hermite polynomials."""
    coeffs = [[Fraction(1)], [Fraction(0), Fraction(2)]]
    for k in range(1, k_max):
        prev, cur = coeffs[k - 1], coeffs[k]
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        coeffs.append(nxt)
    return coeffs


def psi_exact(k, x):
    """Oracle: normalized Hermite function from exact polynomial coefficients."""
    coeffs = hermite_poly_coeffs(max(k, 1))[k]
    acc = Fraction(0)
    xf = Fraction(x)
    for c in reversed(coeffs):
        acc = acc * xf + c
    norm = math.sqrt(2.0**k * math.factorial(k) * math.sqrt(math.pi))
    return float(acc) * math.exp(-x * x / 2.0) / norm


class TestHermite:
    def test_values_at_zero(self):
        psi = specfun.hermite_functions(0.0, 3)
        assert psi[0] == pytest.approx(math.pi**-0.25, abs=0)
        assert psi[1] == 0.0
        assert psi[3] == 0.0

    @pytest.mark.parametrize("x", [1.0, -0.7, 2.5, 4.0])
    def test_against_exact_coefficients(self, x):
        psi = specfun.hermite_functions(x, 20)
        for k in range(21):
            assert psi[k] == pytest.approx(psi_exact(k, x), rel=1e-12, abs=1e-14)

    def test_orthonormality(self):
        nodes, w = specfun.gauss_legendre_panels(np.linspace(-15, 15, 61), 16)
        psi = specfun.hermite_functions(nodes, 25)
        gram = (psi * w) @ psi.T
        assert np.max(np.abs(gram - np.eye(26))) < 1e-8

    def test_sup_norm_ceiling(self):
        x = np.linspace(-25, 25, 8001)
        psi = specfun.hermite_functions(x, 200)
        assert float(np.max(np.abs(psi))) <= 1.10


class TestLaguerre:
    def test_trivial_orders(self):
        assert specfun.laguerre(0, 5.3) == 1.0
        assert specfun.laguerre(1, 2.0) == -1.0

    def test_against_exact_coefficients(self):
        # L_k(x) = sum_i C(k,i) (-1)^i x^i / i!
        x = Fraction(3, 2)
        for k in (5, 10, 15):
            exact = sum(
                Fraction(math.comb(k, i)) * (-x) ** i / Fraction(math.factorial(i))
                for i in range(k + 1)
            )
            assert specfun.laguerre(k, 1.5) == pytest.approx(float(exact), rel=1e-12)

    def test_weighted_bounded(self):
        x = np.linspace(0.0, 400.0, 2001)
        lw = specfun.laguerre_weighted_all(x, 120)
        assert float(np.max(np.abs(lw))) <= 1.0 + 1e-12

    def test_differential_equation(self):
        x = np.linspace(0.0, 10.0, 81)
        L, dL, ddL = specfun.laguerre_with_derivatives(x, 25)
        for n in range(1, 26):
            resid = n * L[n] - ((x - 1.0) * dL[n] - x * ddL[n])
            assert float(np.max(np.abs(resid))) < 1e-7


def j0_series(x, terms=40):
    """Oracle: power series sum_m (-1)^m (x^2/4)^m / (m!)^2."""
    acc, term = 1.0, 1.0
    q = x * x / 4.0
    for m in range(1, terms):
        term *= -q / (m * m)
        acc += term
    return acc


class TestBesselJ0:
    def test_at_zero(self):
        assert specfun.bessel_j0(0.0) == 1.0

    def test_against_series(self):
        for x in (0.5, 1.0, 2.0, 3.0):
            assert specfun.bessel_j0(x) == pytest.approx(j0_series(x), abs=1e-13)

    def test_first_root(self):
        # locate the root of the series oracle by bisection, then check it
        lo, hi = 2.0, 3.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if j0_series(lo) * j0_series(mid) <= 0:
                hi = mid
            else:
                lo = mid
        root = 0.5 * (lo + hi)
        assert root == pytest.approx(2.404825557695773, abs=1e-12)
        assert abs(specfun.bessel_j0(root)) < 1e-10
        assert abs(specfun.bessel_j0(2.404825557695773)) < 1e-10


class TestQuadrature:
    def test_constant_on_unit_interval(self):
        rule = specfun.finite_rule(0.0, 1.0)
        res = specfun.integrate(lambda z: np.ones_like(z), rule)
        assert res.value == pytest.approx(1.0, abs=1e-14)

    def test_rule_invariants(self):
        rule = specfun.finite_rule(-2.0, 3.0)
        assert np.all(rule.weights > 0)
        assert float(np.sum(rule.weights)) == pytest.approx(5.0, rel=1e-12)

    def test_gaussian_moment(self):
        rule = specfun.semi_infinite_rule(0.0, lambda r: math.exp(-r * r))
        res = specfun.integrate(lambda r: r * np.exp(-r * r), rule)
        assert res.value == pytest.approx(0.5, abs=1e-13)

    def test_smooth_cutoff_moment_vs_trapezoid(self):
        # dense-trapezoid oracle on [0, 40]; the tail beyond is below 1e-50
        a, beta = 1e4, 1.0
        x = np.linspace(0.0, 40.0, 400001)
        y = x**3 / (1.0 + np.sinh(np.minimum(beta * x, 30.0)) ** 2 / a) ** 2
        oracle = float(np.trapezoid(y, x))
        rule = specfun.semi_infinite_rule(
            0.0, lambda r: 16 * a * a * r**3 * math.exp(-4 * beta * r) + 1e-300
        )
        res = specfun.integrate(
            lambda r: r**3 / (1.0 + np.sinh(np.minimum(beta * r, 30.0)) ** 2 / a) ** 2,
            rule,
        )
        assert res.value == pytest.approx(oracle, rel=1e-7)

    def test_non_convergence_raises(self):
        base = specfun.finite_rule(0.0, 1.0, abs_tol=1e-16, rel_tol=1e-16)
        rule = replace(base, max_refinements=2)
        # a kink keeps the panel-doubling error above 1e-16
        with pytest.raises(NonConvergence):
            specfun.integrate(lambda z: np.abs(z - 1.0 / math.pi), rule)

    def test_oscillatory_rule(self):
        freq = 50.0
        rule = specfun.oscillatory_rule(0.0, 10.0, freq, abs_tol=1e-13)
        res = specfun.integrate(lambda x: np.cos(freq * x), rule)
        assert res.value == pytest.approx(math.sin(500.0) / 50.0, abs=1e-12)

    def test_adaptive_wrapper(self):
        val, err = specfun.quad_adaptive(lambda x: math.exp(-x * x), 0.0, np.inf)
        assert val == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)
        assert err < 1e-8
