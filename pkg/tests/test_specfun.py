import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special as sc

from conefourier import specfun as sf
from conefourier.errors import DomainError, PoleAtNonpositiveInteger

# high-precision values computed once with mpmath (40 digits)
LOGGAMMA_53_21 = complex(3.1952750546322028835, 3.3607264113948720802)
K_THREE_HALVES_AT_1 = 0.92213700889578911688
APPELL_F4_SAMPLE = 1.5216888845931822921  # F4(1.2, 0.7; 1.5, 0.5; 0.2, 0.1)


class TestLogGamma:
    def test_one(self):
        assert abs(sf.log_gamma(1.0)) < 1e-15

    def test_half(self):
        assert sf.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)

    def test_complex_frozen(self):
        assert abs(sf.log_gamma(5.3 + 2.1j) - LOGGAMMA_53_21) < 1e-13

    def test_pole(self):
        with pytest.raises(PoleAtNonpositiveInteger):
            sf.log_gamma(-2.0)

    @given(st.floats(0.2, 30), st.floats(-20, 20))
    def test_recursion(self, re, im):
        z = complex(re, im)
        lhs = np.exp(sf.log_gamma(z + 1) - sf.log_gamma(z))
        assert abs(lhs - z) <= 1e-11 * abs(z)


class TestBessel:
    def test_j0_origin_limit(self):
        assert sf.bessel("J", 0.0, 1e-12) == pytest.approx(1.0, abs=1e-15)

    def test_k_half(self):
        assert sf.bessel("K", 0.5, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-14)

    def test_k_three_halves(self):
        assert sf.bessel("K", 1.5, 1.0) == pytest.approx(K_THREE_HALVES_AT_1, rel=1e-14)
        assert sf.bessel_k_half_odd(1, 1.0) == pytest.approx(K_THREE_HALVES_AT_1, rel=1e-14)

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            sf.bessel("K", 0.5, -1.0)

    def test_tilde_j_at_zero(self):
        assert sf.bessel_tilde("J", 0.0, 0.0) == 1.0

    def test_tilde_k_small_x(self):
        x = 1e-4
        assert sf.bessel_tilde("K", 1.0, x) == pytest.approx(0.5 * (x / 2) ** -2, rel=1e-6)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.3])
    def test_tilde_k_recurrence(self, nu):
        x, h = 1.7, 1e-4
        d = (sf.bessel_tilde("K", nu, x + h) - sf.bessel_tilde("K", nu, x - h)) / (2 * h)
        assert -2 * d / x == pytest.approx(sf.bessel_tilde("K", nu + 1, x), rel=1e-7)

    @given(st.integers(0, 6), st.floats(0.05, 40))
    def test_half_odd_closed_form(self, n, x):
        assert sf.bessel_k_half_odd(n, x) == pytest.approx(sc.kv(n + 0.5, x), rel=1e-12)


class TestGegenbauer:
    @pytest.mark.parametrize("mu", [0.5, 1.0, 2.5])
    def test_degree_zero(self, mu):
        assert sf.gegenbauer_tilde(0, mu, 0.3) == pytest.approx(math.gamma(mu), rel=1e-15)

    @given(st.floats(0, math.pi))
    def test_mu_zero_limit(self, th):
        assert sf.gegenbauer_tilde(2, 0.0, math.cos(th)) == pytest.approx(math.cos(2 * th), abs=1e-12)

    def test_orthogonality(self):
        x, w = sf.gauss_jacobi(20, 0.5, 0.5)
        val = np.dot(sf.gegenbauer_tilde(1, 1.0, x) * sf.gegenbauer_tilde(2, 1.0, x), w)
        assert abs(val) < 1e-14

    def test_outside_interval(self):
        with pytest.raises(DomainError):
            sf.gegenbauer_tilde(2, 1.0, 1.5)

    def test_hypergeometric_connection(self):
        # C_2^mu(x) = (2mu)_2/2! 2F1(-2, 2mu+2; mu+1/2; (1-x)/2)
        mu, x = 0.75, 0.4
        rhs = sf.pochhammer(2 * mu, 2) / 2 * sf.hyp_pfq([-2, 2 * mu + 2], [mu + 0.5], (1 - x) / 2)
        assert sf.gegenbauer_tilde(2, mu, x) / math.gamma(mu) == pytest.approx(rhs, rel=1e-13)


class TestLegendre:
    def test_at_one(self):
        assert sf.assoc_legendre(1.3, 0.0, 1 - 1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_derivative_relation(self):
        nu, mu, x, h = 1.0, 0.5, 0.3, 1e-5

        def lhs(t):
            return (1 - t * t) ** (-mu / 2) * sf.assoc_legendre(nu, mu, -t)

        d = (lhs(x + h) - lhs(x - h)) / (2 * h)
        assert d == pytest.approx((1 - x * x) ** (-(mu + 1) / 2) * sf.assoc_legendre(nu, mu + 1, -x), rel=1e-7)

    def test_weighted_integral(self):
        lam, mu, nu = 1.5, 0.5, 1.0
        val, _ = integrate.quad(lambda x: (1 - x * x) ** (lam - 1) * sf.assoc_legendre(nu, mu, x), -1, 1,
                                epsabs=1e-13, epsrel=1e-12)
        ref = (2 ** mu * math.pi * math.gamma(lam + mu / 2) * math.gamma(lam - mu / 2)
               / (math.gamma(lam + (nu + 1) / 2) * math.gamma(lam - nu / 2)
                  * math.gamma((2 - mu + nu) / 2) * math.gamma((1 - mu - nu) / 2)))
        assert val == pytest.approx(ref, rel=1e-9)


class TestSeries:
    def test_zero_argument(self):
        assert sf.hyp_pfq([1.3, 2.0], [0.7], 0.0) == 1.0

    def test_bessel_connection(self):
        nu, x = 0.5, 1.3
        lhs = sf.hyp_pfq([], [nu + 1], -x * x / 4) / math.gamma(nu + 1)
        assert lhs == pytest.approx(sf.bessel_tilde("J", nu, x), rel=1e-14)

    def test_appell_origin(self):
        assert sf.appell_f4(1.2, 0.7, 1.5, 0.5, 0.0, 0.0) == 1.0

    def test_appell_frozen(self):
        assert sf.appell_f4(1.2, 0.7, 1.5, 0.5, 0.2, 0.1) == pytest.approx(APPELL_F4_SAMPLE, rel=1e-12)

    def test_appell_reduction(self):
        a, b, x, y = 1.2, 0.7, 0.2, 0.1
        s = (1 - x) * (1 - y)
        lhs = sf.appell_f4(a, b, 1 + a - b, b, -x / s, -y / s)
        rhs = (1 - y) ** a * sf.hyp_pfq([a, b], [1 + a - b], -x * (1 - y) / (1 - x))
        assert lhs == pytest.approx(rhs, rel=1e-11)


class TestGaussJacobi:
    @settings(max_examples=30)
    @given(st.floats(-0.9, 3.0), st.floats(-0.9, 3.0), st.integers(0, 9))
    def test_exact_on_polynomials(self, a, b, k):
        x, w = sf.gauss_jacobi(8, a, b)
        ref = integrate.quad(lambda t: t ** k, -1, 1, weight="alg", wvar=(b, a))[0]
        assert np.dot(w, x ** k) == pytest.approx(ref, rel=1e-10, abs=1e-12)
