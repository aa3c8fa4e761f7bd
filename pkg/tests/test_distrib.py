import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special as sc

from conefourier import distrib as d
from conefourier.errors import InsufficientSmoothness, PoleError


def cutoff_exp():
    # e^{-x} for x >= 0, extended smoothly enough for a pairing with x_+^0
    return d.TestFn(lambda t: np.where(np.asarray(t) >= 0, np.exp(-np.abs(t)), 0.0) * (np.abs(t) <= 40),
                    support_radius=40.0)


class TestRiesz:
    def test_lambda_zero(self):
        assert abs(d.riesz_pair(0.0, 1, cutoff_exp()) - 1.0) < 1e-10

    def test_residue_at_minus_two(self):
        phi = d.gaussian_test_fn([0.3, 1.7, -0.4])
        assert d.riesz_residue(2, 1, phi) == pytest.approx(1.7, rel=1e-12)
        assert d.riesz_residue(2, -1, phi) == pytest.approx(-1.7, rel=1e-12)

    def test_residue_matches_continuation(self):
        phi = d.gaussian_test_fn([0.3, 1.7, -0.4])
        eps = 1e-6
        near = d.riesz_pair(-2 + eps, 1, phi)
        assert (near * eps).real == pytest.approx(d.riesz_residue(2, 1, phi), rel=1e-4)

    def test_fractional_power_by_parts(self):
        # <x_+^{-3/2}, phi> = int x^{-3/2} (phi(x) - phi(0)) dx for x in (0, oo) with phi(oo)=0 handled
        phi = d.gaussian_test_fn([1.0, 0.5])
        f = lambda x: x ** -1.5 * (phi(x) - phi(0.0))  # noqa: E731
        head, _ = integrate.quad(f, 0, 1, epsabs=1e-13)
        tail, _ = integrate.quad(lambda x: x ** -1.5 * phi(x), 1, np.inf, epsabs=1e-13)
        ref = head + tail - 2 * phi(0.0)
        assert d.riesz_pair(-1.5, 1, phi).real == pytest.approx(ref, rel=1e-9)

    def test_pole(self):
        with pytest.raises(PoleError):
            d.riesz_pair(-1.0, 1, d.gaussian_test_fn([1.0]))

    def test_smoothness_guard(self):
        phi = d.gaussian_test_fn([1.0], k_max=1)
        with pytest.raises(InsufficientSmoothness):
            d.riesz_pair(-4.5, 1, phi)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(-4.8, 2.0).filter(lambda v: abs(v - round(v)) > 0.05), st.sampled_from([1, -1]),
           st.integers(0, 2**31))
    def test_two_routes_and_closed_form(self, lam, sign, seed):
        phi = d.random_test_fn(np.random.default_rng(seed))
        ref = complex(phi.mellin(lam, sign))
        a = d.riesz_pair(lam, sign, phi, method="parts")
        b = d.riesz_pair(lam, sign, phi, method="subtract")
        scale = max(1.0, abs(ref))
        assert abs(a - ref) <= 1e-8 * scale
        assert abs(b - ref) <= 1e-8 * scale


class TestPrincipalValue:
    def test_even_function_gives_zero(self):
        assert abs(d.pv_power_pair(1, d.gaussian_test_fn([1.0, 0.0, 0.5]))) < 1e-14

    def test_odd_gaussian(self):
        assert d.pv_power_pair(1, d.gaussian_test_fn([0.0, 1.0])) == pytest.approx(math.sqrt(math.pi), rel=1e-10)

    def test_finite_part_square(self):
        phi = d.gaussian_test_fn([1.0, 0.4, -0.3], a=0.8)
        even = lambda x: (phi(x) + phi(-x) - 2 * phi(0.0)) / x ** 2  # noqa: E731
        v1, _ = integrate.quad(even, 0, 1, epsabs=1e-13)
        v2, _ = integrate.quad(lambda x: (phi(x) + phi(-x)) / x ** 2, 1, np.inf, epsabs=1e-13)
        ref = v1 + v2 - 2 * phi(0.0)
        assert d.pv_power_pair(2, phi) == pytest.approx(ref, rel=1e-9)


class TestBesselDistributions:
    def test_m0_regular_only(self):
        dist = d.bessel_dist(0, "PsiPlus")
        assert dist.singular.is_empty
        t = 0.7
        assert dist.regular(t) == pytest.approx(sc.j0(2 * math.sqrt(2 * t)), rel=1e-14)
        assert dist.regular(-t) == 0.0

    def test_m1_delta_coefficient(self):
        assert dict(d.bessel_dist(1, "PsiPlus").singular.delta_coeffs)[0] == Fraction(-1, 2)

    def test_m1_pv_coefficient(self):
        # stored without the 1/pi factor
        assert dict(d.bessel_dist(1, "Psi").singular.pv_coeffs)[1] == Fraction(-1, 2)

    @pytest.mark.parametrize("m", range(1, 6))
    def test_singular_coefficients_exact(self, m):
        dp = d.bessel_dist(m, "PsiPlus").singular.delta_coeffs
        ps = d.bessel_dist(m, "Psi").singular.pv_coeffs
        for k in range(1, m + 1):
            assert dict(dp)[k - 1] == -Fraction((-1) ** (k - 1), 2 ** k * math.factorial(m - k))
            assert dict(ps)[k] == -Fraction(math.factorial(k - 1), 2 ** k * math.factorial(m - k))

    def test_m0_pairing_is_integral(self):
        phi = d.gaussian_test_fn([1.0, -0.5], a=1.3)
        ref, _ = integrate.quad(lambda t: sc.j0(2 * math.sqrt(2 * t)) * phi(t), 0, 40, limit=200)
        assert d.bessel_dist_pair(d.bessel_dist(0, "PhiPlus"), phi) == pytest.approx(ref, rel=1e-10)

    @settings(max_examples=8, deadline=None)
    @given(st.integers(0, 3), st.sampled_from(["PsiPlus", "Psi", "PhiPlus", "Phi"]), st.integers(0, 2**31))
    def test_pairing_matches_mellin_barnes(self, m, kind, seed):
        phi = d.random_test_fn(np.random.default_rng(seed))
        dist = d.bessel_dist(m, kind)
        assert abs(d.bessel_dist_pair(dist, phi) - d.mb_pairing(m, kind, phi)) <= 1e-6

    @pytest.mark.parametrize("kind,m,t", [("PhiPlus", 2, 1.7), ("PsiPlus", 0, 0.4), ("Psi", 1, -2.0),
                                          ("Psi", 2, 0.9)])
    def test_second_order_equation(self, kind, m, t):
        assert abs(d.dist_ode_residual(d.bessel_dist(m, kind), t)) <= 1e-6

    @pytest.mark.parametrize("m,t", [(1, 0.5), (2, -1.3)])
    def test_third_order_equation(self, m, t):
        dist = d.bessel_dist(m, "Phi")
        assert abs(d.dist_ode_residual(dist, t)) <= 1e-5
        # the variant with coefficient 2m in place of m is not satisfied
        assert abs(d.dist_ode_residual(dist, t, theta_coeff=2 * m)) > 1e-3

    def test_pointwise_rejects_origin(self):
        with pytest.raises(ValueError):
            d.bessel_dist(1, "Psi").pointwise(0.0)

    def test_phi_m_series_and_bessel_branches_agree(self):
        for m in range(4):
            for t in (-1.2, -0.6, 0.6, 1.2):
                a = d.phi_m(m, t, crossover=10.0)
                b = d.phi_m(m, t, crossover=0.1)
                assert a == pytest.approx(b, rel=1e-10, abs=1e-13)
