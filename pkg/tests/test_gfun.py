import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special as sc

from conefourier.errors import ContourInvalid, IntegerDifference, NonConvergent, OutOfRegime
from conefourier.gfun import (Contour, GSpec, default_contour, g_asymptotic, g_contour, g_contour_many,
                              g_ode_residual, g_series, gamma_quotient, meijer_g)

mpmath = pytest.importorskip("mpmath")

# mpmath.meijerg at 40 digits, frozen
G04_ZEROS_AT_1 = -0.38313413786713637865
G04_SAMPLE_AT_HALF = 0.67643994549928410711  # b = (0.1, 0.35 | -0.6, -1.1)
G04_ZEROS_AT_1E4 = 0.00089391154310852426716
G13_AT_1E3 = -2.9629341615576243402  # a = (-1/2), b = (0, 1 | -1/2)


def oracle(x, spec: GSpec) -> float:
    mpmath.mp.dps = 30
    a, b = list(spec.a), list(spec.b)
    return float(mpmath.meijerg([a[: spec.n], a[spec.n:]], [b[: spec.m], b[spec.m:]], x))


class TestGammaQuotient:
    def test_symmetric_cancellation(self):
        assert gamma_quotient(-0.5, GSpec(2, 0, (), (0, 0, 0, 0))) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("lam", [-0.3, -1.7, 0.4])
    def test_bessel_quotient(self, lam):
        nu = 0.8
        ref = sc.gamma(-lam) / sc.gamma(lam + nu + 1)
        assert complex(gamma_quotient(lam, GSpec(1, 0, (), (0, -nu)))).real == pytest.approx(ref, rel=1e-13)

    def test_exponential_decay_along_vertical_line(self):
        spec = GSpec(2, 0, (), (0.1, 0.2, 0.3, 0.4))  # c* = 0: algebraic, not exponential
        spec_k = GSpec(2, 0, (), (0.3, -0.2))  # c* = 1
        T = np.array([20.0, 40.0])
        vals = np.abs([gamma_quotient(-0.5 + 1j * t, spec_k) for t in T])
        rate = -np.log(vals[1] / vals[0]) / (T[1] - T[0])
        assert rate == pytest.approx(math.pi * spec_k.cstar, rel=0.05)
        vals0 = np.abs([gamma_quotient(-0.5 + 1j * t, spec) for t in T])
        assert abs(np.log(vals0[1] / vals0[0])) < 5


class TestContour:
    def test_bessel_k(self):
        nu, x = 1.0, 2.5
        ref = 2 * x ** (-nu / 2) * sc.kv(nu, 2 * math.sqrt(x))
        assert g_contour(x, GSpec(2, 0, (), (0, -nu))) == pytest.approx(ref, rel=1e-10)

    def test_bessel_j(self):
        assert g_contour(1.0, GSpec(1, 0, (), (0, 0))) == pytest.approx(sc.j0(2.0), rel=1e-10)

    def test_quartic_bessel(self):
        x = 3.0
        ref = x ** 0.5 * sc.jv(2, 4 * x ** 0.25)
        assert g_contour(x, GSpec(2, 0, (), (1, 1.5, 0, 0.5))) == pytest.approx(ref, rel=1e-10)

    def test_frozen_values(self):
        assert g_contour(1.0, GSpec(2, 0, (), (0, 0, 0, 0))) == pytest.approx(G04_ZEROS_AT_1, rel=1e-12)
        assert g_contour(1e4, GSpec(2, 0, (), (0, 0, 0, 0))) == pytest.approx(G04_ZEROS_AT_1E4, rel=1e-8)
        assert g_contour(1e3, GSpec(2, 0, (-0.5,), (0, 1, -0.5))) == pytest.approx(G13_AT_1E3, rel=1e-9)

    def test_contour_must_separate_poles(self):
        spec = GSpec(2, 0, (), (0, 0, 0, 0))
        with pytest.raises(ContourInvalid):
            g_contour(1.0, spec, Contour(0.5, 0.3, 1.0))

    def test_vectorized_matches_scalar(self):
        spec = GSpec(2, 0, (), (0.25, -0.25, 0.0, 0.5))
        xs = np.array([0.05, 0.3, 1.7, 9.0, 60.0])
        many = g_contour_many(xs, spec)
        single = np.array([g_contour(x, spec) for x in xs])
        np.testing.assert_allclose(many, single, rtol=1e-11, atol=1e-14)

    def test_nonpositive_argument(self):
        with pytest.raises(ValueError):
            g_contour(-1.0, GSpec(1, 0, (), (0, 0)))

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-0.45, 0.45), st.floats(-0.45, 0.45), st.floats(-1.5, 0.0), st.floats(-1.5, 0.0),
           st.floats(-3, 3))
    def test_against_mpmath(self, b1, b2, b3, b4, logx):
        spec = GSpec(2, 0, (), (b1, b2, b3, b4))
        x = 10.0 ** logx
        ref = oracle(x, spec)
        scale = max(abs(ref), x ** min(b1, b2) * 1e-6)
        assert abs(g_contour(x, spec) - ref) <= 1e-8 * scale

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-0.5, 0.5), st.floats(0.1, 20.0))
    def test_shift_property(self, s, x):
        spec = GSpec(2, 0, (), (0.2, -0.3, -0.7, 0.4))
        lhs = x ** s * g_contour(x, spec)
        assert lhs == pytest.approx(g_contour(x, spec.shifted(s)), rel=1e-9, abs=1e-12)


class TestSeries:
    def test_matches_bessel_series(self):
        nu, x = 0.5, 0.8
        ref = x ** (-nu / 2) * sc.jv(nu, 2 * math.sqrt(x))
        assert g_series(x, GSpec(1, 0, (), (0, -nu))) == pytest.approx(ref, rel=1e-13)

    def test_frozen_sample(self):
        spec = GSpec(2, 0, (), (0.1, 0.35, -0.6, -1.1))
        assert g_series(0.5, spec) == pytest.approx(G04_SAMPLE_AT_HALF, rel=1e-12)
        assert g_series(0.5, spec) == pytest.approx(g_contour(0.5, spec), rel=1e-9)

    def test_small_x_scaling(self):
        # G ~ c x^{b1} with relative correction O(x^{b2-b1})
        spec = GSpec(2, 0, (), (0.1, 0.35, -0.6, -1.1))
        c0 = sc.gamma(0.25) / (sc.gamma(1.7) * sc.gamma(2.2))
        for x in (1e-4, 1e-8, 1e-12):
            assert abs(g_series(x, spec) / (c0 * x ** 0.1) - 1) <= 1.5 * x ** 0.25

    def test_integer_difference_rejected(self):
        with pytest.raises(IntegerDifference):
            g_series(0.5, GSpec(2, 0, (), (0, 1, 0.5, 0.5)))

    def test_divergent_regime_rejected(self):
        with pytest.raises(NonConvergent):
            g_series(2.0, GSpec(1, 1, (0.5,), (0.0,)))


class TestAsymptotic:
    def test_envelope(self):
        spec = GSpec(2, 0, (), (0, 0, 0, 0))
        # one full oscillation around x = 1e4
        xs = np.linspace(10.0, 10.0 + math.pi / 2, 400) ** 4
        env_asym = np.abs([g_asymptotic(x, spec) for x in xs]).max()
        env_contour = np.abs(g_contour_many(xs, spec)).max()
        assert env_asym == pytest.approx(env_contour, rel=0.05)

    def test_zero_crossings(self):
        # zeros sit near 4 x^(1/4) = (gamma + b1 + b2 + 1/4) pi + pi/2 (mod pi), gamma = 1
        from scipy.optimize import brentq
        spec = GSpec(2, 0, (), (0, 0, 0, 0))
        f = lambda x: g_contour(x, spec)  # noqa: E731
        for j in range(12, 15):
            s = 1.25 * math.pi + math.pi / 2 + j * math.pi
            x_pred = (s / 4) ** 4
            lo, hi = ((s - 0.4) / 4) ** 4, ((s + 0.4) / 4) ** 4
            root = brentq(f, lo, hi)
            assert abs(4 * root ** 0.25 - 4 * x_pred ** 0.25) < 0.02

    def test_out_of_regime(self):
        with pytest.raises(OutOfRegime):
            g_asymptotic(2.0, GSpec(2, 0, (), (0, 0, 0, 0)))

    def test_dispatcher(self):
        spec = GSpec(2, 0, (), (0, 0, 0, 0))
        assert meijer_g(1.0, spec) == pytest.approx(G04_ZEROS_AT_1, rel=1e-12)


class TestDifferentialEquation:
    @pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
    def test_corrected_equation(self, t):
        spec = GSpec(2, 0, (), (0.5, 1.0, 0.0, 0.5))
        assert g_ode_residual(t * t, spec) <= 1e-5

    def test_equation_without_argument_term_fails(self):
        spec = GSpec(2, 0, (), (0.0, 0.0, 0.0, 0.0))
        assert g_ode_residual(1.0, spec, x_term=False) > 1e-2


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_bessel_y_reduction(nu, x):
    ref = x ** (nu / 2) * sc.yv(nu, 2 * math.sqrt(x))
    assert g_contour(x, GSpec(2, 0, (-0.5,), (0.0, nu, -0.5))) == pytest.approx(ref, rel=1e-9)


def test_default_contour_is_valid():
    for spec in [GSpec(2, 0, (), (0, 0, 0, 0)), GSpec(1, 0, (), (0.3, 0)), GSpec(2, 0, (-0.5,), (0, 1, -0.5))]:
        for x in (1e-3, 1.0, 1e3):
            default_contour(x, spec).check(spec)
