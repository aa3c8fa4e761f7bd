import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special as sc

from conefourier import radial as rd
from conefourier.errors import AliasingDetected, ParameterOutOfRange
from conefourier.gfun import GSpec, g_contour
from conefourier.radial import RadialFn, RadialGrid, SectorIndex, Signature

WIDE = RadialGrid(-30.0, 7.0, 8192)


def rel_norm(a: RadialFn, b: RadialFn) -> float:
    return (a - b).norm() / b.norm()


class TestSignature:
    @pytest.mark.parametrize("pq", [(2, 4), (3, 2), (3, 1), (2, 2), (4, 3)])
    def test_inadmissible(self, pq):
        with pytest.raises(ValueError):
            Signature(*pq)

    def test_eigenvalue_examples(self):
        assert rd.eigenvalue(Signature(3, 3), SectorIndex(0, 0)) == 1
        assert rd.eigenvalue(Signature(6, 2), SectorIndex(1, 0)) == -1


class TestEigenfunctions:
    @pytest.mark.parametrize("p,l", [(4, 0), (4, 2), (6, 1), (8, 3)])
    def test_q2_exponential_form(self, p, l):
        sig = Signature(p, 2)
        r = np.array([0.3, 1.0, 2.5])
        ref = math.sqrt(math.pi) / 2 * r ** l * np.exp(-2 * r)
        for k in (0, 1):
            np.testing.assert_allclose(rd.f_lk(sig, SectorIndex(l, k))(r), ref, rtol=1e-13)

    def test_case_two_example(self):
        r = np.array([0.2, 1.1, 3.0])
        np.testing.assert_allclose(rd.f_lk(Signature(3, 3), SectorIndex(0, 1))(r), r * sc.k0(2 * r), rtol=1e-14)

    def test_large_r_asymptotics(self):
        sig, idx = Signature(5, 3), SectorIndex(1, 0)
        f = rd.f_lk(sig, idx)
        ratio = [f(r) / (r ** (-(sig.q - 2) / 2 + idx.l) * math.exp(-2 * r)) for r in (20.0, 80.0, 300.0)]
        assert abs(ratio[2] / ratio[1] - 1) < abs(ratio[1] / ratio[0] - 1)
        assert ratio[2] == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-3)

    def test_norm_example(self):
        assert rd.f_lk_norm_sq(Signature(3, 3), SectorIndex(0, 0)) == pytest.approx(1 / 16, rel=1e-15)

    @pytest.mark.parametrize("pq,lk", [((4, 4), (1, 2)), ((6, 2), (2, 1)), ((3, 3), (3, 0))])
    def test_norm_quadrature(self, pq, lk):
        sig, idx = Signature(*pq), SectorIndex(*lk)
        f = rd.f_lk(sig, idx)
        val, _ = integrate.quad(lambda r: f(r) ** 2 * r ** (sig.p + sig.q - 5) / 2, 0, np.inf,
                                epsabs=0, epsrel=1e-12, limit=200)
        assert val == pytest.approx(rd.f_lk_norm_sq(sig, idx), rel=1e-9)

    def test_boundary_cases_agree(self):
        # shift 0 means both case formulas apply; f_lk asserts they coincide
        sig, idx = Signature(4, 4), SectorIndex(1, 1)
        assert idx.shift(sig) == 0
        rd.f_lk(sig, idx)

    def test_mellin_at_zero(self):
        assert rd.f_lk_mellin(Signature(3, 3), SectorIndex(0, 0), 0.0).real == pytest.approx(math.pi / 4, rel=1e-14)

    def test_mellin_quadrature(self):
        sig, idx, x = Signature(4, 2), SectorIndex(2, 0), 1.3
        f = rd.f_lk(sig, idx)
        e = (sig.p + sig.q - 6) / 2
        re, _ = integrate.quad(lambda r: r ** e * math.cos(x * math.log(r)) * f(r), 0, 60, limit=400)
        im, _ = integrate.quad(lambda r: r ** e * math.sin(x * math.log(r)) * f(r), 0, 60, limit=400)
        assert abs(rd.f_lk_mellin(sig, idx, x) - complex(re, im)) <= 1e-9 * abs(complex(re, im))

    @given(st.floats(-30, 30))
    def test_mellin_conjugate_symmetry(self, x):
        sig, idx = Signature(5, 3), SectorIndex(2, 1)
        assert rd.f_lk_mellin(sig, idx, -x) == pytest.approx(np.conj(rd.f_lk_mellin(sig, idx, x)), rel=1e-13)

    def test_fourier_of_sigma_plus(self):
        sig, idx, z = Signature(4, 4), SectorIndex(1, 0), 0.7
        g = lambda x: np.exp(0.5 * sig.weight_exp * x) * rd.f_lk(sig, idx)(np.exp(x)) / math.sqrt(2)  # noqa
        re, _ = integrate.quad(lambda x: g(x) * math.cos(z * x), -40, 6, limit=400)
        im, _ = integrate.quad(lambda x: g(x) * math.sin(z * x), -40, 6, limit=400)
        ref = complex(re, im) / math.sqrt(2 * math.pi)
        assert abs(rd.flk_fourier(sig, idx, z) - ref) <= 1e-9 * abs(ref)

    def test_sigma_minus_recurrence(self):
        sig, idx = Signature(5, 3), SectorIndex(1, 0)
        up = SectorIndex(2, 1)

        def sm(ix, x):
            return np.exp(-0.5 * sig.weight_exp * x) * rd.f_lk(sig, ix)(np.exp(-x)) / math.sqrt(2)

        x, h = 0.4, 1e-4
        d = (sm(idx, x + h) - sm(idx, x - h)) / (2 * h)
        rhs = -(sig.weight_exp / 2 + idx.l + idx.k) * sm(idx, x) + 2 * sm(up, x)
        assert d == pytest.approx(rhs, rel=1e-7)


class TestKernel:
    @pytest.mark.parametrize("p,l,k", [(4, 0, 0), (6, 1, 1), (8, 2, 0)])
    def test_q2_bessel_form_matches_g(self, p, l, k):
        sig, idx = Signature(p, 2), SectorIndex(l, k)
        t = np.array([0.3, 1.0, 4.0])
        a = rd.kernel_K_lk(sig, idx, t, use_bessel=True)
        b = rd.kernel_K_lk(sig, idx, t, use_bessel=False)
        np.testing.assert_allclose(a, b, rtol=1e-9)

    def test_33_is_g_function(self):
        t = 1.7
        ref = 4 * g_contour(t * t, GSpec(2, 0, (), (0, 0, 0, 0)))
        assert rd.kernel_K_lk(Signature(3, 3), SectorIndex(0, 0), t) == pytest.approx(ref, rel=1e-13)

    def test_small_t_order(self):
        # exponent -q + 3 + l - k = 0 at (4,4,1,0): bounded with a finite limit
        sig, idx = Signature(4, 4), SectorIndex(1, 0)
        v = [rd.kernel_K_lk(sig, idx, t) for t in (1e-3, 1e-4, 1e-5)]
        assert abs(v[2] - v[1]) < abs(v[1] - v[0]) < 0.1

    def test_positive_t_required(self):
        with pytest.raises(ValueError):
            rd.kernel_K_lk(Signature(3, 3), SectorIndex(0, 0), 0.0)


class TestMultiplier:
    @pytest.mark.parametrize("pq,lk", [((3, 3), (0, 0)), ((4, 4), (1, 1)), ((6, 2), (1, 0)), ((5, 3), (2, 0))])
    def test_value_at_zero(self, pq, lk):
        sig, idx = Signature(*pq), SectorIndex(*lk)
        ref = (-1) ** (idx.l + sig.half_diff)
        assert rd.psi_multiplier(sig, idx, 0.0) == pytest.approx(ref, abs=1e-14)

    def test_example_value(self):
        assert rd.psi_multiplier(Signature(4, 4), SectorIndex(1, 1), 0.0) == pytest.approx(-1, abs=1e-15)

    @given(st.sampled_from([(3, 3), (4, 4), (4, 2), (6, 2), (7, 3)]), st.integers(0, 3), st.integers(0, 1),
           st.floats(-200, 200))
    def test_unimodular(self, pq, l, k, z):
        sig = Signature(*pq)
        assert abs(abs(rd.psi_multiplier(sig, SectorIndex(l, k), z)) - 1) < 1e-12

    @given(st.sampled_from([(3, 3), (4, 4), (6, 2)]), st.integers(0, 3), st.integers(0, 1), st.floats(-50, 50))
    def test_conjugate_symmetry(self, pq, l, k, z):
        sig, idx = Signature(*pq), SectorIndex(l, k)
        assert rd.psi_multiplier(sig, idx, -z) == pytest.approx(np.conj(rd.psi_multiplier(sig, idx, z)), abs=1e-12)

    def test_decay_on_shifted_line(self):
        sig, idx, eta = Signature(4, 4), SectorIndex(1, 0), 0.7
        ratios = [abs(rd.psi_multiplier(sig, idx, xi - 1j * eta)) * (xi / 2) ** (2 * eta) for xi in (50, 200, 800)]
        assert abs(ratios[2] - 1) < abs(ratios[1] - 1) < abs(ratios[0] - 1) < 1e-2


class TestTransforms:
    @pytest.mark.parametrize("pq,lk", [((3, 3), (0, 0)), ((6, 2), (1, 0)), ((4, 4), (2, 1)), ((5, 3), (0, 2))])
    def test_eigenvector(self, pq, lk):
        sig, idx = Signature(*pq), SectorIndex(*lk)
        f = RadialFn.from_callable(WIDE, sig, rd.f_lk(sig, idx))
        ev = rd.eigenvalue(sig, idx)
        assert rel_norm(rd.t_lk_multiplier(f, idx), f.scaled(ev)) <= 1e-5

    def test_eigenvector_direct_route(self):
        sig, idx = Signature(3, 3), SectorIndex(0, 0)
        f = RadialFn.from_callable(WIDE, sig, rd.f_lk(sig, idx))
        assert rel_norm(rd.t_lk_direct(f, idx), f) <= 1e-5

    def test_direct_vs_multiplier_gaussian_bump(self):
        grid = RadialGrid()
        sig, idx = Signature(3, 3), SectorIndex(1, 1)
        f = rd.sigma_plus_inverse(np.exp(-0.5 * ((grid.x + 1.5) / 0.6) ** 2), grid, sig)
        assert rel_norm(rd.t_lk_direct(f, idx), rd.t_lk_multiplier(f, idx)) <= 1e-5

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**31), st.sampled_from([(3, 3), (4, 4), (4, 2), (6, 2)]), st.integers(0, 3),
           st.integers(0, 1))
    def test_unitary_involution(self, seed, pq, l, k):
        sig, idx = Signature(*pq), SectorIndex(l, k)
        f = rd.random_smooth_fn(RadialGrid(), sig, np.random.default_rng(seed))
        Tf = rd.t_lk_multiplier(f, idx)
        assert abs(Tf.norm() / f.norm() - 1) <= 1e-4
        assert rel_norm(rd.t_lk_multiplier(Tf, idx, edge_tol=None), f) <= 1e-4

    def test_sigma_norm_is_measure_norm(self):
        sig = Signature(4, 4)
        f = RadialFn.from_callable(WIDE, sig, lambda r: r * np.exp(-r * r))
        val, _ = integrate.quad(lambda r: (r * math.exp(-r * r)) ** 2 * r ** 3 / 2, 0, np.inf, epsrel=1e-13)
        assert f.norm() ** 2 == pytest.approx(val, rel=1e-10)

    def test_sigma_minus_reflects(self):
        sig = Signature(4, 4)
        f = RadialFn.from_callable(RadialGrid(), sig, lambda r: np.exp(-r))
        xs, vals = rd.sigma_minus(f)
        np.testing.assert_array_equal(xs, -f.grid.x[::-1])
        np.testing.assert_array_equal(vals, rd.sigma_plus(f)[::-1])

    def test_aliasing_guard(self):
        sig = Signature(3, 3)
        f = RadialFn.from_callable(RadialGrid(), sig, lambda r: np.ones_like(r))
        with pytest.raises(AliasingDetected):
            rd.t_lk_multiplier(f, SectorIndex(0, 0))

    def test_dilation_commutes_with_norm(self):
        sig = Signature(4, 4)
        f = rd.random_smooth_fn(RadialGrid(), sig, np.random.default_rng(3))
        assert rd.dilate(f, 37).norm() == pytest.approx(f.norm(), rel=1e-12)


class TestFox:
    def _bump(self, grid, c=0.0, w=0.7):
        return np.exp(-0.5 * ((grid.x - c) / w) ** 2) * np.exp(-grid.x / 2)

    @staticmethod
    def _norm(v, grid):
        return math.sqrt(np.sum(v ** 2 * grid.r) * grid.dx)

    def test_unitary_and_involutive(self):
        grid = rd.fox_grid(1.0)
        f = self._bump(grid)
        Sf = rd.fox_g_transform(0.0, 0.0, 1.0, f, grid)
        assert self._norm(Sf, grid) == pytest.approx(self._norm(f, grid), rel=1e-4)
        SSf = rd.fox_g_transform(0.0, 0.0, 1.0, Sf, grid, check=False)
        assert self._norm(SSf - f, grid) / self._norm(f, grid) <= 1e-4

    def test_hankel_specialization(self):
        # b2 = b1 + 1/2, gamma = 1 gives the Bessel kernel (xy)^(-1/4) J_(4 b1 + 1)(4 (xy)^(1/4))
        grid = rd.fox_grid(1.0)
        f = self._bump(grid, c=-1.0, w=0.5)
        Sf = rd.fox_g_transform(0.0, 0.5, 1.0, f, grid)
        fy = lambda y: math.exp(-0.5 * ((math.log(y) + 1.0) / 0.5) ** 2) / math.sqrt(y)  # noqa: E731
        for i in (grid.N // 2 - 300, grid.N // 2, grid.N // 2 + 200):
            x = grid.r[i]
            val, _ = integrate.quad(lambda y: (x * y) ** -0.25 * sc.j1(4 * (x * y) ** 0.25) * fy(y), 1e-6, 50,
                                    limit=800, epsabs=1e-13)
            assert Sf[i] == pytest.approx(val, rel=1e-6, abs=1e-9)

    def test_maps_to_cone_sector(self):
        assert rd.fox_to_sector(0.0, 0.0, 1.0) == (Signature(3, 3), SectorIndex(0, 0))
        assert rd.fox_to_sector(0.0, 0.5, 1.0) == (Signature(4, 2), SectorIndex(0, 0))

    def test_parameter_checks(self):
        with pytest.raises(ParameterOutOfRange):
            rd.fox_g_transform(0.3, 0.0, 1.0, np.zeros(4096), RadialGrid())
        with pytest.raises(ParameterOutOfRange):
            rd.fox_g_transform(0.0, 1.5, 1.0, np.zeros(4096), RadialGrid())
