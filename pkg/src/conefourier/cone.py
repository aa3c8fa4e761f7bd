"""Functions on the isotropic cone ``C = {(r w, r e)}`` in ``R^(p-1) x R^(q-1)``.

The measure is ``dmu = r^(p+q-5)/2 dr dw de`` in bipolar coordinates.
Two independent evaluations of the inversion ``F_C`` are provided:

* the harmonic route, which applies ``T_{l,k}`` sector by sector;
* the Radon route, which integrates ``u`` over the hyperplane sections
  ``<xi, x> = t`` and pairs the result with the Bessel distribution
  ``c_{p,q} Phi_{p,q}``.

Only bi-zonal inputs are handled: every sector is
``f(r) Z_l(<w, w0>) Z_k(<e, e0>)`` with ``Z`` the zonal harmonic normalised
by ``Z(1) = 1``. Grid functions store samples on ``RadialGrid`` times the
zonal nodes of both spheres.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .distrib import BesselDistribution, DistKind, TestFn, bessel_dist, bessel_dist_pair
from .errors import (DomainError, InsufficientSmoothness, OnSingularSupport, ParameterError,
                     QuadratureFailure, ResamplingError)
from .harmonics import SphereQuad, _horner, _zonal_coeffs, sphere_volume
from .radial import (RadialFn, RadialGrid, SectorIndex, Signature, f_lk, sigma_plus,
                     sigma_plus_inverse, t_lk_direct, t_lk_multiplier)
from .specfun import bessel, gegenbauer_normalized, gegenbauer_tilde

__all__ = [
    "KernelSpec",
    "kernel_spec",
    "ConePoint",
    "zonal_profile",
    "zonal_norm_sq",
    "Sector",
    "ConeFunctionStructured",
    "ConeGridFunction",
    "Rotation",
    "M0",
    "Dilation",
    "Translation",
    "Inversion",
    "cone_norm",
    "synthesize",
    "harmonic_project",
    "act_parabolic",
    "inversion_fc",
    "group_word_apply",
    "evaluate",
    "fc_harmonic_at",
    "chord_density",
    "radon_transform",
    "radon_test_fn",
    "fc_via_radon",
    "kernel_via_distribution",
    "kernel_pointwise",
    "kernel_ode_residual",
    "hankel_product_integral",
    "hankel_product_closed",
]


# ---------------------------------------------------------------------------
# kernel


@dataclass(frozen=True)
class KernelSpec:
    """``K(x, x') = c * Phi(<x, x'>)`` for one signature."""

    sig: Signature
    c: float
    dist: BesselDistribution


def kernel_spec(sig: Signature) -> KernelSpec:
    """Constant ``2 (-1)^((p-1)(p+2)/2) / pi^((p+q-4)/2)`` and the parity-selected distribution."""
    p, q = sig.p, sig.q
    c = 2.0 * (-1) ** (((p - 1) * (p + 2) // 2) % 2) / math.pi ** ((p + q - 4) / 2)
    if min(p, q) == 2:
        kind = DistKind.PHI_PLUS
    elif p % 2 == 0:
        kind = DistKind.PSI_PLUS
    else:
        kind = DistKind.PSI
    return KernelSpec(sig, c, bessel_dist(sig.m, kind))


# ---------------------------------------------------------------------------
# points and zonal profiles


@dataclass(frozen=True)
class ConePoint:
    """Point ``(r w, r e)`` of the cone stored in bipolar form."""

    r: float
    omega: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=float)
        et = np.asarray(self.eta, dtype=float)
        if not self.r > 0:
            raise DomainError("radius must be positive")
        if abs(np.linalg.norm(om) - 1) > 1e-10 or abs(np.linalg.norm(et) - 1) > 1e-10:
            raise DomainError("angular parts must be unit vectors")
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "eta", et)

    @classmethod
    def from_ambient(cls, x, p: int) -> "ConePoint":
        x = np.asarray(x, dtype=float)
        a, b = x[: p - 1], x[p - 1:]
        ra, rb = np.linalg.norm(a), np.linalg.norm(b)
        if ra == 0 or abs(ra - rb) > 1e-10 * max(ra, rb):
            raise DomainError("point is not on the cone")
        return cls(ra, a / ra, b / rb)

    @classmethod
    def random(cls, sig: Signature, rng: np.random.Generator, r=(0.3, 3.0)) -> "ConePoint":
        om = rng.normal(size=sig.p - 1)
        et = rng.normal(size=sig.q - 1)
        return cls(float(rng.uniform(*r)), om / np.linalg.norm(om), et / np.linalg.norm(et))

    def ambient(self) -> np.ndarray:
        return np.concatenate([self.r * self.omega, self.r * self.eta])


def zonal_profile(l: int, dim: int):
    """Zonal harmonic of degree ``l`` on ``S^(dim-1)`` as a function of ``<w, w0>``, with value 1 at the pole.

    ``dim = 1`` is the two-point sphere, where only ``l <= 1`` exists.
    """
    if dim == 1:
        if l > 1:
            raise ParameterError("the zero sphere carries only degrees 0 and 1")
        return lambda x: np.asarray(x, dtype=float) ** l
    mu = (dim - 2) / 2
    top = gegenbauer_normalized(l, mu, 1.0)
    return lambda x: gegenbauer_normalized(l, mu, np.asarray(x, dtype=float)) / top


def _zonal_nodes(dim: int, n_nodes: int):
    """Nodes and weights for ``int_{S^(dim-1)} g(<w, w0>) dw``."""
    if dim == 1:
        return np.array([-1.0, 1.0]), np.array([1.0, 1.0])
    sq = SphereQuad(dim, n_nodes)
    return sq.nodes, sq.weights * sphere_volume(dim - 1)


@lru_cache(maxsize=None)
def zonal_norm_sq(l: int, dim: int) -> float:
    """``int |Z_l(<w, w0>)|^2 dw`` over ``S^(dim-1)``."""
    x, w = _zonal_nodes(dim, l + 8)
    return float(np.dot(zonal_profile(l, dim)(x) ** 2, w))


# ---------------------------------------------------------------------------
# function representations


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise DomainError("axis must be nonzero")
    return v / n


@dataclass(frozen=True)
class Sector:
    """One bi-zonal sector ``f(r) Z_l(<w, axis_p>) Z_k(<e, axis_q>)``."""

    idx: SectorIndex
    radial: RadialFn
    axis_p: np.ndarray
    axis_q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axis_p", _unit(self.axis_p))
        object.__setattr__(self, "axis_q", _unit(self.axis_q))

    def angular(self, omega, eta) -> float:
        sig = self.radial.sig
        zp = zonal_profile(self.idx.l, sig.p - 1)(np.dot(omega, self.axis_p))
        zq = zonal_profile(self.idx.k, sig.q - 1)(np.dot(eta, self.axis_q))
        return float(zp * zq)


@dataclass(frozen=True)
class ConeFunctionStructured:
    """Finite sum of bi-zonal sectors with distinct bidegrees."""

    sig: Signature
    sectors: tuple

    def __post_init__(self):
        secs = tuple(self.sectors)
        object.__setattr__(self, "sectors", secs)
        seen = set()
        for s in secs:
            if s.radial.sig != self.sig:
                raise ParameterError("sector signature mismatch")
            key = (s.idx.l, s.idx.k)
            if key in seen:
                raise ParameterError(f"duplicate sector {key}")
            seen.add(key)
            if self.sig.q == 2 and s.idx.k > 1:
                raise ParameterError("q = 2 admits only k <= 1")

    @classmethod
    def single(cls, sig: Signature, idx: SectorIndex, radial: RadialFn, axis_p=None, axis_q=None):
        ap = np.eye(sig.p - 1)[0] if axis_p is None else axis_p
        aq = np.eye(sig.q - 1)[0] if axis_q is None else axis_q
        return cls(sig, (Sector(idx, radial, ap, aq),))

    def map_radial(self, fn) -> "ConeFunctionStructured":
        return ConeFunctionStructured(self.sig, tuple(replace(s, radial=fn(s)) for s in self.sectors))


@dataclass
class ConeGridFunction:
    """Bi-zonal samples ``u(r_i, x_j, y_m)`` with ``x = <w, axis_p>``, ``y = <e, axis_q>``.

    ``values`` has shape ``(N, n_x, n_y)`` and may be complex.
    """

    sig: Signature
    grid: RadialGrid
    values: np.ndarray
    axis_p: np.ndarray
    axis_q: np.ndarray
    n_nodes: int = 24
    x: np.ndarray = field(init=False, repr=False)
    wx: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)
    wy: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.x, self.wx = _zonal_nodes(self.sig.p - 1, self.n_nodes)
        self.y, self.wy = _zonal_nodes(self.sig.q - 1, self.n_nodes)
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.N, self.x.size, self.y.size):
            raise ValueError("sample array shape does not match the grids")
        self.axis_p = _unit(self.axis_p)
        self.axis_q = _unit(self.axis_q)

    def with_values(self, values) -> "ConeGridFunction":
        return ConeGridFunction(self.sig, self.grid, values, self.axis_p, self.axis_q, self.n_nodes)


# ---------------------------------------------------------------------------
# norms, synthesis and projection


def _radial_weights(grid: RadialGrid, sig: Signature) -> np.ndarray:
    return 0.5 * grid.r ** sig.weight_exp * grid.dx


def cone_norm(u) -> float:
    """L2 norm for ``dmu``; structured inputs use the sector sum of products of norms."""
    if isinstance(u, ConeFunctionStructured):
        sig = u.sig
        tot = sum(s.radial.norm() ** 2 * zonal_norm_sq(s.idx.l, sig.p - 1)
                  * zonal_norm_sq(s.idx.k, sig.q - 1) for s in u.sectors)
        return math.sqrt(tot)
    w = _radial_weights(u.grid, u.sig)
    dens = np.abs(u.values) ** 2
    return math.sqrt(float(np.einsum("ijk,i,j,k->", dens, w, u.wx, u.wy)))


def synthesize(u: ConeFunctionStructured, n_nodes: int = 24) -> ConeGridFunction:
    """Sample a structured function on the bi-zonal grid (all sectors must share axes)."""
    if not u.sectors:
        raise ParameterError("empty function has no grid")
    s0 = u.sectors[0]
    for s in u.sectors[1:]:
        if (not np.allclose(s.axis_p, s0.axis_p) or not np.allclose(s.axis_q, s0.axis_q)
                or s.radial.grid != s0.radial.grid):
            raise ResamplingError("sectors with different axes or grids have no common bi-zonal grid")
    sig, grid = u.sig, s0.radial.grid
    x, _ = _zonal_nodes(sig.p - 1, n_nodes)
    y, _ = _zonal_nodes(sig.q - 1, n_nodes)
    vals = np.zeros((grid.N, x.size, y.size))
    for s in u.sectors:
        zx = zonal_profile(s.idx.l, sig.p - 1)(x)
        zy = zonal_profile(s.idx.k, sig.q - 1)(y)
        vals += np.einsum("i,j,k->ijk", s.radial.values, zx, zy)
    return ConeGridFunction(sig, grid, vals, s0.axis_p, s0.axis_q, n_nodes)


def harmonic_project(u: ConeGridFunction, l: int, k: int) -> RadialFn:
    """Radial coefficient of the zonal ``(l, k)`` component of ``u``.

    Raises
    ------
    QuadratureFailure
        If the zonal rule cannot integrate degree ``l`` exactly.
    """
    sig = u.sig
    if sig.q == 2 and k > 1:
        raise ParameterError("q = 2 admits only k <= 1")
    if 2 * u.n_nodes <= l + k + 1:
        raise QuadratureFailure("too few zonal nodes for this degree")
    zx = zonal_profile(l, sig.p - 1)(u.x) * u.wx
    zy = zonal_profile(k, sig.q - 1)(u.y) * u.wy
    coef = np.einsum("ijk,j,k->i", u.values, zx, zy)
    coef = coef / (zonal_norm_sq(l, sig.p - 1) * zonal_norm_sq(k, sig.q - 1))
    if np.iscomplexobj(coef):
        if np.abs(coef.imag).max() > 1e-12 * max(np.abs(coef).max(), 1e-300):
            raise ParameterError("projection of a complex function has no real radial factor")
        coef = coef.real
    return RadialFn(u.grid, sig, coef)


def evaluate(u: ConeFunctionStructured, xi: ConePoint) -> float:
    """Pointwise value of a structured function (cubic spline in ``log r``)."""
    return sum(_radial_at(s.radial, xi.r) * s.angular(xi.omega, xi.eta) for s in u.sectors)


def _radial_spline(f: RadialFn):
    return CubicSpline(f.grid.x, sigma_plus(f), extrapolate=False)


def _radial_at(f: RadialFn, r):
    """``f(r)`` from the spline of ``sigma_+ f``; zero outside the grid window."""
    r = np.asarray(r, dtype=float)
    g = np.nan_to_num(_radial_spline(f)(np.log(r)))
    return g * math.sqrt(2.0) * r ** (-0.5 * f.sig.weight_exp)


# ---------------------------------------------------------------------------
# parabolic generators


@dataclass(frozen=True)
class Rotation:
    """Block rotation ``diag(A, B)`` with ``A in O(p-1)``, ``B in O(q-1)``."""

    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class M0:
    """The central element acting by ``(-1)^((p-q)/2)``."""


@dataclass(frozen=True)
class Dilation:
    t: float


@dataclass(frozen=True)
class Translation:
    """Character ``exp(2i <a, x>)``."""

    a: np.ndarray


@dataclass(frozen=True)
class Inversion:
    """The inversion element, acting by ``F_C``."""


def _shift_log(values: np.ndarray, dx: float, t: float) -> np.ndarray:
    """``g(x - t)`` for samples ``g`` by a zero-padded Fourier phase shift (exact for integer steps)."""
    steps = t / dx
    if abs(steps - round(steps)) < 1e-12:
        s = int(round(steps))
        out = np.zeros_like(values)
        if s >= 0:
            out[s:] = values[: values.shape[0] - s]
        else:
            out[:s] = values[-s:]
        return out
    n = values.shape[0]
    pad = np.concatenate([values, np.zeros_like(values)], axis=0)
    zeta = 2 * math.pi * np.fft.fftfreq(2 * n, d=dx)
    ph = np.exp(-1j * zeta * t).reshape((-1,) + (1,) * (values.ndim - 1))
    out = np.fft.ifft(np.fft.fft(pad, axis=0) * ph, axis=0)[:n]
    return out if np.iscomplexobj(values) else out.real


def _dilate_radial(f: RadialFn, t: float) -> RadialFn:
    # sigma_+ of e^{-(p+q-4)t/2} f(e^{-t} r) is (sigma_+ f)(x - t)
    return sigma_plus_inverse(_shift_log(sigma_plus(f), f.grid.dx, t), f.grid, f.sig)


def _check_orthogonal(M, dim):
    M = np.asarray(M, dtype=float)
    if M.shape != (dim, dim) or not np.allclose(M @ M.T, np.eye(dim), atol=1e-12):
        raise ParameterError("rotation blocks must be orthogonal of the right size")
    return M


def act_parabolic(g, u):
    """Action of a parabolic generator.

    Structured functions keep their form under rotations, ``M0`` and
    dilations; a translation turns them into grid functions. On grid
    functions, rotations must fix or reverse the axes.

    Raises
    ------
    ResamplingError
    """
    sig = u.sig
    if isinstance(g, M0):
        sgn = (-1) ** sig.half_diff
        if isinstance(u, ConeFunctionStructured):
            return u.map_radial(lambda s: s.radial.scaled(sgn))
        return u.with_values(sgn * u.values)
    if isinstance(g, Dilation):
        if isinstance(u, ConeFunctionStructured):
            return u.map_radial(lambda s: _dilate_radial(s.radial, g.t))
        w = (0.5 * u.grid.r ** sig.weight_exp)[:, None, None] ** 0.5
        shifted = _shift_log(w * u.values, u.grid.dx, g.t)
        return u.with_values(shifted / w)
    if isinstance(g, Rotation):
        A = _check_orthogonal(g.A, sig.p - 1)
        B = _check_orthogonal(g.B, sig.q - 1)
        if isinstance(u, ConeFunctionStructured):
            return ConeFunctionStructured(sig, tuple(
                replace(s, axis_p=A @ s.axis_p, axis_q=B @ s.axis_q) for s in u.sectors))
        vals = u.values
        for M, ax, axis in ((A, u.axis_p, 1), (B, u.axis_q, 2)):
            image = M @ ax
            if np.allclose(image, ax, atol=1e-12):
                continue
            if np.allclose(image, -ax, atol=1e-12):
                vals = np.flip(vals, axis=axis)  # zonal nodes are symmetric
                continue
            raise ResamplingError("rotation moves the grid axis; resampling is not supported")
        return u.with_values(vals)
    if isinstance(g, Translation):
        a = np.asarray(g.a, dtype=float)
        if a.shape != (sig.n,):
            raise ParameterError("translation vector has the wrong length")
        if isinstance(u, ConeFunctionStructured):
            if not np.any(a):
                return u
            u = synthesize(u)
        ap, aq = a[: sig.p - 1], a[sig.p - 1:]
        alpha, beta = np.dot(ap, u.axis_p), np.dot(aq, u.axis_q)
        if (np.linalg.norm(ap - alpha * u.axis_p) > 1e-12
                or np.linalg.norm(aq - beta * u.axis_q) > 1e-12):
            raise ResamplingError("translation not aligned with the axes breaks bi-zonal form")
        phase = 2 * np.einsum("i,jk->ijk", u.grid.r,
                              alpha * u.x[:, None] + beta * u.y[None, :])
        return u.with_values(np.exp(1j * phase) * u.values)
    if isinstance(g, Inversion):
        return inversion_fc(u)
    raise ParameterError(f"unknown group element {g!r}")


def inversion_fc(u: ConeFunctionStructured, method: str = "multiplier",
                 edge_tol: float | None = 1e-10) -> ConeFunctionStructured:
    """``F_C`` sector by sector: ``T_{l,k}`` on the radial factor, angular parts kept."""
    if not isinstance(u, ConeFunctionStructured):
        raise ResamplingError("the inversion needs the structured representation")
    if method == "multiplier":
        fn = lambda s: t_lk_multiplier(s.radial, s.idx, edge_tol=edge_tol)  # noqa: E731
    elif method == "direct":
        fn = lambda s: t_lk_direct(s.radial, s.idx)  # noqa: E731
    else:
        raise ParameterError("method must be 'multiplier' or 'direct'")
    return u.map_radial(fn)


def group_word_apply(word, u, edge_tol: float | None = None):
    """Apply a word of generators left to right (the first letter acts first)."""
    for g in word:
        if isinstance(g, Inversion):
            u = inversion_fc(u, edge_tol=edge_tol)
        else:
            u = act_parabolic(g, u)
    return u


def fc_harmonic_at(u: ConeFunctionStructured, xi: ConePoint, method: str = "multiplier") -> float:
    """``(F_C u)(xi)`` by the harmonic route."""
    return evaluate(inversion_fc(u, method=method), xi)


# ---------------------------------------------------------------------------
# Radon route


def _chord_value(sig: Signature, l: int, k: int, u: float) -> float:
    """Chord density ``rho_{l,k}(u)`` for ``0 < u < 2``."""
    p, q = sig.p, sig.q
    a = (p - 4) / 2
    zx = _horner(_zonal_coeffs(l, p - 1))
    if q == 2:
        # the second sphere is {+1, -1}; only y = +1 meets 0 < u < 2
        x = u - 1.0
        return zx(x) * ((2.0 - u) * u) ** a
    b = (q - 4) / 2
    zy = _horner(_zonal_coeffs(k, q - 1))
    L = 2.0 - u

    # x = u - 1 + s, y = 1 - s; 1 - x = L - s and 1 - y = s are the algebraic weights
    def f(s):
        c1, c2 = u + s, u + L - s
        if c1 <= 0 or c2 <= 0:
            return 0.0
        return zx(u - 1 + s) * zy(1 - s) * c1 ** a * c2 ** b

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0.0, L, weight="alg", wvar=(b, a),
                                limit=200, epsabs=1e-15, epsrel=1e-12)
    if not math.isfinite(val):
        raise QuadratureFailure("chord quadrature failed")
    return val


def chord_density(sig: Signature, l: int, k: int, u):
    """Co-area density of ``x + y`` at level ``u``.

    ``rho(u) = int_{x+y=u} Z_l(x) Z_k(y) (1-x^2)^((p-4)/2) (1-y^2)^((q-4)/2)``
    with the Funk-Hecke normalisations of both spheres folded into ``Z``.
    Odd in ``u`` when ``l + k`` is odd, even otherwise; zero for ``|u| >= 2``.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    for i, v in np.ndenumerate(u):
        if v == 0 or abs(v) >= 2:
            if v == 0 and sig.p + sig.q > 6 and sig.q > 2:
                out[i] = _chord_zero(sig, l, k)
            continue
        sg = 1.0 if v > 0 else (-1.0) ** (l + k)
        out[i] = sg * _chord_value(sig, l, k, abs(v))
    return float(out) if out.ndim == 0 else out


def _chord_zero(sig: Signature, l: int, k: int) -> float:
    a, b = (sig.p - 4) / 2, (sig.q - 4) / 2
    zx = _horner(_zonal_coeffs(l, sig.p - 1))
    zy = _horner(_zonal_coeffs(k, sig.q - 1))
    f = lambda x: zx(x) * zy(-x)  # noqa: E731
    val, _ = integrate.quad(f, -1.0, 1.0, weight="alg", wvar=(a + b, a + b), limit=200)
    return val


@lru_cache(maxsize=64)
def _chord_table(p: int, q: int, l: int, k: int, n_panel: int = 24, depth: int = 60):
    """Quadrature nodes ``u_i`` in ``(0, 2)`` and ``w_i rho(u_i)`` for integrals ``int_0^2 g(u) rho(u) du``.

    A Gauss-Jacobi panel absorbs the ``(2-u)^e`` edge of ``rho`` at ``u = 2``;
    geometric Gauss-Legendre panels toward ``u = 0`` resolve the endpoint
    behaviour there and the concentration of ``g`` for small ``|t|``.
    """
    from .specfun import gauss_jacobi
    sig = Signature(p, q)
    a = (p - 4) / 2
    e = a if q == 2 else a + (q - 4) / 2 + 1
    xj, wj = gauss_jacobi(n_panel, e, 0.0)  # weight (1-x)^e on [-1, 1]
    u1 = 1.5 + 0.5 * np.asarray(xj)
    w1 = np.asarray(wj) * 0.5 ** (e + 1)
    r1 = np.array([_chord_value(sig, l, k, v) / (2 - v) ** e for v in u1])
    xs, ws = np.polynomial.legendre.leggauss(n_panel)
    nodes, weights = [u1], [w1 * r1]
    for j in range(depth):
        lo, hi = 2.0 ** -(j + 1), 2.0 ** -j
        uj = lo + (hi - lo) * (xs + 1) / 2
        nodes.append(uj)
        weights.append(ws * (hi - lo) / 2 * np.array([_chord_value(sig, l, k, v) for v in uj]))
    return np.concatenate(nodes), np.concatenate(weights)


def _sector_radon(sec: Sector, s: float, t):
    """``R(sector)(s, t)`` without the angular factor, vectorized in ``t``."""
    sig, f = sec.radial.sig, sec.radial
    l, k = sec.idx.l, sec.idx.k
    nodes, wr = _chord_table(sig.p, sig.q, l, k)
    spline = _radial_spline(f)
    we = sig.weight_exp
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    for i, tv in enumerate(t):
        at = abs(tv)
        if at == 0:
            continue
        r = at / (s * nodes)
        g = np.nan_to_num(spline(np.log(r)))
        # f(r) r^(p+q-5) dr / (r s) becomes f(r) r^(p+q-4) du / |t| with u = |t| / (r s)
        fr = g * math.sqrt(2.0) * r ** (0.5 * we)
        val = 0.5 * np.dot(fr, wr) / at
        out[i] = val if tv > 0 else val * (-1) ** (l + k)
    return out


def _radon_at_zero(sec: Sector, s: float) -> float:
    """Continuous value ``Ru(xi, 0) = rho(0)/(2s) int f r^(p+q-6) dr`` (needs ``p + q >= 8``)."""
    sig, f = sec.radial.sig, sec.radial
    rho0 = _chord_zero(sig, sec.idx.l, sec.idx.k)
    integral = float(np.sum(f.values * f.grid.r ** (sig.weight_exp - 1)) * f.grid.dx)
    return 0.5 * rho0 * integral / s


def radon_transform(u: ConeFunctionStructured, xi: ConePoint, t):
    """``Ru(xi, t) = int_C u(x) delta(<xi, x> - t) dmu(x)`` for ``t != 0``.

    Raises
    ------
    DomainError
        If ``xi`` does not lie on the cone of ``u``.
    """
    _check_point(u.sig, xi)
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise DomainError("t = 0 is excluded")
    out = sum(s.angular(xi.omega, xi.eta) * _sector_radon(s, xi.r, t) for s in u.sectors)
    out = np.asarray(out, dtype=float)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def _check_point(sig: Signature, xi: ConePoint):
    if xi.omega.shape != (sig.p - 1,) or xi.eta.shape != (sig.q - 1,):
        raise DomainError("point does not lie on the cone of this signature")


def _support_radius(u: ConeFunctionStructured, s: float, rel: float = 1e-16) -> float:
    rmax = 0.0
    for sec in u.sectors:
        g = np.abs(sigma_plus(sec.radial))
        big = np.nonzero(g > rel * g.max())[0]
        rmax = max(rmax, sec.radial.grid.r[big[-1]] if big.size else 0.0)
    return 2.0 * rmax * s


def radon_test_fn(u: ConeFunctionStructured, xi: ConePoint) -> TestFn:
    """``t -> Ru(xi, t)`` packaged for pairing with a Bessel distribution.

    The smoothness budget at ``t = 0`` is ``(p+q-8)/2`` derivatives when
    ``p, q > 2`` (none otherwise). The value at 0 is the continuous limit;
    higher derivatives come from Richardson differences on a step scaled
    to the support.
    """
    _check_point(u.sig, xi)
    sig, s = u.sig, xi.r
    budget = (sig.p + sig.q - 8) // 2 if sig.q > 2 and sig.p + sig.q >= 8 else -1
    ang = [sec.angular(xi.omega, xi.eta) for sec in u.sectors]

    def value(t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t)
        out = np.zeros_like(flat)
        nz = flat != 0
        for a, sec in zip(ang, u.sectors):
            if nz.any():
                out[nz] += a * _sector_radon(sec, s, flat[nz])
            if (~nz).any() and budget >= 0:
                out[~nz] += a * _radon_at_zero(sec, s)
        return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)

    return TestFn(value=value, support_radius=_support_radius(u, s), k_max=max(budget, 0))


def fc_via_radon(u: ConeFunctionStructured, xi: ConePoint) -> float:
    """``(F_C u)(xi) = c_{p,q} <Phi_{p,q}, Ru(xi, .)>``.

    Raises
    ------
    InsufficientSmoothness
        If ``Ru(xi, .)`` lacks the derivatives at 0 the singular part pairs with.
    """
    spec = kernel_spec(u.sig)
    phi = radon_test_fn(u, xi)
    sing = spec.dist.singular
    need = max([j for j, _ in sing.delta_coeffs] + [k - 1 for k, _ in sing.pv_coeffs] + [-1])
    budget = (u.sig.p + u.sig.q - 8) // 2 if u.sig.q > 2 else -1
    if need > budget:
        raise InsufficientSmoothness(f"singular part needs {need} derivatives, Ru has {budget}")
    return spec.c * bessel_dist_pair(spec.dist, phi)


def kernel_via_distribution(sig: Signature, idx: SectorIndex, T: float) -> float:
    """``c_{p,q} <Phi_{p,q}(T u), rho_{l,k}(u)>``, which reproduces the radial kernel ``K_{l,k}(T)``."""
    spec = kernel_spec(sig)
    if spec.dist.singular.pv_coeffs or any(j > 0 for j, _ in spec.dist.singular.delta_coeffs):
        raise InsufficientSmoothness("only signatures with at most a delta term are supported")

    def value(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(np.atleast_1d(t))
        for i, v in enumerate(np.atleast_1d(t)):
            if v == 0:
                out[i] = _chord_zero(sig, idx.l, idx.k) / T if sig.p + sig.q > 6 else 0.0
            else:
                out[i] = chord_density(sig, idx.l, idx.k, v / T) / T
        return float(out[0]) if t.ndim == 0 else out

    return spec.c * bessel_dist_pair(spec.dist, TestFn(value=value, support_radius=2 * T))


# ---------------------------------------------------------------------------
# pointwise kernel


def kernel_pointwise(sig: Signature, x: ConePoint, xp: ConePoint) -> float:
    """``K(x, x') = c_{p,q} Phi_{p,q}(<x, x'>)`` off the singular support."""
    _check_point(sig, x)
    _check_point(sig, xp)
    t = float(np.dot(x.ambient(), xp.ambient()))
    if abs(t) < 1e-300:
        raise OnSingularSupport("<x, x'> = 0 lies on the singular support")
    spec = kernel_spec(sig)
    return spec.c * float(spec.dist.pointwise(t))


def kernel_ode_residual(sig: Signature, t: float, h: float | None = None) -> float:
    """Relative residual of ``t Psi'' + ((p+q-4)/2) Psi' + 2 Psi`` for the kernel profile."""
    if t == 0:
        raise OnSingularSupport("t = 0 lies on the singular support")
    spec = kernel_spec(sig)
    h = min(0.01, abs(t) / 8) if h is None else h
    offs = np.arange(-3, 4) * h
    v = np.array([float(spec.dist.pointwise(t + o)) for o in offs])
    d1 = np.dot([-1, 9, -45, 0, 45, -9, 1], v) / (60 * h)
    d2 = np.dot([2, -27, 270, -490, 270, -27, 2], v) / (180 * h * h)
    res = t * d2 + 0.5 * sig.weight_exp * d1 + 2 * v[3]
    scale = abs(t * d2) + abs(0.5 * sig.weight_exp * d1) + abs(2 * v[3])
    # the one-sided kinds vanish identically for t < 0
    return abs(res) / scale if scale > 0 else 0.0


# ---------------------------------------------------------------------------
# Hankel integral with trigonometric parameters


def _hankel_args(sig: Signature, v0: float, vlast: float):
    c = v0 + vlast
    if c <= 0:
        raise DomainError("need v_0 + v_last > 0")
    return c, math.sqrt(max(0.0, 1 - v0 * v0)), math.sqrt(max(0.0, 1 - vlast * vlast))


def hankel_product_integral(sig: Signature, idx: SectorIndex, v0: float, vlast: float) -> float:
    """``int f_{l,k}(r) J_mu(2|v'| r / c) J_nu(2|v''| r / c) r^((p+q-4)/2) dr`` by quadrature.

    ``mu = (p-3)/2 + l``, ``nu = (q-3)/2 + k``, ``c = v_0 + v_last`` and
    ``|v'|^2 = 1 - v_0^2``, ``|v''|^2 = 1 - v_last^2``.
    """
    c, s1, s2 = _hankel_args(sig, v0, vlast)
    mu, nu = (sig.p - 3) / 2 + idx.l, (sig.q - 3) / 2 + idx.k
    f = f_lk(sig, idx)

    def g(r):
        return (f(r) * bessel("J", mu, 2 * s1 * r / c) * bessel("J", nu, 2 * s2 * r / c)
                * r ** (0.5 * sig.weight_exp))

    tot = 0.0
    for lo, hi in ((0.0, 1.0), (1.0, 10.0), (10.0, 400.0)):
        val, _ = integrate.quad(g, lo, hi, limit=400, epsabs=1e-15, epsrel=1e-13)
        tot += val
    return tot


def hankel_product_closed(sig: Signature, idx: SectorIndex, v0: float, vlast: float) -> float:
    """Gegenbauer closed form of :func:`hankel_product_integral`."""
    c, s1, s2 = _hankel_args(sig, v0, vlast)
    d = idx.shift(sig)
    mu, nu = (sig.p - 3) / 2 + idx.l, (sig.q - 3) / 2 + idx.k
    pre = c * s1 ** mu * s2 ** nu
    if d >= 0:
        return (math.gamma(d + 1) / (2 ** (d + 3) * math.sqrt(math.pi)) * pre
                * gegenbauer_tilde(d, (sig.q - 2) / 2 + idx.k, vlast))
    return (math.gamma(-d + 1) / (2 ** (-d + 3) * math.sqrt(math.pi)) * pre
            * gegenbauer_tilde(-d, (sig.p - 2) / 2 + idx.l, v0))
