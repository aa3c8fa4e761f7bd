"""Zonal spherical harmonics, Funk-Hecke eigenvalues and two-sphere spectra.

Every spectrum used here reduces to Gegenbauer-weighted integrals over
``[-1, 1]`` or ``[-1, 1]^2``. Smooth integrands use Gauss-Jacobi product
rules; kernels with a power singularity along ``x + y = 0`` use nested
adaptive quadrature with the singular factor absorbed into the weight.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import DomainError, PoleError, QuadratureFailure
from .specfun import gauss_jacobi, gegenbauer_normalized, gegenbauer_tilde

__all__ = [
    "SphereQuad",
    "ZonalFn",
    "sphere_volume",
    "funk_hecke",
    "alpha_lk",
    "riesz_spectrum",
    "hlambda_spectrum",
    "hlambda_kernel",
    "hlambda_sign_constant",
    "gamma_lk",
    "alpha_lk_hlambda",
    "fractional_integral_2d",
    "fractional_integral_2d_quad",
    "intertwiner_apply",
    "intertwiner_norm_sq",
    "s3_quadrature",
    "gegenbauer_fourier",
    "gegenbauer_bessel_integral",
    "gegenbauer_bessel_closed",
    "hankel_trig_integral",
    "hankel_trig_closed",
]


@dataclass(frozen=True)
class SphereQuad:
    """Zonal quadrature for ``S^(m-1)``: nodes in ``[-1, 1]`` with weight ``(1-x^2)^((m-3)/2)``."""

    dim: int
    n_nodes: int = 128
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError("sphere dimension m must be at least 2")
        a = (self.dim - 3) / 2
        x, w = gauss_jacobi(self.n_nodes, a, a)
        object.__setattr__(self, "nodes", np.asarray(x))
        object.__setattr__(self, "weights", np.asarray(w))

    def integrate(self, f) -> float:
        return np.dot(np.asarray(f(self.nodes)), self.weights)


@dataclass(frozen=True)
class ZonalFn:
    """Zonal profile ``C~_l^((m-2)/2)`` of degree ``l`` on ``S^(m-1)``."""

    degree: int
    dim: int

    def __call__(self, x):
        return gegenbauer_tilde(self.degree, (self.dim - 2) / 2, x)


def sphere_volume(m: int) -> float:
    """Area of ``S^(m-1)``: ``2 pi^(m/2) / Gamma(m/2)``."""
    return 2 * math.pi ** (m / 2) / math.gamma(m / 2)


def _zonal_factor(l: int, n: int, x):
    """``2^(n-2) pi^((n-2)/2) l! C~_l^((n-2)/2)(x) / Gamma(n-2+l)``, continuous at ``n = 2``."""
    return 2.0 ** (n - 2) * math.pi ** ((n - 2) / 2) * gegenbauer_normalized(l, (n - 2) / 2, x)


def _zonal_coeffs(l: int, n: int) -> list:
    """Monomial coefficients (highest first) of :func:`_zonal_factor`."""
    mu = (n - 2) / 2
    if mu == 0:
        c = np.polynomial.chebyshev.cheb2poly([0] * l + [2.0])
    else:
        # C_l^mu via the three-term recurrence in coefficient form
        P0, P1 = np.array([1.0]), np.array([0.0, 2 * mu])
        if l == 0:
            c = P0
        else:
            for j in range(2, l + 1):
                P0, P1 = P1, (np.concatenate([[0.0], 2 * (j + mu - 1) * P1])
                              - np.concatenate([(j + 2 * mu - 2) * P0, [0.0, 0.0]])) / j
            c = P1
        c = c * math.factorial(l) * math.gamma(mu) / (math.gamma(2 * mu) * sc.poch(2 * mu, l))
    c = np.asarray(c) * 2.0 ** (n - 2) * math.pi ** ((n - 2) / 2)
    return [float(v) for v in c[::-1]]


def _horner(coeffs):
    def f(x):
        acc = 0.0
        for c in coeffs:
            acc = acc * x + c
        return acc
    return f


def funk_hecke(h: Callable, l: int, n: int, n_nodes: int = 128):
    """Funk-Hecke eigenvalue ``c_{l,n}(h)`` of ``phi -> int_{S^(n-1)} h(<w, w'>) phi(w') dw'``.

    ``h`` must be smooth enough for Gauss-Jacobi quadrature with
    ``n_nodes`` points; complex-valued ``h`` gives a complex result.
    """
    if n < 2:
        raise DomainError("ambient dimension must be at least 2")
    q = SphereQuad(n, n_nodes)
    vals = np.asarray(h(q.nodes)) * _zonal_factor(l, n, q.nodes)
    out = np.dot(vals, q.weights)
    if not np.all(np.isfinite(out)):
        raise QuadratureFailure("Funk-Hecke quadrature produced non-finite values")
    return complex(out) if np.iscomplexobj(out) else float(out)


# ---------------------------------------------------------------------------
# two-sphere spectra


def _quad(f, a, b, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, a, b, limit=200, epsabs=1e-14, epsrel=1e-12, **kw)
    if not math.isfinite(val):
        raise QuadratureFailure("adaptive quadrature failed")
    return val


def _edge_integral_plus(g, lam, a, b):
    """``int int_{x+y>0} (x+y)^lam g(x, y) (1-x^2)^a (1-y^2)^b dy dx``."""
    def inner(x):
        if x <= -1.0:
            return 0.0
        def f(y):
            # (1+y)^b is integrable at y = -1; the endpoint itself has measure zero
            return g(x, y) * (1 + y) ** b if y > -1.0 else 0.0
        return _quad(f, -x, 1.0, weight="alg", wvar=(lam, b))

    return _quad(inner, -1.0, 1.0, weight="alg", wvar=(a, a))


def alpha_lk(h: Callable, l: int, k: int, p: int, q: int, *, edge=None, n_nodes: int = 96) -> float:
    """Scalar by which ``B_h`` acts on ``H^l(R^(p-1)) (x) H^k(R^(q-1))``.

    Parameters
    ----------
    h : callable ``(x, y) -> value`` on ``[-1, 1]^2``
        Vectorized for the smooth path; scalar calls suffice with ``edge``.
    l, k : int
    p, q : int
        ``p >= q >= 2``. For ``q = 2`` the second sphere is two points and
        only ``k in {0, 1}`` carry nonzero spectrum.
    edge : (lam, sign) or None
        Treat the kernel as ``(x+y)_sign^lam * h(x, y)`` and integrate the
        power singularity along the anti-diagonal exactly.
    """
    if not (p >= q >= 2):
        raise DomainError("need p >= q >= 2")
    a = (p - 4) / 2
    if q == 2:
        if k >= 2:
            return 0.0
        sgn = (-1) ** k
        zx = _horner(_zonal_coeffs(l, p - 1))
        if edge is None:
            x, w = gauss_jacobi(n_nodes, a, a)
            U = np.asarray(h(x, np.ones_like(x))) + sgn * np.asarray(h(x, -np.ones_like(x)))
            return float(np.dot(U * zx(x), w))
        lam, s = edge
        # only one of y = +-1 meets the support of (x+y)_s on [-1, 1]
        if s == 1:
            f = lambda x: h(x, 1.0) * zx(x)  # noqa: E731
            return _quad(f, -1.0, 1.0, weight="alg", wvar=(a + lam, a))
        f = lambda x: sgn * h(x, -1.0) * zx(x)  # noqa: E731
        return _quad(f, -1.0, 1.0, weight="alg", wvar=(a, a + lam))
    b = (q - 4) / 2
    zx = _horner(_zonal_coeffs(l, p - 1))
    zy = _horner(_zonal_coeffs(k, q - 1))
    if edge is None:
        x, wx = gauss_jacobi(n_nodes, a, a)
        y, wy = gauss_jacobi(n_nodes, b, b)
        X, Y = np.meshgrid(x, y, indexing="ij")
        H = np.asarray(h(X, Y)) * np.outer(zx(x) * wx, zy(y) * wy)
        return float(H.sum())
    lam, s = edge
    if s == 1:
        g = lambda x, y: h(x, y) * zx(x) * zy(y)  # noqa: E731
    else:
        g = lambda x, y: h(-x, -y) * zx(-x) * zy(-y)  # noqa: E731
    return _edge_integral_plus(g, lam, a, b)


def _rg(z):
    return sc.rgamma(z)


def riesz_spectrum(lam: float, sign: int, l: int, k: int, p: int, q: int) -> float:
    """Closed-form spectrum of the Riesz kernel ``(x+y)_sign^lam / Gamma(lam+1)``.

    Exact zeros come out of the reciprocal gamma factors.
    """
    if lam <= -1:
        raise DomainError("need lam > -1")
    num = 2.0 ** (1 - lam) * math.pi ** ((p + q - 2) / 2) * sign ** (l + k) * sc.gamma(lam + (p + q - 4) / 2)
    den = (_rg((lam + p + q - 4 + l + k) / 2) * _rg((lam + p - 1 + l - k) / 2)
           * _rg((lam + q - 1 - l + k) / 2) * _rg((lam - l - k + 2) / 2))
    return float(num * den)


def _gamma_checked(z):
    if z <= 0 and z == math.floor(z):
        raise PoleError(f"gamma pole at {z:g}")
    return sc.gamma(z)


def hlambda_spectrum(lam: float, l: int, k: int, p: int, q: int, form: int = 1,
                     literal_sign: bool = False) -> float:
    """Closed form of ``alpha_{l,k}(h_lam)`` for the cone kernel ``h_lam``.

    ``form=1`` and ``form=2`` are the two gamma-quotient expressions related
    by the reflection identity. The overall sign is
    ``(-1)^(l + floor((q-1)/2))`` for ``form=1`` (``(-1)^(k + floor((p-1)/2))``
    for ``form=2``), which is what quadrature of ``h_lam`` and the
    trigonometric constant :func:`hlambda_sign_constant` give. With
    ``literal_sign=True`` the opposite sign is returned.
    """
    if not (p > 2 and q > 2 and (p + q) % 2 == 0):
        raise DomainError("need p, q > 2 with p + q even")
    if lam <= -1:
        raise DomainError("need lam > -1")
    scale = math.pi ** ((p + q - 4) / 2) * 2.0 ** (-lam)
    if form == 1:
        sgn = (-1) ** (l + (q - 1) // 2)
        top = _gamma_checked((l + k - lam) / 2) * _gamma_checked((-q + 3 + l - k - lam) / 2)
        bot = _rg((lam + p + q + l + k - 4) / 2) * _rg((lam + p - 1 + l - k) / 2)
    elif form == 2:
        sgn = (-1) ** (k + (p - 1) // 2)
        top = _gamma_checked((l + k - lam) / 2) * _gamma_checked((-p + 3 - l + k - lam) / 2)
        bot = _rg((p + q - 4 + l + k + lam) / 2) * _rg((q - 1 - l + k + lam) / 2)
    else:
        raise ValueError("form must be 1 or 2")
    if literal_sign:
        sgn = -sgn
    return float(sgn * scale * top * bot)


def gamma_lk(lam: float, l: int, k: int, p: int, q: int) -> float:
    """``2^(1-lam) pi^((p+q-4)/2) Gamma((l+k-lam)/2) Gamma((3-q+l-k-lam)/2) / [Gamma(...) Gamma(...)]``."""
    top = _gamma_checked((l + k - lam) / 2) * _gamma_checked((-q + 3 + l - k - lam) / 2)
    bot = _rg((lam + p + q + l + k - 4) / 2) * _rg((lam + p - 1 + l - k) / 2)
    return float(2.0 ** (1 - lam) * math.pi ** ((p + q - 4) / 2) * top * bot)


def hlambda_sign_constant(lam: float, l: int, k: int, p: int, q: int) -> float:
    """``C_{l,k}(lam)``: ratio of the ``h_lam`` spectrum to ``gamma_{l,k}(lam)`` from trigonometric factors.

    Evaluated directly from the sine/tangent product, so it is independent
    of any claimed closed form for the constant.
    """
    s = math.sin
    pi = math.pi
    c = s((lam - l - k + 2) / 2 * pi) * s((lam + q - 1 - l + k) / 2 * pi) / s(-lam * pi)
    if p % 2 == 0 and q % 2 == 0:
        return c
    return c * (1 / math.tan(lam * pi) + (-1) ** (l + k) / s(lam * pi))


def hlambda_kernel(lam: float, p: int, q: int):
    """Pieces ``[(coef, sign), ...]`` with ``h_lam = sum coef * (x+y)_sign^lam``."""
    if lam == math.floor(lam) and lam >= 0:
        raise PoleError("Gamma(-lam) has a pole")
    c = sc.gamma(-lam) / sc.gamma(lam + (p + q - 4) / 2)
    if p % 2 == 0 and q % 2 == 0:
        return [(c, 1)]
    if p % 2 == 1 and q % 2 == 1:
        return [(c / math.tan(lam * math.pi), 1), (c / math.sin(lam * math.pi), -1)]
    raise DomainError("p and q must have the same parity")


def alpha_lk_hlambda(lam: float, l: int, k: int, p: int, q: int) -> float:
    """Quadrature value of ``alpha_{l,k}(h_lam)`` assembled from the kernel pieces."""
    total = 0.0
    for coef, s in hlambda_kernel(lam, p, q):
        total += coef * alpha_lk(lambda x, y: 1.0, l, k, p, q, edge=(lam, s))
    return total


def fractional_integral_2d(lam: float, mu: float, nu: float, l: int, k: int, sign: int = 1) -> float:
    """Closed form of the Gegenbauer-weighted fractional integral over ``[-1, 1]^2``.

    Integrand ``(x+y)_sign^lam / Gamma(lam+1) C~_l^mu(x) C~_k^nu(y)
    (1-x^2)^(mu-1/2) (1-y^2)^(nu-1/2)``.
    """
    if mu <= -0.5 or nu <= -0.5 or lam <= -1:
        raise DomainError("need mu, nu > -1/2 and lam > -1")
    b = (sign ** (l + k) * math.pi ** 2 / 2.0 ** (2 * mu + 2 * nu)
         * sc.gamma(2 * mu + l) * sc.gamma(2 * nu + k) / (math.factorial(l) * math.factorial(k)))
    den = (_rg((lam + 2 * mu + 2 * nu + l + k + 2) / 2) * _rg((lam + 2 * mu + l - k + 2) / 2)
           * _rg((lam + 2 * nu - l + k + 2) / 2) * _rg((lam - l - k + 2) / 2))
    return float(b * 2.0 ** (1 - lam) * sc.gamma(lam + mu + nu + 1) * den)


def fractional_integral_2d_quad(lam: float, mu: float, nu: float, l: int, k: int, sign: int = 1) -> float:
    """The same integral by nested adaptive quadrature."""
    cl = lambda x: gegenbauer_tilde(l, mu, x)  # noqa: E731
    ck = lambda y: gegenbauer_tilde(k, nu, y)  # noqa: E731
    if sign == 1:
        g = lambda x, y: cl(x) * ck(y)  # noqa: E731
    else:
        g = lambda x, y: cl(-x) * ck(-y)  # noqa: E731
    return _edge_integral_plus(g, lam, mu - 0.5, nu - 0.5) / math.gamma(lam + 1)


# ---------------------------------------------------------------------------
# intertwiner between spheres


def intertwiner_apply(i: int, j: int, m: int, phi: Callable, x0: float, x) -> float:
    """``|x|^i phi(x/|x|) C~_(j-i)^((m-2)/2 + i)(x0)`` at a point of ``S^(m-1)``.

    ``phi`` is a degree-``i`` harmonic on ``S^(m-2)``; the point is
    ``(x0, x)`` with ``x`` in ``R^(m-1)``.
    """
    if not 0 <= i <= j:
        raise DomainError("need 0 <= i <= j")
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if abs(x0 * x0 + r * r - 1) > 1e-12:
        raise DomainError("point is not on the unit sphere")
    if r == 0:
        if i > 0:
            return 0.0
        ang = np.eye(x.size)[0]
    else:
        ang = x / r
    return r ** i * float(phi(ang)) * gegenbauer_tilde(j - i, (m - 2) / 2 + i, x0)


def intertwiner_norm_sq(i: int, j: int, m: int) -> float:
    """``||I phi||^2 / ||phi||^2`` from the Gegenbauer norm."""
    return 2.0 ** (3 - m - 2 * i) * math.pi * math.gamma(m - 2 + i + j) / (
        math.factorial(j - i) * (j + (m - 2) / 2))


def s3_quadrature(n: int = 48):
    """Points and weights on ``S^3`` in Hopf coordinates.

    ``(cos a cos b1, cos a sin b1, sin a cos b2, sin a sin b2)`` with
    ``dS = sin a cos a da db1 db2``; Gauss-Legendre in ``a``, trapezoid in
    the angles.
    """
    t, wt = np.polynomial.legendre.leggauss(n)
    a = (t + 1) * math.pi / 4
    wa = wt * math.pi / 4 * np.sin(a) * np.cos(a)
    b = np.arange(2 * n) * math.pi / n
    wb = math.pi / n * np.ones(2 * n)
    A, B1, B2 = np.meshgrid(a, b, b, indexing="ij")
    W = wa[:, None, None] * wb[None, :, None] * wb[None, None, :]
    pts = np.stack([np.cos(A) * np.cos(B1), np.cos(A) * np.sin(B1),
                    np.sin(A) * np.cos(B2), np.sin(A) * np.sin(B2)], axis=-1)
    return pts.reshape(-1, 4), W.ravel()


# ---------------------------------------------------------------------------
# Gegenbauer integral transforms


def gegenbauer_fourier(mu: float, l: int, a: float, phase: bool = True) -> complex:
    """``int (1-x^2)^(mu-1/2) e^(i a x) C~_l^mu(x) dx`` in closed form.

    ``pi 2^(1-mu) Gamma(2mu+l)/l! * i^l a^(-mu) J_(mu+l)(a)``; with
    ``phase=False`` the factor ``i^l`` is dropped.
    """
    val = math.pi * 2 ** (1 - mu) * math.gamma(2 * mu + l) / math.factorial(l) * a ** (-mu) * sc.jv(mu + l, a)
    return complex(val * (1j ** l if phase else 1))


def gegenbauer_bessel_integral(nu: float, l: int, alpha: float) -> float:
    """``int J_nu(alpha sqrt(x+1)) C~_l^(nu+1/2)(x) (1+x)^(nu/2) (1-x)^nu dx`` by quadrature."""
    def f(x):
        return sc.jv(nu, alpha * math.sqrt(x + 1)) * gegenbauer_tilde(l, nu + 0.5, x) * (1 + x) ** (nu / 2)
    return _quad(f, -1.0, 1.0, weight="alg", wvar=(0.0, nu))


def gegenbauer_bessel_closed(nu: float, l: int, alpha: float) -> float:
    """Closed form ``2^(3/2) (-1)^l sqrt(pi) Gamma(2nu+l+1) / (alpha^(nu+1) l!) J_(2nu+2l+1)(sqrt(2) alpha)``."""
    return (2 ** 1.5 * (-1) ** l * math.sqrt(math.pi) * math.gamma(2 * nu + l + 1)
            / (alpha ** (nu + 1) * math.factorial(l)) * sc.jv(2 * nu + 2 * l + 1, math.sqrt(2) * alpha))


def hankel_trig_integral(mu: float, nu: float, theta: float, phi: float) -> float:
    """``int_0^oo t^(mu+1) J_mu(t sin th / c) J_nu(t sin ph / c) K_nu(t) dt``, ``c = cos th + cos ph``."""
    c = math.cos(theta) + math.cos(phi)
    if c <= 0:
        raise DomainError("need cos theta + cos phi > 0")
    A, B = math.sin(theta) / c, math.sin(phi) / c

    def f(t):
        return t ** (mu + 1) * sc.jv(mu, A * t) * sc.jv(nu, B * t) * sc.kv(nu, t)

    return _quad(f, 0.0, 60.0) + _quad(f, 60.0, 800.0)


def hankel_trig_closed(mu: float, nu: float, theta: float, phi: float) -> float:
    """Gegenbauer closed form of :func:`hankel_trig_integral` (``mu - nu`` a nonnegative integer)."""
    d = mu - nu
    if d < 0 or d != math.floor(d):
        raise DomainError("mu - nu must be a nonnegative integer")
    c = math.cos(theta) + math.cos(phi)
    return (2 ** (nu - 1) / math.sqrt(math.pi) * math.gamma(d + 1) * c * math.sin(theta) ** mu
            * math.sin(phi) ** nu * gegenbauer_tilde(int(d), nu + 0.5, math.cos(phi)))
