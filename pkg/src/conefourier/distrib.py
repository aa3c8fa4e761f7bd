"""Distributions on the line with meromorphic parameter.

Riesz powers ``x_+^lam``, ``x_-^lam`` (continued past ``Re lam = -1``), the
homogeneous powers ``t^(-k)``, and the four Bessel distributions of order
``m``, each stored as a locally integrable function plus an explicit
singular part with rational coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate
from scipy import special as sc

from .errors import InsufficientSmoothness, PoleError, QuadratureFailure
from .gfun import Contour, mb_integral

__all__ = [
    "TestFn",
    "gaussian_test_fn",
    "random_test_fn",
    "riesz_pair",
    "riesz_residue",
    "pv_power_pair",
    "DistKind",
    "SingularPart",
    "BesselDistribution",
    "bessel_dist",
    "bessel_dist_pair",
    "mb_pairing",
    "dist_ode_residual",
    "phi_m",
]

# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFn:
    """Compactly supported test function with ``k_max`` continuous derivatives.

    Attributes
    ----------
    value : callable
        Vectorized ``phi(t)``; must vanish for ``|t| > support_radius``.
    derivs : tuple of callables
        Analytic derivatives ``phi', phi'', ...`` (may be shorter than
        ``k_max``; missing orders use Richardson differences).
    support_radius : float
    k_max : int
    mellin : callable or None
        Optional closed form ``(lam, sign) -> <x_sign^lam, phi>``.
    """

    __test__ = False  # not a pytest class

    value: Callable
    derivs: tuple = ()
    support_radius: float = 1.0
    k_max: int = 0
    mellin: Callable | None = field(default=None, compare=False)

    def deriv(self, k: int) -> Callable:
        """The ``k``-th derivative as a callable."""
        if k == 0:
            return self.value
        if k > self.k_max:
            raise InsufficientSmoothness(f"test function has only {self.k_max} derivatives")
        if k <= len(self.derivs):
            return self.derivs[k - 1]
        lower = self.deriv(k - 1)
        h = 1e-3 * self.support_radius

        def richardson(t):
            t = np.asarray(t, dtype=float)
            d1 = (lower(t + h) - lower(t - h)) / (2 * h)
            d2 = (lower(t + h / 2) - lower(t - h / 2)) / h
            return (4 * d2 - d1) / 3

        return richardson

    def __call__(self, t):
        return self.value(t)


def gaussian_test_fn(coeffs, a: float = 1.0, k_max: int = 12) -> TestFn:
    """``phi(t) = P(t) exp(-a t^2)`` cut off where it underflows.

    The Riesz pairings of this family are known in closed form:
    ``<x_(+/-)^lam, t^j e^{-a t^2}> = (+/-1)^j Gamma((lam+j+1)/2) / (2 a^((lam+j+1)/2))``.
    """
    P = Polynomial(np.asarray(coeffs, dtype=float))
    R = math.sqrt(800.0 / a) + 1.0
    polys = [P]
    for _ in range(k_max):
        Q = polys[-1]
        polys.append(Q.deriv() - Q * Polynomial([0.0, 2 * a]))

    def make(Q):
        def fn(t):
            t = np.asarray(t, dtype=float)
            out = np.where(np.abs(t) <= R, Q(t) * np.exp(-a * t * t), 0.0)
            return float(out) if out.ndim == 0 else out
        return fn

    c = P.coef

    def mellin(lam, sign):
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros_like(lam)
        for j, cj in enumerate(c):
            if cj == 0:
                continue
            s = (lam + j + 1) / 2
            out = out + cj * (sign ** j) * np.exp(sc.loggamma(s) - s * math.log(a)) / 2
        return out

    return TestFn(make(P), tuple(make(Q) for Q in polys[1:]), R, k_max, mellin)


def random_test_fn(rng: np.random.Generator, degree: int = 3) -> TestFn:
    """Seeded member of :func:`gaussian_test_fn` with random coefficients and width."""
    coeffs = rng.normal(size=degree + 1)
    a = float(rng.uniform(0.5, 2.0))
    return gaussian_test_fn(coeffs, a)


# ---------------------------------------------------------------------------
# Riesz distributions


def _is_neg_int(lam) -> int | None:
    lam = complex(lam)
    if lam.imag == 0 and lam.real < 0 and lam.real == math.floor(lam.real):
        return int(-lam.real)
    return None


def _mellin_piece(g, lam: complex, lo: float, hi: float, order: int = 0) -> complex:
    """``int_lo^hi x^lam g(x) dx`` for ``0 <= lo < hi`` via ``x = e^u``.

    The substitution turns ``x^(i tau)`` into a uniform oscillation handled
    by the QAWO rule. ``order`` is the vanishing order of ``g`` at 0.
    """
    tau = lam.imag
    alpha = lam.real + 1.0 + order
    u_lo = math.log(lo) if lo > 0 else None
    u_hi = math.log(hi)
    if u_lo is None:
        # x in (0, hi]: e^{(lam+1) u} decays as u -> -oo since Re lam + 1 > 0
        u_lo = u_hi - min(40.0 / alpha, 800.0)

    def amp(u):
        return math.exp((lam.real + 1.0) * u) * float(g(math.exp(u)))

    opts = dict(limit=400, epsabs=1e-15, epsrel=1e-12)
    with warnings.catch_warnings():
        # roundoff warnings at the 1e-15 floor are expected here
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if tau == 0:
            re, _ = integrate.quad(amp, u_lo, u_hi, **opts)
            return complex(re)
        re, _ = integrate.quad(amp, u_lo, u_hi, weight="cos", wvar=tau, limit=400)
        im, _ = integrate.quad(amp, u_lo, u_hi, weight="sin", wvar=tau, limit=400)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise QuadratureFailure("Mellin integral failed")
    return complex(re, im)


def riesz_pair(lam, sign: int, phi: TestFn, method: str = "parts") -> complex:
    """Analytic continuation of ``<x_(sign)^lam, phi>``.

    Parameters
    ----------
    lam : complex
    sign : {+1, -1}
        ``+1`` pairs with ``x_+^lam``, ``-1`` with ``x_-^lam``.
    phi : TestFn
    method : {'parts', 'subtract'}
        ``'parts'`` integrates by parts ``N`` times,
        ``<x_+^lam, phi> = (-1)^N / (lam+1)_N <x_+^(lam+N), phi^(N)>``;
        ``'subtract'`` removes the Taylor polynomial of degree ``N-1`` at 0
        and adds back its poles explicitly.

    Raises
    ------
    PoleError
        At ``lam = -1, -2, ...``.
    InsufficientSmoothness
        If ``phi`` has fewer than the ``N`` derivatives the continuation needs.
    """
    lam = complex(lam)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if _is_neg_int(lam):
        raise PoleError(f"x_(+/-)^lam has a pole at lam = {lam.real:g}")
    R = phi.support_radius
    if method == "parts":
        N = max(0, math.ceil(-lam.real))
        if N > phi.k_max:
            raise InsufficientSmoothness(f"continuation to Re lam = {lam.real} needs {N} derivatives")
        dN = phi.deriv(N)
        g = lambda x: dN(sign * x) * sign ** N  # noqa: E731
        val = _mellin_piece(g, lam + N, 0.0, R)
        poch = 1.0 + 0j
        for j in range(1, N + 1):
            poch *= lam + j
        return (-1) ** N * val / poch
    if method != "subtract":
        raise ValueError(f"unknown method {method!r}")
    N = max(0, math.floor(-lam.real))
    J = min(phi.k_max, N + 12)
    if N > phi.k_max:
        raise InsufficientSmoothness(f"continuation to Re lam = {lam.real} needs {N} derivatives")
    d = [float(phi.deriv(j)(0.0)) * sign ** j for j in range(J + 1)]
    fact = [math.factorial(j) for j in range(J + 1)]
    total = sum(d[k - 1] / (fact[k - 1] * (lam + k)) for k in range(1, N + 1))
    x_c = 0.05
    # on (0, x_c) the remainder is its Taylor tail, integrated term by term
    total += sum(d[j] * x_c ** (lam + j + 1) / (fact[j] * (lam + j + 1)) for j in range(N, J + 1))

    def remainder(x):
        return float(phi(sign * x)) - sum(d[j] * x ** j / fact[j] for j in range(N))

    total += _mellin_piece(remainder, lam, x_c, 1.0)
    if R > 1:
        total += _mellin_piece(lambda x: phi(sign * x), lam, 1.0, R)
    return complex(total)


def riesz_residue(k: int, sign: int, phi: TestFn) -> float:
    """``res_{lam=-k} <x_(sign)^lam, phi>``.

    ``x_+``: ``phi^(k-1)(0)/(k-1)!``; ``x_-``: ``(-1)^(k-1) phi^(k-1)(0)/(k-1)!``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    v = float(phi.deriv(k - 1)(0.0)) / math.factorial(k - 1)
    return v if sign == 1 else (-1) ** (k - 1) * v


def pv_power_pair(k: int, phi: TestFn) -> float:
    """``<t^(-k), phi>`` for the homogeneous distribution ``t^(-k)``.

    Uses ``t^(-k) = ((-1)^(k-1)/(k-1)!) (d/dt)^(k-1) t^(-1)``, so only the
    principal value of ``phi^(k-1)(t)/t`` is needed.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if phi.k_max < k - 1:
        raise InsufficientSmoothness(f"t^-{k} needs {k - 1} derivatives")
    g = phi.deriv(k - 1)
    R = phi.support_radius

    def odd_part(t):
        if t == 0.0:
            return 0.0
        return (float(g(t)) - float(g(-t))) / t

    val, err = integrate.quad(odd_part, 0.0, R, limit=400, points=[min(1.0, R / 2)],
                              epsabs=1e-14, epsrel=1e-12)
    if not np.isfinite(val):
        raise QuadratureFailure("principal value integral failed")
    return val / math.factorial(k - 1)


# ---------------------------------------------------------------------------
# Bessel distributions


class DistKind(str, Enum):
    PHI_PLUS = "PhiPlus"
    PSI_PLUS = "PsiPlus"
    PSI = "Psi"
    PHI = "Phi"


@dataclass(frozen=True)
class SingularPart:
    """Finite singular sum.

    ``delta_coeffs`` holds ``(j, c)`` for ``c delta^(j)``; ``pv_coeffs`` holds
    ``(k, c)`` for ``(c / pi) t^(-k)``. All coefficients are exact rationals.
    """

    delta_coeffs: tuple = ()
    pv_coeffs: tuple = ()

    def __post_init__(self):
        for coeffs in (self.delta_coeffs, self.pv_coeffs):
            orders = [o for o, _ in coeffs]
            if len(set(orders)) != len(orders):
                raise ValueError("orders must be distinct")

    @property
    def is_empty(self) -> bool:
        return not self.delta_coeffs and not self.pv_coeffs


def _tilde(kind: str, m: int, z):
    # (z/2)^(-m) Z_m(z)
    fn = {"J": sc.jv, "Y": sc.yv, "I": sc.iv, "K": sc.kv}[kind]
    return fn(m, z) * (z / 2) ** (-m)


def _phi_plus(m: int):
    def fn(t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        z = 2 * np.sqrt(2 * np.where(pos, t, 1.0))
        out = np.where(pos, _tilde("J", m, z), 0.0)
        out = np.where(t == 0, 1.0 / math.factorial(m), out)
        return float(out) if out.ndim == 0 else out
    return fn


def _pv_sum(m: int, t):
    # (1/pi) sum_k (k-1)!/(2^k (m-k)!) t^-k
    s = 0.0
    for k in range(1, m + 1):
        s = s + math.factorial(k - 1) / (2 ** k * math.factorial(m - k)) * t ** (-k)
    return s / math.pi


def _phi_m_series(m: int, t: float) -> float:
    # -(1/pi) sum_l (-2t)^l (psi(m+l+1)+psi(l+1))/(l!(m+l)!) + log terms
    s = 0.0
    term = 1.0 / math.factorial(m)
    for l in range(200):
        c = term * (sc.digamma(m + l + 1) + sc.digamma(l + 1))
        s += c
        if l > 4 and abs(c) < 1e-18 * max(abs(s), 1e-300):
            break
        term *= -2 * t / ((l + 1) * (m + l + 1))
    out = -s / math.pi
    if t > 0:
        out += float(_tilde("J", m, 2 * math.sqrt(2 * t))) * math.log(2 * t) / math.pi
    elif t < 0:
        out += float(_tilde("I", m, 2 * math.sqrt(-2 * t))) * math.log(-2 * t) / math.pi
    return out


def _phi_m_closed(m: int, t: float) -> float:
    if t > 0:
        val = float(_tilde("Y", m, 2 * math.sqrt(2 * t)))
    else:
        val = 2 * (-1) ** (m + 1) / math.pi * float(_tilde("K", m, 2 * math.sqrt(-2 * t)))
    return val + _pv_sum(m, t)


def phi_m(m: int, t, crossover: float = 1.0):
    """The locally integrable distribution ``Phi_m``.

    Power series with logarithms for ``|t| < crossover``; Bessel ``Y``/``K``
    form plus the removed ``t^(-k)`` sum beyond it.
    """
    ta = np.asarray(t, dtype=float)
    out = np.empty(ta.shape)
    for i, tv in np.ndenumerate(ta):
        if tv == 0:
            out[i] = -np.inf
        elif abs(tv) < crossover:
            out[i] = _phi_m_series(m, float(tv))
        else:
            out[i] = _phi_m_closed(m, float(tv))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BesselDistribution:
    """Bessel distribution ``regular + singular``."""

    m: int
    kind: DistKind
    regular: Callable
    singular: SingularPart

    def pointwise(self, t):
        """The real-analytic function the distribution restricts to on ``t != 0``."""
        t = np.asarray(t, dtype=float)
        if np.any(t == 0):
            raise ValueError("pointwise values are defined for t != 0 only")
        out = np.asarray(self.regular(t), dtype=float)
        for k, c in self.singular.pv_coeffs:
            out = out + float(c) / math.pi * t ** (-k)
        return float(out) if out.ndim == 0 else out


def bessel_dist(m: int, kind) -> BesselDistribution:
    """Bessel distribution of order ``m``.

    ``PhiPlus``: ``(2t)_+^(-m/2) J_m(2 sqrt(2 t_+))``.
    ``PsiPlus``: the same minus ``sum_k (-1)^(k-1)/(2^k (m-k)!) delta^(k-1)``.
    ``Psi``: ``Phi_m - (1/pi) sum_k (k-1)!/(2^k (m-k)!) t^(-k)``.
    ``Phi``: ``Phi_m`` (locally integrable).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    kind = DistKind(kind)
    if kind in (DistKind.PHI_PLUS, DistKind.PSI_PLUS):
        reg = _phi_plus(m)
    else:
        reg = lambda t, m=m: phi_m(m, t)  # noqa: E731
    if kind is DistKind.PSI_PLUS:
        sing = SingularPart(delta_coeffs=tuple(
            (k - 1, -Fraction((-1) ** (k - 1), 2 ** k * math.factorial(m - k)))
            for k in range(1, m + 1)))
    elif kind is DistKind.PSI:
        sing = SingularPart(pv_coeffs=tuple(
            (k, -Fraction(math.factorial(k - 1), 2 ** k * math.factorial(m - k)))
            for k in range(1, m + 1)))
    else:
        sing = SingularPart()
    return BesselDistribution(m, kind, reg, sing)


def _quad_regular(fn, lo: float, hi: float) -> float:
    # graded breakpoints toward 0 absorb the log singularity
    a, b = sorted((lo, hi))
    if a >= 0:
        pts = [x for x in (2.0 ** -j for j in range(30, -1, -1)) if a < x < b]
    else:
        pts = [-x for x in (2.0 ** -j for j in range(0, 31)) if a < -x < b]
    edges = [a] + pts + [b]
    total = 0.0
    for u, v in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(fn, u, v, limit=200, epsabs=1e-15, epsrel=1e-12)
        if not np.isfinite(val):
            raise QuadratureFailure("regular part quadrature failed")
        total += val
    return total


def bessel_dist_pair(d: BesselDistribution, phi: TestFn) -> float:
    """``<d, phi>``: regular quadrature plus the singular terms.

    ``<delta^(j), phi> = (-1)^j phi^(j)(0)``; the ``t^(-k)`` terms use
    :func:`pv_power_pair`.
    """
    need = max([j for j, _ in d.singular.delta_coeffs]
               + [k - 1 for k, _ in d.singular.pv_coeffs] + [0])
    if phi.k_max < need:
        raise InsufficientSmoothness(f"pairing needs {need} derivatives")
    R = phi.support_radius
    f = lambda t: float(d.regular(t)) * float(phi(t))  # noqa: E731
    total = _quad_regular(f, 0.0, R)
    if d.kind in (DistKind.PSI, DistKind.PHI):
        total += _quad_regular(f, -R, 0.0)
    for j, c in d.singular.delta_coeffs:
        total += float(c) * (-1) ** j * float(phi.deriv(j)(0.0))
    for k, c in d.singular.pv_coeffs:
        total += float(c) / math.pi * pv_power_pair(k, phi)
    return total


def mb_pairing(m: int, kind, phi: TestFn, t_max: float = 60.0) -> float:
    """``<d, phi>`` from the Mellin-Barnes representation of the distribution.

    The contour crosses the real axis in ``(-m-1, -m)`` for ``PsiPlus``/``Psi``
    and in ``(-1, 0)`` for ``PhiPlus``/``Phi``; its vertical asymptote is
    ``Re lam = -1/2``.  Riesz pairings come from ``phi.mellin`` when available
    and from :func:`riesz_pair` otherwise.
    """
    kind = DistKind(kind)
    if phi.mellin is not None:
        rp = lambda lam, s: phi.mellin(lam, s)  # noqa: E731
    else:
        rp = lambda lam, s: np.array([riesz_pair(z, s, phi) for z in np.atleast_1d(lam)])  # noqa: E731
    if kind in (DistKind.PSI_PLUS, DistKind.PSI):
        L = Contour(gamma=-0.5, s0=-m - 0.5, jog_height=1.0)
    else:
        L = Contour(gamma=-0.5, s0=-0.5, jog_height=1.0)

    def integrand(lam):
        lam = np.asarray(lam, dtype=complex)
        base = np.exp(sc.loggamma(-lam) + lam * math.log(2)) * sc.rgamma(lam + 1 + m)
        if kind in (DistKind.PHI_PLUS, DistKind.PSI_PLUS):
            return base * rp(lam, 1)
        return base * (rp(lam, 1) / np.tan(np.pi * lam) + rp(lam, -1) / np.sin(np.pi * lam))

    return mb_integral(integrand, L, t_max)


# ---------------------------------------------------------------------------
# differential equations


def _fd_derivs(fn, t: float, h: float):
    offs = np.arange(-3, 4) * h
    v = np.array([float(fn(t + o)) for o in offs])
    d1 = np.dot([-1, 9, -45, 0, 45, -9, 1], v) / (60 * h)
    d2 = np.dot([2, -27, 270, -490, 270, -27, 2], v) / (180 * h * h)
    d3 = np.dot([1, -8, 13, 0, -13, 8, -1], v) / (8 * h ** 3)
    return v[3], d1, d2, d3


def dist_ode_residual(d: BesselDistribution, t: float, theta_coeff: float | None = None) -> float:
    """ODE residual of ``d`` at ``t != 0`` by finite differences.

    For ``PhiPlus``, ``PsiPlus`` and ``Psi``: ``t u'' + (m+1) u' + 2u``, the
    form ``(theta^2 + m theta + 2t) u / t`` with ``theta = t d/dt``.  For
    ``Phi``: ``theta (theta^2 + c theta + 2t) u`` with ``c = theta_coeff``
    (default ``m``).
    """
    if abs(t) <= 0.01:
        raise ValueError("residual is evaluated for |t| > 0.01")
    m = d.m
    h = min(0.01, abs(t) / 8)
    u, u1, u2, u3 = _fd_derivs(d.pointwise, t, h)
    if d.kind is DistKind.PHI:
        c = m if theta_coeff is None else theta_coeff
        # theta v, v = t^2 u'' + (c+1) t u' + 2 t u
        return (t ** 3 * u3 + (c + 3) * t * t * u2 + (c + 1) * t * u1
                + 2 * t * t * u1 + 2 * t * u)
    c = m if theta_coeff is None else theta_coeff
    return t * u2 + (c + 1) * u1 + 2 * u
