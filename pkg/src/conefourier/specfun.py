"""Scalar special functions: gamma, Bessel family, Gegenbauer, Legendre,
generalized hypergeometric and Appell series.

The Bessel and gamma kernels delegate to :mod:`scipy.special`; the series
evaluators are written out so that their tail control is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DomainError, NonConvergent, PoleAtNonpositiveInteger

__all__ = [
    "SeriesControl",
    "log_gamma",
    "rgamma",
    "pochhammer",
    "bessel",
    "bessel_tilde",
    "bessel_k_half_odd",
    "gegenbauer_tilde",
    "gegenbauer_normalized",
    "assoc_legendre",
    "hyp_pfq",
    "appell_f4",
    "gauss_jacobi",
]


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rule for power series.

    A series stops once the last few terms fall below
    ``abs_tol + rel_tol * |partial sum|`` while the term ratio is below one.
    """

    abs_tol: float = 1e-16
    rel_tol: float = 1e-16
    max_terms: int = 4000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("series tolerances must be positive")
        if self.max_terms < 16:
            raise ValueError("max_terms must be at least 16")


DEFAULT_SERIES = SeriesControl()


def _is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def log_gamma(z):
    """Principal branch of ``log Gamma(z)``.

    Parameters
    ----------
    z : complex or array_like
        Argument. Nonpositive integers are poles.

    Returns
    -------
    complex or ndarray
    """
    arr = np.asarray(z, dtype=complex)
    bad = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.floor(arr.real))
    if np.any(bad):
        raise PoleAtNonpositiveInteger(f"log_gamma pole at {arr[bad].ravel()[0].real:g}")
    out = sc.loggamma(arr)
    return complex(out) if np.ndim(z) == 0 else out


def rgamma(z):
    """Reciprocal gamma ``1/Gamma(z)``, entire, exact zeros at the poles of Gamma."""
    return sc.rgamma(z)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``(a)_k`` by direct product (exact for small integer data)."""
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


_BESSEL = {"J": sc.jv, "Y": sc.yv, "I": sc.iv, "K": sc.kv}


def bessel(kind: str, nu, x):
    """Bessel functions of real order on the positive half line.

    Parameters
    ----------
    kind : {'J', 'Y', 'I', 'K'}
    nu : float or array_like
        Order.
    x : float or array_like
        Strictly positive argument.

    Returns
    -------
    float or ndarray

    Raises
    ------
    DomainError
        If any ``x <= 0``.
    OverflowError
        If ``I_nu(x)`` exceeds the double range.
    """
    try:
        fn = _BESSEL[kind]
    except KeyError:
        raise DomainError(f"unknown Bessel kind {kind!r}") from None
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("Bessel functions are evaluated for x > 0 only")
    out = fn(nu, xa)
    if kind == "I" and np.any(np.isinf(out)):
        raise OverflowError("I_nu(x) overflows double precision")
    return float(out) if np.ndim(out) == 0 else out


def bessel_tilde(kind: str, nu, x):
    """Renormalized Bessel function ``(x/2)^(-nu) Z_nu(x)``.

    For ``J`` and ``I`` the value at ``x = 0`` is the limit ``1/Gamma(nu+1)``.
    """
    xa = np.asarray(x, dtype=float)
    if kind in ("J", "I"):
        if np.any(xa < 0):
            raise DomainError("x must be nonnegative")
        safe = np.where(xa > 0, xa, 1.0)
        z = _BESSEL[kind](nu, safe) * (safe / 2.0) ** (-np.asarray(nu, dtype=float))
        out = np.where(xa > 0, z, sc.rgamma(np.asarray(nu, dtype=float) + 1.0))
        return float(out) if np.ndim(out) == 0 else out
    val = bessel(kind, nu, xa)
    out = val * (xa / 2.0) ** (-np.asarray(nu, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def bessel_k_half_odd(n: int, x: float) -> float:
    """``K_{n+1/2}(x)`` from its terminating elementary expansion."""
    if x <= 0:
        raise DomainError("x must be positive")
    s = 0.0
    for k in range(n + 1):
        s += math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k) * (2.0 * x) ** k)
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * s


def _check_unit_interval(x):
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + 1e-14):
        raise DomainError("argument must lie in [-1, 1]")
    return np.clip(xa, -1.0, 1.0)


def gegenbauer_tilde(l: int, mu: float, x):
    """Gegenbauer polynomial normalized as ``Gamma(mu) C_l^mu(x)``.

    At ``mu = 0`` the limit ``2 cos(l theta) / l`` (``x = cos theta``) is
    returned for ``l >= 1``; ``l = 0`` has no finite limit there.
    """
    xa = _check_unit_interval(x)
    if l < 0:
        raise DomainError("degree must be nonnegative")
    if mu == 0:
        if l == 0:
            raise PoleAtNonpositiveInteger("Gamma(0) C_0^0 is infinite")
        out = 2.0 * np.cos(l * np.arccos(xa)) / l
    else:
        if mu <= -0.5:
            raise DomainError("mu must exceed -1/2")
        out = sc.gamma(mu) * sc.eval_gegenbauer(l, mu, xa)
    return float(out) if np.ndim(out) == 0 else out


def gegenbauer_normalized(l: int, mu: float, x):
    """``l! C~_l^mu(x) / Gamma(2 mu + l)``, continuous through ``mu = 0``.

    This is the combination appearing in zonal spectra; at ``mu = 0`` it
    equals ``2 cos(l theta)``.
    """
    xa = _check_unit_interval(x)
    if mu == 0:
        out = 2.0 * np.cos(l * np.arccos(xa))
    else:
        # Gamma(mu)/Gamma(2mu) * 2F1(l+2mu, -l; mu+1/2; (1-x)/2)
        out = sc.gamma(mu) / sc.gamma(2 * mu) * sc.hyp2f1(l + 2 * mu, -l, mu + 0.5, (1 - xa) / 2)
    return float(out) if np.ndim(out) == 0 else out


def _hyp2f1_regularized(a, b, c, z):
    """``2F1(a, b; c; z) / Gamma(c)`` including nonpositive integer ``c``."""
    if _is_nonpositive_integer(c):
        n = int(round(-c))
        coef = pochhammer(a, n + 1) * pochhammer(b, n + 1) / math.factorial(n + 1)
        return coef * z ** (n + 1) * sc.hyp2f1(a + n + 1, b + n + 1, n + 2, z)
    return sc.hyp2f1(a, b, c, z) * sc.rgamma(c)


def assoc_legendre(nu: float, mu: float, x):
    """Associated Legendre function of the first kind on ``(-1, 1)``.

    ``P_nu^mu(x) = ((1+x)/(1-x))^(mu/2) 2F1(-nu, nu+1; 1-mu; (1-x)/2) / Gamma(1-mu)``,
    with the regularized hypergeometric function so that nonpositive
    integer ``1 - mu`` yields the finite limit.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1):
        raise DomainError("assoc_legendre needs -1 < x < 1")
    z = (1 - xa) / 2
    fac = ((1 + xa) / (1 - xa)) ** (mu / 2)
    vals = np.vectorize(lambda zz: _hyp2f1_regularized(-nu, nu + 1, 1 - mu, zz))(z)
    out = fac * vals
    return float(out) if np.ndim(out) == 0 else out


def hyp_pfq(a, b, x: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Generalized hypergeometric series ``pFq(a; b; x)`` by direct summation.

    Terminating series (a nonpositive integer upper parameter) are summed
    exactly. Otherwise terms are added until three successive terms fall
    below the tolerance with a contracting ratio.

    Raises
    ------
    DomainError
        If a lower parameter is a nonpositive integer.
    NonConvergent
        If ``max_terms`` is exhausted.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    for bj in b:
        if _is_nonpositive_integer(bj):
            raise DomainError("lower parameter is a nonpositive integer")
    if x == 0:
        return 1.0
    if len(a) > len(b) + 1:
        raise NonConvergent("pFq with p > q+1 diverges for x != 0")
    if len(a) == len(b) + 1 and abs(x) >= 1:
        if not any(_is_nonpositive_integer(v) for v in a):
            raise NonConvergent("pFq with p = q+1 needs |x| < 1")
    term = 1.0
    total = 1.0
    small = 0
    for k in range(ctl.max_terms):
        num = 1.0
        for aj in a:
            num *= aj + k
        if num == 0.0:
            return total
        den = float(k + 1)
        for bj in b:
            den *= bj + k
        ratio = num / den * x
        term *= ratio
        total += term
        if abs(term) <= ctl.abs_tol + ctl.rel_tol * abs(total) and abs(ratio) < 1:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergent(f"pFq not converged after {ctl.max_terms} terms")


def appell_f4(alpha, beta, gamma, gamma2, x, y, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Appell's double series ``F4(alpha, beta; gamma, gamma'; x, y)``.

    Summed by total degree ``m + n`` inside the convergence region
    ``sqrt|x| + sqrt|y| < 1``.
    """
    if math.sqrt(abs(x)) + math.sqrt(abs(y)) >= 1:
        raise NonConvergent("F4 series diverges outside sqrt|x| + sqrt|y| < 1")
    total = 0.0
    # row[m] holds the term with indices (m, N - m) at the current degree N
    row = np.array([1.0])
    small = 0
    for N in range(ctl.max_terms):
        s = row.sum()
        total += s
        if abs(s) <= ctl.abs_tol + ctl.rel_tol * abs(total) and N > 2:
            small += 1
            if small >= 3:
                return float(total)
        else:
            small = 0
        m = np.arange(N + 1)
        n = N - m
        common = (alpha + N) * (beta + N)
        # step (m, n) -> (m, n+1) for all m, plus (N, 0) -> (N+1, 0)
        new = np.empty(N + 2)
        new[: N + 1] = row * common * y / ((gamma2 + n) * (n + 1))
        new[N + 1] = row[N] * common * x / ((gamma + N) * (N + 1))
        row = new
    raise NonConvergent(f"F4 not converged after {ctl.max_terms} degrees")


def gauss_jacobi(n: int, alpha: float, beta: float):
    """Gauss-Jacobi nodes and weights for ``(1-x)^alpha (1+x)^beta`` on [-1, 1].

    Thin wrapper over :func:`scipy.special.roots_jacobi` (Golub-Welsch with
    Newton polishing).
    """
    if alpha == 0 and beta == 0:
        return sc.roots_legendre(n)
    return sc.roots_jacobi(n, alpha, beta)
