"""Meijer G-functions on the positive half line.

The primary evaluator integrates the Mellin-Barnes representation

    G(x) = (1 / 2 pi i) * integral over L of Gq(lam) x**lam dlam

along a piecewise linear path ``L`` that crosses the real axis at ``s0`` and
runs out to ``Re lam = gamma`` at height ``jog_height``.  For real
parameters the integrand is conjugate symmetric, so only the upper half of
the path is integrated and ``G = Im(I_upper) / pi``.

A residue series and a leading order large-``x`` formula are provided as
independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special as sc

from .errors import (
    ContourInvalid,
    IntegerDifference,
    NonConvergent,
    OutOfRegime,
    PoleError,
)
from .specfun import DEFAULT_SERIES, SeriesControl, hyp_pfq

__all__ = [
    "GSpec",
    "Contour",
    "QuadControl",
    "gamma_quotient",
    "log_gamma_quotient",
    "default_contour",
    "g_contour",
    "g_contour_many",
    "g_series",
    "g_asymptotic",
    "meijer_g",
    "mb_integral",
    "g_ode_residual",
]


@dataclass(frozen=True)
class GSpec:
    """Parameter block of ``G^{m,n}_{p,q}(x | a; b)``."""

    m: int
    n: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ValueError("need 0 <= m <= q and 0 <= n <= p")
        if self.cstar < 0:
            raise ValueError("c* < 0 is not supported")
        for aj in self.a[: self.n]:
            for bk in self.b[: self.m]:
                d = aj - bk
                if d >= 1 and d == math.floor(d):
                    raise ContourInvalid("a_j - b_k is a positive integer; no separating contour")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def cstar(self) -> float:
        return self.m + self.n - (self.p + self.q) / 2

    @property
    def mu(self) -> float:
        return sum(self.b) - sum(self.a) + (self.p - self.q) / 2 + 1

    @property
    def theta(self) -> float:
        """Exponent of ``x`` in the large-``x`` envelope (``q > p``)."""
        return ((self.p - self.q + 1) / 2 + sum(self.b) - sum(self.a)) / (self.q - self.p)

    def shifted(self, s: float) -> "GSpec":
        """Parameters of ``x**s G(x)``."""
        return GSpec(self.m, self.n, tuple(v + s for v in self.a), tuple(v + s for v in self.b))


@dataclass(frozen=True)
class Contour:
    """Jog contour ``gamma - i oo -> gamma - iY -> s0 - iY -> s0 + iY -> gamma + iY -> gamma + i oo``."""

    gamma: float
    s0: float
    jog_height: float

    def check(self, spec: GSpec) -> None:
        """Raise :class:`ContourInvalid` if the path does not separate the poles."""
        if self.jog_height <= 0:
            raise ContourInvalid("jog height must be positive")
        bmin = min(spec.b[: spec.m], default=math.inf)
        amax = max((aj - 1 for aj in spec.a[: spec.n]), default=-math.inf)
        if not (amax < self.s0 < bmin):
            raise ContourInvalid(f"s0={self.s0} not in ({amax}, {bmin})")
        if spec.cstar == 0 and spec.q > spec.p:
            if (spec.q - spec.p) * self.gamma <= spec.mu:
                raise ContourInvalid("(q-p) gamma must exceed mu for c* = 0")


@dataclass(frozen=True)
class QuadControl:
    """Quadrature settings for :func:`g_contour`."""

    panel_order: int = 16
    truncation_tol: float = 1e-13
    max_height: float = 1e7
    max_refine: int = 4

    def __post_init__(self):
        if not 8 <= self.panel_order <= 64:
            raise ValueError("panel_order must lie in [8, 64]")
        if self.truncation_tol <= 0:
            raise ValueError("truncation_tol must be positive")


DEFAULT_QUAD = QuadControl()


def log_gamma_quotient(lam, spec: GSpec):
    """``log`` of the gamma quotient; ``-inf`` real part where a denominator has a pole.

    Parameters
    ----------
    lam : array_like of complex
    spec : GSpec

    Returns
    -------
    ndarray of complex
    """
    lam = np.asarray(lam, dtype=complex)
    out = np.zeros_like(lam)
    zero = np.zeros(lam.shape, dtype=bool)

    def add(z, sign):
        nonlocal out, zero
        pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.floor(z.real))
        if sign > 0 and np.any(pole):
            raise PoleError("numerator gamma evaluated at a pole")
        zero |= pole
        zs = np.where(pole, 1.0, z)
        out = out + sign * sc.loggamma(zs)

    for bj in spec.b[: spec.m]:
        add(bj - lam, +1)
    for aj in spec.a[: spec.n]:
        add(1 - aj + lam, +1)
    for bj in spec.b[spec.m:]:
        add(1 - bj + lam, -1)
    for aj in spec.a[spec.n:]:
        add(aj - lam, -1)
    out = np.where(zero, -np.inf + 0j, out)
    return out


def gamma_quotient(lam, spec: GSpec):
    """Gamma quotient ``Gamma^{m,n}_{p,q}(lam)``.

    ``prod_{j<=m} Gamma(b_j - lam) prod_{j<=n} Gamma(1 - a_j + lam)``
    divided by
    ``prod_{j>m} Gamma(1 - b_j + lam) prod_{j>n} Gamma(a_j - lam)``.
    Poles of the denominator give exact zeros.
    """
    val = np.exp(log_gamma_quotient(lam, spec))
    return complex(val) if np.ndim(lam) == 0 else val


# ---------------------------------------------------------------------------
# contour construction


def _saddle_height(x: float, spec: GSpec) -> float:
    d = spec.q - spec.p
    if d <= 0:
        return 0.0
    return x ** (1.0 / d)


def default_contour(x: float, spec: GSpec) -> Contour:
    """Contour tuned for argument ``x``.

    The crossing ``s0`` sits just left of the smallest ``b_j`` for small
    ``x`` and moves towards the large-``x`` envelope exponent as ``x`` grows,
    which keeps the integrand comparable to the result.  The jog height
    clears the imaginary saddle at ``|Im lam| ~ x**(1/(q-p))``.
    """
    bmin = min(spec.b[: spec.m], default=math.inf)
    amax = max((aj - 1 for aj in spec.a[: spec.n]), default=-math.inf)
    lx = math.log(x)
    if math.isinf(bmin):
        bmin = amax + 2.0
    gap = bmin - amax
    delta = min(0.5, max(0.02, 1.0 / (1.0 + abs(lx))), 0.5 * gap)
    s0 = bmin - delta
    if lx > 0 and spec.q > spec.p and spec.cstar == 0:
        target = spec.theta
        # slide towards the envelope exponent as x grows
        s0 = max(min(s0, bmin - delta - lx / 4.0), target, amax + 0.5 * gap)
        s0 = min(s0, bmin - delta)
    if spec.cstar > 0:
        # the dominant saddle is real: minimize the log integrand on (amax, s0]
        s0 = _real_saddle(lx, spec, amax, s0)
        jog = 2.0 + 3.0 * math.sqrt(abs(s0) + 1.0)
    else:
        jog = max(2.0, 2.0 * _saddle_height(x, spec))
    d = max(spec.q - spec.p, 1)
    # beyond the saddle each unit step to the right gains a factor (1/2)**d
    gamma = max(s0 + 10.0, (spec.mu + 8.0) / d)
    if spec.cstar > 0:
        gamma = s0 + 2.0
    return Contour(gamma=gamma, s0=s0, jog_height=jog)


def _real_saddle(lx: float, spec: GSpec, lo: float, hi: float) -> float:
    """Minimizer of ``log|Gq(s)| + s log x`` over real ``s`` in ``(lo, hi]``."""
    from scipy.optimize import minimize_scalar

    def f(s):
        return float(log_gamma_quotient(s + 1e-9j, spec).real) + s * lx

    lo_eff = lo + 1e-3 if math.isfinite(lo) else hi - 50.0 - 2.0 * math.exp(0.5 * max(lx, 0.0))
    if f(hi) <= f(hi - 1e-3):
        return hi
    r = minimize_scalar(f, bounds=(lo_eff, hi), method="bounded", options={"xatol": 1e-3})
    return float(r.x)


_GL_CACHE: dict = {}


def _gl(order: int):
    # leggauss is deterministic; caching only avoids recomputation
    if order not in _GL_CACHE:
        _GL_CACHE[order] = leggauss(order)
    return _GL_CACHE[order]


def _panel_breaks(t0: float, t1: float, width) -> np.ndarray:
    """Breakpoints from ``t0`` to ``t1`` with local panel width ``width(t)``."""
    pts = [t0]
    t = t0
    while t < t1:
        t = min(t1, t + width(t))
        pts.append(t)
    return np.asarray(pts)


def _nodes_on(breaks: np.ndarray, order: int):
    u, w = _gl(order)
    a = breaks[:-1, None]
    h = (breaks[1:] - breaks[:-1])[:, None]
    nodes = (a + 0.5 * h * (u + 1)).ravel()
    weights = (0.5 * h * w).ravel()
    return nodes, weights


def _frequency(lx_lo: float, lx_hi: float, spec: GSpec, t):
    """Bound on the angular frequency of the integrand phase along ``Im lam``."""
    d = spec.q - spec.p
    lt = d * np.log(np.maximum(np.abs(t), 1.0))
    return np.maximum(np.abs(lx_lo - lt), np.abs(lx_hi - lt))


def _upper_path(L: Contour, spec: GSpec, lx_lo: float, lx_hi: float, density: float,
                order: int, t_max: float):
    """Nodes ``lam`` and complex weights ``dlam`` on the upper half path."""
    freq = lambda t: _frequency(lx_lo, lx_hi, spec, t)  # noqa: E731
    # about six radians of phase per panel, never longer than a fifth of |lam|
    width = lambda t: min(6.0 / (0.5 + freq(t)), 0.2 * t + 1.0) / density  # noqa: E731
    # vertical segment at s0
    br = _panel_breaks(0.0, L.jog_height, width)
    tv, wv = _nodes_on(br, order)
    lam1 = L.s0 + 1j * tv
    w1 = 1j * wv
    # horizontal segment at height Y
    span = L.gamma - L.s0
    nh = max(2, int(math.ceil(abs(span) * density)))
    br = np.linspace(L.s0, L.gamma, nh + 1)
    uh, wh = _nodes_on(br, order)
    lam2 = uh + 1j * L.jog_height
    w2 = wh.astype(complex) * np.sign(span)
    # outer vertical tail
    br = _panel_breaks(L.jog_height, t_max, width)
    tt, wt = _nodes_on(br, order)
    lam3 = L.gamma + 1j * tt
    w3 = 1j * wt
    return np.concatenate([lam1, lam2, lam3]), np.concatenate([w1, w2, w3])


def _tail_height(L: Contour, spec: GSpec, lx_hi: float, lx_lo: float, tol: float, scale: float,
                 max_height: float) -> float:
    """Height beyond which the outer tail is below ``tol * scale / 10``.

    Uses the algebraic (``c* = 0``) or exponential (``c* > 0``) envelope of
    the gamma quotient, measured on the line ``Re lam = gamma``.
    """
    lx = max(lx_hi, lx_lo) if L.gamma >= 0 else min(lx_hi, lx_lo)
    T = max(L.jog_height, 1.0)
    while T < max_height:
        lam = L.gamma + 1j * T
        mag = math.exp(float(log_gamma_quotient(lam, spec).real) + L.gamma * lx)
        if spec.cstar > 0:
            tail = mag / (math.pi * spec.cstar)
        else:
            expo = spec.mu.real if isinstance(spec.mu, complex) else spec.mu
            expo = expo + (spec.p - spec.q) * L.gamma - 1
            tail = mag * T / max(-expo - 1.0, 0.5)
        if tail <= 0.1 * tol * scale:
            return T
        T *= 1.5
    raise NonConvergent("truncation height exceeds max_height")


def _integrate_band(xs: np.ndarray, spec: GSpec, L: Contour, ctl: QuadControl) -> np.ndarray:
    lxs = np.log(xs)
    lx_lo, lx_hi = float(lxs.min()), float(lxs.max())
    # rough result scale from the integrand magnitude on the crossing
    s_mag = np.exp(log_gamma_quotient(L.s0 + 0.5j, spec).real + L.s0 * lxs)
    scale = float(np.max(np.abs(s_mag))) if np.all(np.isfinite(s_mag)) else 1.0
    scale = max(scale, 1e-300)
    t_max = _tail_height(L, spec, lx_hi, lx_lo, ctl.truncation_tol, scale, ctl.max_height)
    prev = None
    density = 1.0
    for _ in range(ctl.max_refine + 1):
        lam, w = _upper_path(L, spec, lx_lo, lx_hi, density, ctl.panel_order, t_max)
        lg = log_gamma_quotient(lam, spec)
        # integrand for every x: exp(lg + lam * log x) * w
        expo = lg[None, :] + lam[None, :] * lxs[:, None]
        terms = np.exp(expo)
        res = (terms @ w).imag / math.pi
        # cancellation floor: rounding of the largest contributions
        floor = 256 * np.finfo(float).eps * (np.abs(terms) @ np.abs(w)) / math.pi
        if prev is not None:
            err = np.abs(res - prev)
            if np.all(err <= ctl.truncation_tol * np.abs(res) + floor):
                return res
        prev = res
        density *= 2.0
    raise NonConvergent("contour quadrature did not converge under refinement")


def mb_integral(func, L: Contour, t_max: float, panel: float = 0.5, order: int = 16) -> float:
    """``(1/2 pi i) int_L func(lam) dlam`` for a conjugate-symmetric integrand.

    ``func`` must satisfy ``func(conj lam) = conj func(lam)`` and accept an
    array of nodes; the path is ``L`` truncated at ``|Im lam| = t_max``.
    """
    width = lambda t: panel  # noqa: E731
    tv, wv = _nodes_on(_panel_breaks(0.0, L.jog_height, width), order)
    span = L.gamma - L.s0
    nh = max(1, int(math.ceil(abs(span) / panel)))
    uh, wh = _nodes_on(np.linspace(L.s0, L.gamma, nh + 1), order)
    tt, wt = _nodes_on(_panel_breaks(L.jog_height, t_max, width), order)
    lam = np.concatenate([L.s0 + 1j * tv, uh + 1j * L.jog_height, L.gamma + 1j * tt])
    w = np.concatenate([1j * wv, wh * np.sign(span), 1j * wt])
    vals = np.asarray(func(lam), dtype=complex)
    return float((vals @ w).imag / math.pi)


def g_contour(x: float, spec: GSpec, L: Contour | None = None, ctl: QuadControl = DEFAULT_QUAD) -> float:
    """Evaluate ``G^{m,n}_{p,q}(x | a; b)`` by contour quadrature.

    Parameters
    ----------
    x : float
        Positive argument.
    spec : GSpec
    L : Contour, optional
        Integration path. Chosen by :func:`default_contour` if omitted.
    ctl : QuadControl

    Returns
    -------
    float

    Raises
    ------
    ContourInvalid
        If ``L`` does not separate the pole families or violates the
        convergence condition for ``c* = 0``.
    NonConvergent
        If refinement fails to reach ``ctl.truncation_tol``.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    if spec.cstar == 0 and spec.q <= spec.p:
        raise ContourInvalid("c* = 0 requires q > p")
    if L is None:
        L = default_contour(x, spec)
    L.check(spec)
    return float(_integrate_band(np.array([float(x)]), spec, L, ctl)[0])


def g_contour_many(xs, spec: GSpec, ctl: QuadControl = DEFAULT_QUAD, band: float = 1.0) -> np.ndarray:
    """Vectorized :func:`g_contour` sharing nodes within bands of ``log x``.

    Points whose logarithms lie within ``band`` of each other are integrated
    on a common contour, so the gamma quotient is evaluated once per band.
    """
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    if np.any(~(flat > 0)):
        raise ValueError("x must be positive")
    out = np.empty_like(flat)
    order = np.argsort(flat)
    lxs = np.log(flat[order])
    start = 0
    while start < len(order):
        stop = start
        while stop < len(order) and lxs[stop] - lxs[start] <= band:
            stop += 1
        idx = order[start:stop]
        x_hi = float(flat[idx].max())
        x_mid = float(math.exp(0.5 * (lxs[start] + lxs[stop - 1])))
        L0 = default_contour(x_mid, spec)
        Lh = default_contour(x_hi, spec)
        L = Contour(gamma=max(L0.gamma, Lh.gamma), s0=L0.s0, jog_height=Lh.jog_height)
        L.check(spec)
        out[idx] = _integrate_band(flat[idx], spec, L, ctl)
        start = stop
    return out.reshape(xs.shape)


# ---------------------------------------------------------------------------
# cross-check routes


def g_series(x: float, spec: GSpec, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Residue series of ``G`` at the poles of ``Gamma(b_k - lam)``, ``k <= m``.

    Requires pairwise non-integer differences among ``b_1..b_m``.
    """
    m, n, p, q = spec.m, spec.n, spec.p, spec.q
    a, b = spec.a, spec.b
    if p > q or (p == q and x >= 1):
        raise NonConvergent("residue series needs p < q, or p = q with x < 1")
    for j in range(m):
        for k in range(j + 1, m):
            d = b[j] - b[k]
            if d == round(d):
                raise IntegerDifference(f"b_{j + 1} - b_{k + 1} = {d:g} is an integer")
    z = (-1) ** (p - m - n) * x
    total = 0.0
    for k in range(m):
        bk = b[k]
        coef = 1.0
        # the regularized pFq already divides by every Gamma(1 + b_k - b_j)
        for j in range(m):
            if j != k:
                coef *= math.pi / math.sin(math.pi * (b[j] - bk))
        for j in range(n):
            coef *= sc.gamma(1 + bk - a[j])
        for j in range(n, p):
            coef *= sc.rgamma(a[j] - bk)
        if coef == 0:
            continue
        upper = [1 + bk - aj for aj in a]
        lower = [1 + bk - b[j] for j in range(q) if j != k]
        total += coef * x ** bk * _pfq_regularized(upper, lower, z, ctl)
    return float(total)


def _pfq_regularized(a, b, z, ctl):
    """``pFq(a; b; z) / prod Gamma(b)`` tolerating nonpositive integer ``b``."""
    bad = [bj for bj in b if bj <= 0 and bj == math.floor(bj)]
    if not bad:
        return hyp_pfq(a, b, z, ctl) * np.prod([sc.rgamma(bj) for bj in b])
    # shift the series start past the vanishing reciprocal gammas
    total = 0.0
    term_log_free = None
    k0 = int(max(-bj for bj in bad)) + 1
    for k in range(k0, k0 + ctl.max_terms):
        t = z ** k / math.factorial(k)
        for aj in a:
            t *= sc.poch(aj, k)
        for bj in b:
            t *= sc.rgamma(bj + k)
        total += t
        if term_log_free is not None and abs(t) <= ctl.abs_tol + ctl.rel_tol * abs(total):
            return total
        term_log_free = t
    raise NonConvergent("regularized series did not converge")


def g_asymptotic(x: float, spec: GSpec, crossover: float = 100.0) -> float:
    """Leading term of the large-``x`` expansion of ``G^{m,0}_{p,q}``.

    Valid for ``0 <= p <= q - 2`` and ``p + 1 <= m <= q - 1``.  Only the
    leading oscillatory term is returned; its relative accuracy improves
    like a negative power of ``x``.
    """
    m, p, q = spec.m, spec.p, spec.q
    if spec.n != 0 or not (0 <= p <= q - 2 and p + 1 <= m <= q - 1):
        raise OutOfRegime("asymptotic formula needs n = 0, p <= q-2, p+1 <= m <= q-1")
    if x < crossover:
        raise OutOfRegime(f"x={x} below crossover {crossover}")
    d = q - p
    tail_b = sum(spec.b[m:])
    amp = (2 * math.pi) ** ((d - 1) / 2) / math.sqrt(d)
    theta = spec.theta
    total = 0j
    for sgn in (+1, -1):
        A = (sgn * -2j * math.pi) ** (m - q) * np.exp(-sgn * 1j * math.pi * tail_b)
        arg = sgn * (q - m) * math.pi
        root = x ** (1 / d) * np.exp(1j * arg / d)
        zt = x ** theta * np.exp(1j * arg * theta)
        total += A * np.exp(-d * root) * zt * amp
    return float(total.real)


def meijer_g(x, spec: GSpec, ctl: QuadControl = DEFAULT_QUAD):
    """Convenience front end: scalar or array ``x`` through the contour route."""
    if np.ndim(x) == 0:
        return g_contour(float(x), spec, ctl=ctl)
    return g_contour_many(x, spec, ctl=ctl)


def g_ode_residual(x: float, spec: GSpec, x_term: bool = True, h: float = 0.02) -> float:
    """Relative residual of the G-function ODE for ``G^{m,0}_{0,q}`` at ``x``.

    The equation is ``x u = prod_j (theta - b_j) u`` with ``theta = x d/dx``;
    ``x_term=False`` drops the left side. Derivatives in ``s = log x`` come
    from a 9-point stencil of contour values.
    """
    if spec.p != 0 or spec.n != 0:
        raise ValueError("only G^{m,0}_{0,q} is supported")
    poly = np.poly1d([1.0])
    for b in spec.b:
        poly = poly * np.poly1d([1.0, -b])
    coeffs = poly.coeffs[::-1]  # coefficient of theta^k at index k
    offs = np.arange(-4, 5)
    vals = g_contour_many(x * np.exp(offs * h), spec)
    # central-difference weights for derivatives 0..4 on 9 points
    V = np.vander(offs * h, 9, increasing=True).T
    derivs = []
    for k in range(len(coeffs)):
        rhs = np.zeros(9)
        rhs[k] = math.factorial(k)
        derivs.append(float(np.dot(np.linalg.solve(V, rhs), vals)))
    terms = [c * d for c, d in zip(coeffs, derivs)]
    lhs = x * derivs[0] if x_term else 0.0
    res = lhs - sum(terms)
    scale = abs(lhs) + sum(abs(t) for t in terms)
    return abs(res) / scale
