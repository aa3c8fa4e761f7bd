"""Radial transforms ``T_{l,k}`` on ``L^2(R_+, r^(p+q-5) dr / 2)``.

Functions live on a uniform grid in ``x = log r``.  Two independent routes
evaluate the transform:

* direct quadrature of ``(1/2) int K_{l,k}(r r') f(r') r'^(p+q-5) dr'``;
  on a log grid ``r_i r_j`` depends only on ``i + j``, so the sum is a
  single correlation against kernel samples taken from the contour
  quadrature in :mod:`conefourier.gfun`;
* the Fourier multiplier ``psi`` acting on ``sigma_+ f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import AliasingDetected, GridTooCoarse, ParameterOutOfRange, PoleError
from .gfun import GSpec, g_contour_many

__all__ = [
    "Signature",
    "SectorIndex",
    "RadialGrid",
    "RadialFn",
    "f_lk",
    "f_lk_norm_sq",
    "f_lk_mellin",
    "flk_fourier",
    "kernel_gspec",
    "kernel_K_lk",
    "psi_multiplier",
    "eigenvalue",
    "sigma_plus",
    "sigma_minus",
    "sigma_plus_inverse",
    "sigma_minus_inverse",
    "t_lk_direct",
    "t_lk_multiplier",
    "dilate",
    "random_smooth_fn",
    "fox_g_transform",
    "fox_multiplier",
    "fox_grid",
    "fox_to_sector",
]


@dataclass(frozen=True)
class Signature:
    """Signature ``(p, q)`` with ``p >= q >= 2``, ``p + q`` even and ``p + q >= 6``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q < 2 or p < q:
            raise ValueError(f"need p >= q >= 2, got ({p}, {q}); swap the factors if p < q")
        if (p + q) % 2:
            raise ValueError("p + q must be even")
        if p + q < 6:
            raise ValueError("p + q must be at least 6")

    @property
    def n(self) -> int:
        """Dimension of the ambient space of the cone."""
        return self.p + self.q - 2

    @property
    def m(self) -> int:
        return (self.p + self.q - 6) // 2

    @property
    def half_diff(self) -> int:
        return (self.p - self.q) // 2

    @property
    def weight_exp(self) -> int:
        """Exponent ``p + q - 4`` of ``r`` in the log-substituted measure."""
        return self.p + self.q - 4


@dataclass(frozen=True)
class SectorIndex:
    """Bidegree ``(l, k)`` of spherical harmonics on the two sphere factors."""

    l: int
    k: int

    def __post_init__(self):
        if self.l < 0 or self.k < 0:
            raise ValueError("degrees must be nonnegative")

    def shift(self, sig: Signature) -> int:
        return sig.half_diff + self.l - self.k

    def case(self, sig: Signature) -> int:
        """1 if ``(p-q)/2 + l - k >= 0`` else 2 (the boundary belongs to both)."""
        return 1 if self.shift(sig) >= 0 else 2

    def a(self, sig: Signature) -> int:
        return max(self.l, self.k - sig.half_diff)


def eigenvalue(sig: Signature, idx: SectorIndex) -> int:
    """Sign by which ``T_{l,k}`` acts on ``f_{l,k}``."""
    return -1 if (idx.a(sig) + sig.half_diff) % 2 else 1


@dataclass(frozen=True)
class RadialGrid:
    """Periodic uniform grid ``x_i = x_min + i dx`` in ``x = log r``."""

    x_min: float = -14.0
    x_max: float = 7.0
    N: int = 4096

    def __post_init__(self):
        if self.N < 256 or self.N & (self.N - 1):
            raise ValueError("N must be a power of two, at least 256")
        if self.x_max - self.x_min < 10:
            raise ValueError("grid must span at least 10 in log r")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.N

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.N)

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.x)


@dataclass
class RadialFn:
    """Samples of a radial function on a :class:`RadialGrid`.

    Attributes
    ----------
    grid : RadialGrid
    sig : Signature
        Fixes the measure ``r^(p+q-5) dr / 2``.
    values : ndarray
    tail : tuple or None
        Optional ``(power, exp_decay)`` describing ``f ~ r**power e^{-2r}``.
    """

    grid: RadialGrid
    sig: Signature
    values: np.ndarray
    tail: tuple | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.N,):
            raise ValueError("sample count does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("samples must be finite")

    @classmethod
    def from_callable(cls, grid: RadialGrid, sig: Signature, fn) -> "RadialFn":
        return cls(grid, sig, fn(grid.r))

    def norm(self) -> float:
        """L2 norm for the measure ``r^(p+q-5) dr / 2`` (trapezoid in ``log r``)."""
        return float(np.linalg.norm(sigma_plus(self)) * math.sqrt(self.grid.dx))

    def inner(self, other: "RadialFn") -> float:
        return float(np.dot(sigma_plus(self), sigma_plus(other)) * self.grid.dx)

    def __sub__(self, other: "RadialFn") -> "RadialFn":
        return RadialFn(self.grid, self.sig, self.values - other.values)

    def __add__(self, other: "RadialFn") -> "RadialFn":
        return RadialFn(self.grid, self.sig, self.values + other.values)

    def scaled(self, c: float) -> "RadialFn":
        return RadialFn(self.grid, self.sig, c * self.values)


# ---------------------------------------------------------------------------
# eigenvectors


def _flk_params(sig: Signature, idx: SectorIndex, case: int):
    p, q, l, k = sig.p, sig.q, idx.l, idx.k
    if case == 1:
        return -(q - 3) / 2 + l, (q - 3) / 2 + k
    return -(p - 3) / 2 + k, (p - 3) / 2 + l


def f_lk(sig: Signature, idx: SectorIndex):
    """The ``K``-Bessel eigenvector ``f_{l,k}`` as a callable of ``r``.

    Case 1: ``r^(-(q-3)/2 + l) K_{(q-3)/2+k}(2r)``;
    Case 2: ``r^(-(p-3)/2 + k) K_{(p-3)/2+l}(2r)``.
    """
    case = idx.case(sig)
    power, order = _flk_params(sig, idx, case)
    if idx.shift(sig) == 0:
        other = _flk_params(sig, idx, 2)
        assert abs(other[0] - power) < 1e-12 and abs(abs(other[1]) - abs(order)) < 1e-12

    def fn(r):
        r = np.asarray(r, dtype=float)
        return r ** power * sc.kv(order, 2 * r)

    return fn


def f_lk_norm_sq(sig: Signature, idx: SectorIndex) -> float:
    """Closed form of ``||f_{l,k}||^2`` in ``L^2(R_+, r^(p+q-5) dr / 2)``."""
    p, q, l, k = sig.p, sig.q, idx.l, idx.k

    def case1(p, q, l, k):
        return (sc.gamma((p - 1) / 2 + l) ** 2 * sc.gamma((p + q - 4) / 2 + l + k)
                * sc.gamma((p - q + 2) / 2 + l - k) / (16 * sc.gamma(p - 1 + 2 * l)))

    if idx.shift(sig) > 0:
        return float(case1(p, q, l, k))
    val = case1(q, p, k, l)
    if idx.shift(sig) == 0:
        assert math.isclose(val, case1(p, q, l, k), rel_tol=1e-12)
    return float(val)


def _mellin_gamma_args(sig: Signature, idx: SectorIndex):
    p, q, l, k = sig.p, sig.q, idx.l, idx.k
    a = (p + q - 4) / 4 + (l + k) / 2
    if idx.case(sig) == 1:
        b = (p - q) / 4 + (l - k + 1) / 2
    else:
        b = (q - p) / 4 + (k - l + 1) / 2
    return a, b


def f_lk_mellin(sig: Signature, idx: SectorIndex, x):
    """``int_0^oo r^((p+q-6)/2 + i x) f_{l,k}(r) dr`` in closed form."""
    a, b = _mellin_gamma_args(sig, idx)
    z = 0.5j * np.asarray(x, dtype=float)
    val = 0.25 * np.exp(sc.loggamma(a + z) + sc.loggamma(b + z))
    return complex(val) if np.ndim(x) == 0 else val


def flk_fourier(sig: Signature, idx: SectorIndex, zeta):
    """Fourier transform of ``sigma_+ f_{l,k}`` (kernel ``e^{+i x zeta}/sqrt(2 pi)``)."""
    return f_lk_mellin(sig, idx, zeta) / (2 * math.sqrt(math.pi))


# ---------------------------------------------------------------------------
# kernels and multiplier


def kernel_gspec(sig: Signature, idx: SectorIndex) -> tuple[int, GSpec]:
    """Sign and ``G^{20}_{04}`` parameters with ``K_{l,k}(t) = 4 sign G(t^2)``."""
    p, q, l, k = sig.p, sig.q, idx.l, idx.k
    b1 = (l + k) / 2
    b3 = (-p - q + 6 - l - k) / 2
    if idx.case(sig) == 1:
        sign = -1 if (l + sig.half_diff) % 2 else 1
        b = (b1, (-q + 3 + l - k) / 2, b3, (-p + 3 - l + k) / 2)
    else:
        sign = -1 if k % 2 else 1
        b = (b1, (-p + 3 - l + k) / 2, b3, (-q + 3 + l - k) / 2)
    if idx.shift(sig) == 0:
        alt = (b1, (-p + 3 - l + k) / 2, b3, (-q + 3 + l - k) / 2)
        assert alt == b and sign == (-1 if k % 2 else 1)
    return sign, GSpec(2, 0, (), b)


def kernel_K_lk(sig: Signature, idx: SectorIndex, t, use_bessel: bool = True):
    """Radial kernel ``K_{l,k}(t)`` for ``t > 0``.

    For ``q = 2`` and ``k <= 1`` the kernel reduces to
    ``4 (-1)^(l + (p-2)/2) t^(-(p-3)/2) J_{p-3+2l}(4 sqrt t)``, used when
    ``use_bessel`` is true.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    if use_bessel and sig.q == 2 and idx.k <= 1:
        sign = -1 if (idx.l + sig.half_diff) % 2 else 1
        out = 4 * sign * t ** (-(sig.p - 3) / 2) * sc.jv(sig.p - 3 + 2 * idx.l, 4 * np.sqrt(t))
    else:
        sign, spec = kernel_gspec(sig, idx)
        out = 4 * sign * g_contour_many(t * t, spec)
    return float(out) if out.ndim == 0 else out


def _psi_form(z, sign, a, b):
    lg = (sc.loggamma(a - 0.5j * z) + sc.loggamma(b - 0.5j * z)
          - sc.loggamma(a + 0.5j * z) - sc.loggamma(b + 0.5j * z))
    return sign * np.exp(lg)


def psi_multiplier(sig: Signature, idx: SectorIndex, zeta):
    """Unimodular multiplier ``psi(zeta)`` of ``T_{l,k}`` in log coordinates.

    Both gamma-quotient forms are evaluated; where both are finite they are
    asserted to agree and the form attached to the sector's case is returned.
    """
    p, q, l, k = sig.p, sig.q, idx.l, idx.k
    z = np.asarray(zeta, dtype=complex)
    a = (p + q - 4) / 4 + (l + k) / 2
    b1 = (p - q) / 4 + (l - k + 1) / 2
    b2 = -(p - q) / 4 + (k - l + 1) / 2
    s1 = -1 if (l + sig.half_diff) % 2 else 1
    s2 = -1 if k % 2 else 1
    with np.errstate(all="ignore"):
        v1 = _psi_form(z, s1, a, b1)
        v2 = _psi_form(z, s2, a, b2)
    primary = v1 if idx.case(sig) == 1 else v2
    if np.any(~np.isfinite(primary)):
        raise PoleError("psi evaluated at a pole")
    both = np.isfinite(v1) & np.isfinite(v2)
    if np.any(both):
        diff = np.abs(v1[both] - v2[both]) if np.ndim(v1) else abs(v1 - v2)
        scale = np.maximum(np.abs(primary[both]) if np.ndim(v1) else abs(primary), 1.0)
        assert np.all(diff <= 1e-10 * scale), "psi forms disagree"
    return complex(primary) if np.ndim(zeta) == 0 else primary


# ---------------------------------------------------------------------------
# log-coordinate maps


def sigma_plus(f: RadialFn) -> np.ndarray:
    """``(1/sqrt 2) e^{(p+q-4)x/2} f(e^x)`` on the grid."""
    return f.values * np.exp(0.5 * f.sig.weight_exp * f.grid.x) / math.sqrt(2)


def sigma_minus(f: RadialFn) -> tuple[np.ndarray, np.ndarray]:
    """``sigma_- f`` as (abscissae ``-x_i``, values) in increasing abscissa order."""
    vals = sigma_plus(f)
    return -f.grid.x[::-1], vals[::-1]


def sigma_plus_inverse(samples: np.ndarray, grid: RadialGrid, sig: Signature) -> RadialFn:
    return RadialFn(grid, sig, math.sqrt(2) * samples * np.exp(-0.5 * sig.weight_exp * grid.x))


def sigma_minus_inverse(samples_at_minus_x: np.ndarray, grid: RadialGrid, sig: Signature) -> RadialFn:
    """Inverse of ``sigma_-`` given ``F(-x_i)`` for each grid node ``x_i``."""
    return sigma_plus_inverse(samples_at_minus_x, grid, sig)


# ---------------------------------------------------------------------------
# transforms


_ROW_BLOCK = 256


def _support(g: np.ndarray, rel: float = 1e-17) -> tuple[int, int]:
    mag = np.abs(g)
    big = np.nonzero(mag > rel * mag.max())[0]
    return int(big[0]), int(big[-1])


def _log_correlate(g: np.ndarray, grid: RadialGrid, kernel_of_logt, oversample_check: float,
                   freq_of_logt=None) -> np.ndarray:
    """``out_i = dx * sum_j k(x_i + x_j) g_j`` over the significant support of ``g``."""
    N, dx, x0 = grid.N, grid.dx, grid.x_min
    j_lo, j_hi = _support(g)
    s = np.arange(j_lo, N + j_hi)
    logt = 2 * x0 + dx * s
    if freq_of_logt is not None:
        fmax = float(freq_of_logt(logt[-1]))
        if fmax * dx > oversample_check:
            raise GridTooCoarse(
                f"kernel phase advances {fmax * dx:.2f} rad per step at log t = {logt[-1]:.2f}")
    kvals = kernel_of_logt(logt)
    gs = g[j_lo: j_hi + 1]
    # out_i = sum_j kvals[i + j - j_lo] gs[j - j_lo]. Summed as a Hankel
    # matrix product in row blocks: an FFT convolution would spread the
    # rounding error of the largest kernel values over every output point.
    hankel = np.lib.stride_tricks.sliding_window_view(kvals, gs.size)
    out = np.empty(N)
    for i0 in range(0, N, _ROW_BLOCK):
        out[i0: i0 + _ROW_BLOCK] = hankel[i0: i0 + _ROW_BLOCK] @ gs
    return dx * out


def t_lk_direct(f: RadialFn, idx: SectorIndex, phase_limit: float = 1.5 * math.pi) -> RadialFn:
    """``T_{l,k} f`` by quadrature against the kernel ``K_{l,k}``.

    Raises
    ------
    GridTooCoarse
        If the kernel phase ``4 sqrt(r r')`` advances by more than
        ``phase_limit`` per grid step over the products that meet the
        support of ``f``.
    """
    sig, grid = f.sig, f.grid
    g = f.values * np.exp(sig.weight_exp * grid.x)
    if not np.any(g):
        return RadialFn(grid, sig, np.zeros(grid.N))

    def kern(logt):
        return kernel_K_lk(sig, idx, np.exp(logt))

    out = 0.5 * _log_correlate(g, grid, kern, phase_limit, lambda lt: 2 * math.exp(lt / 2))
    return RadialFn(grid, sig, out)


def _shifted_spectrum(values: np.ndarray, grid: RadialGrid, mult, shift: float, check: bool = True):
    """Apply a Fourier multiplier and evaluate at ``x_i + shift`` (trigonometric interpolation)."""
    N, dx = grid.N, grid.dx
    spec = np.fft.ifft(values)
    if check:
        total = float(np.sum(np.abs(spec) ** 2))
        if total > 0 and abs(spec[N // 2]) ** 2 > 1e-8 * total:
            raise AliasingDetected("significant energy at the Nyquist frequency")
    zeta = 2 * math.pi * np.fft.fftfreq(N, d=dx)
    m = mult(zeta) * np.exp(-1j * shift * zeta)
    # symmetric treatment of the unpaired Nyquist bin
    zn = abs(zeta[N // 2])
    m[N // 2] = 0.5 * (mult(np.array([zn]))[0] * np.exp(-1j * shift * zn)
                       + mult(np.array([-zn]))[0] * np.exp(1j * shift * zn))
    return np.fft.fft(m * spec)


def t_lk_multiplier(f: RadialFn, idx: SectorIndex, check: bool = True,
                    edge_tol: float | None = 1e-10, pad: int = 1) -> RadialFn:
    """``T_{l,k} f = sigma_-^{-1} F^{-1}[psi F(sigma_+ f)]`` on the periodic grid.

    The discrete transform pair is ``numpy.fft.ifft``/``fft``, which matches the
    kernel ``e^{+i x zeta}`` of the continuous Fourier transform used for
    ``psi``; the output is evaluated at ``-x_i`` by a phase shift.

    Parameters
    ----------
    f : RadialFn
    idx : SectorIndex
    check : bool
        Enable the Nyquist-energy and edge-decay guards.
    edge_tol : float or None
        Largest admissible ``|sigma_+ f|`` at the grid ends relative to its
        maximum. Outputs of ``T`` carry a tail ``~ e^{x}`` toward small ``r``
        (from the pole of ``psi`` at ``-i``), so a second application on a
        moderate grid needs this relaxed or disabled (``None``).
    pad : int
        Number of extra grid spans of zeros prepended before the periodic
        transform. ``pad + 1`` must be a power of two.

    Raises
    ------
    AliasingDetected
    """
    sig, grid = f.sig, f.grid
    g = sigma_plus(f)
    if check and edge_tol is not None:
        edge = max(abs(g[0]), abs(g[-1]))
        if edge > edge_tol * max(np.abs(g).max(), 1e-300):
            raise AliasingDetected("input does not decay at the grid ends")
    vals = _reflected_multiply(g, grid, lambda z: psi_multiplier(sig, idx, z), pad, check)
    return sigma_plus_inverse(vals, grid, sig)


def _reflected_multiply(g: np.ndarray, grid: RadialGrid, mult, pad: int, check: bool) -> np.ndarray:
    """Samples of ``F^{-1}[mult F g]`` at ``-x_i``.

    Outputs of these transforms decay only like ``e^{x}`` toward ``x -> -oo``,
    so the periodic transform runs on a grid extended to the left by ``pad``
    spans to keep the wrapped tail away from the returned window.
    """
    N = grid.N
    big = RadialGrid(grid.x_min - pad * (grid.x_max - grid.x_min), grid.x_max, N * (pad + 1))
    gb = np.concatenate([np.zeros(pad * N), g])
    xb = big.x
    # h(y_j) at y_j = -x_{M-1-j} = x_j + shift
    shift = -(xb[0] + xb[-1])
    h = _shifted_spectrum(gb, big, mult, shift, check)
    return h.real[::-1][pad * N:]


def random_smooth_fn(grid: RadialGrid, sig: Signature, rng: np.random.Generator,
                     n_bumps: int = 4, centre=(-2.5, -1.0), width=(0.45, 0.6),
                     max_freq: float = 3.0) -> RadialFn:
    """Seeded sum of Gaussian-windowed cosines in ``log r``.

    The sum is built for ``sigma_+ f``. Wide windows keep the spectrum
    narrow, which keeps ``T f`` inside the default grid: a frequency ``zeta``
    of ``sigma_+ f`` lands near ``x = -centre + 2 log(zeta / 2)``.
    """
    x = grid.x
    g = np.zeros_like(x)
    for _ in range(n_bumps):
        c = rng.uniform(*centre)
        w = rng.uniform(*width)
        om = rng.uniform(0.0, max_freq)
        ph = rng.uniform(0.0, 2 * math.pi)
        g += rng.normal() * np.exp(-0.5 * ((x - c) / w) ** 2) * np.cos(om * x + ph)
    return sigma_plus_inverse(g, grid, sig)


def dilate(f: RadialFn, steps: int) -> RadialFn:
    """``rho(t) f(r) = e^{-(p+q-4)t/2} f(e^{-t} r)`` for ``t = steps * dx`` (periodic shift)."""
    t = steps * f.grid.dx
    vals = np.roll(f.values, steps) * math.exp(-0.5 * f.sig.weight_exp * t)
    return RadialFn(f.grid, f.sig, vals)


# ---------------------------------------------------------------------------
# Fox's G-transform


def fox_to_sector(b1: float, b2: float, gam: float):
    """A signature and bidegree whose radial kernel is the Fox kernel, if one exists.

    Returns ``(Signature, SectorIndex)`` or ``None``.
    """
    for q in range(2, int(2 * gam + 4) + 1):
        p = int(round(2 * gam + 4 - q))
        if p < q:
            break
        l2 = 2 * b1 + 2 * b2 + q - 3
        k2 = 2 * b1 - 2 * b2 - q + 3
        if l2 < 0 or k2 < 0 or l2 % 2 or k2 % 2:
            continue
        try:
            sig = Signature(p, q)
        except ValueError:
            continue
        idx = SectorIndex(int(l2 // 2), int(k2 // 2))
        if idx.case(sig) == 1:
            return sig, idx
    return None


def _check_fox(b1, b2, gam):
    for v in (b1, b2, gam):
        if abs(2 * v - round(2 * v)) > 1e-12:
            raise ParameterOutOfRange("parameters must be half-integers")
    if not (b1 >= 0 and gam >= 1 and (1 - gam) / 2 <= b2 <= 0.5 + b1):
        raise ParameterOutOfRange("need b1 >= 0, gamma >= 1, (1-gamma)/2 <= b2 <= 1/2 + b1")


def fox_grid(gam: float, base: RadialGrid = RadialGrid()) -> RadialGrid:
    """Grid in ``log y`` matching ``base`` under ``y = r^(2 gamma)``."""
    return RadialGrid(2 * gam * base.x_min, 2 * gam * base.x_max, base.N)


def fox_multiplier(b1: float, b2: float, gam: float, zeta):
    """Log-coordinate symbol of Fox's transform.

    With ``g(v) = e^{v/2} f(e^v)`` the transform becomes
    ``h(-u) = F^{-1}[m F g](u)`` with the unimodular
    ``m(zeta) = prod_j Gamma(c_j - i gamma zeta) / Gamma(c_j + i gamma zeta)``,
    ``c_j = b_j + gamma/2``.
    """
    z = np.asarray(zeta, dtype=complex)
    lg = 0
    for bj in (b1, b2):
        c = bj + gam / 2
        lg = lg + sc.loggamma(c - 1j * gam * z) - sc.loggamma(c + 1j * gam * z)
    out = np.exp(lg)
    if np.any(~np.isfinite(out)):
        raise PoleError("Fox symbol evaluated at a pole")
    return out


def fox_g_transform(b1: float, b2: float, gam: float, values, grid: RadialGrid,
                    method: str = "multiplier", phase_limit: float = 1.5 * math.pi,
                    pad: int = 1, check: bool = True) -> np.ndarray:
    """Fox's unitary transform on ``L^2(R_+, dy)``.

    ``S f(x) = (1/gamma) int_0^oo G^{20}_{04}((xy)^(1/gamma) | b1, b2, 1-gamma-b1, 1-gamma-b2) f(y) dy``
    with samples of ``f`` at ``y = e^{x_i}``.

    Parameters
    ----------
    b1, b2, gam : float
        Half-integers with ``b1 >= 0``, ``gam >= 1`` and
        ``(1 - gam)/2 <= b2 <= 1/2 + b1``.
    values : array_like
        Samples of ``f`` on ``grid.r``.
    grid : RadialGrid
    method : {'multiplier', 'direct'}
        Symbol route or quadrature against contour-evaluated kernel samples.

    Notes
    -----
    Output frequencies spread over ``log y`` in proportion to ``gamma``; a
    grid from :func:`fox_grid` keeps the output inside the window.

    Raises
    ------
    ParameterOutOfRange
    GridTooCoarse
        Direct route only.
    """
    _check_fox(b1, b2, gam)
    values = np.asarray(values, dtype=float)
    if method == "multiplier":
        g = values * np.exp(grid.x / 2)
        h = _reflected_multiply(g, grid, lambda z: fox_multiplier(b1, b2, gam, z), pad, check)
        return h * np.exp(-grid.x / 2)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    spec = GSpec(2, 0, (), (b1, b2, 1 - gam - b1, 1 - gam - b2))
    g = values * np.exp(grid.x)
    if not np.any(g):
        return np.zeros_like(values)

    def kern(logt):
        return g_contour_many(np.exp(logt / gam), spec)

    # phase of the kernel is 4 (xy)^(1/(4 gamma)); its log-derivative bounds the step
    freq = lambda lt: math.exp(lt / (4 * gam)) / gam  # noqa: E731
    return _log_correlate(g, grid, kern, phase_limit, freq) / gam
