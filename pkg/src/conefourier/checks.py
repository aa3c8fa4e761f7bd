"""Verification suites shared by the command line and the acceptance tests.

Each suite returns :class:`CheckRow` records. A row compares a measured
error with a tolerance; exact (rational) checks use error 0 or 1 with
tolerance 0. Rows with status ``deviation`` record a known-wrong variant
of an identity (the correct form is checked by a neighbouring row); they
never change the exit status.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special as sc

from . import cone, distrib, gfun, harmonics, radial, weyl
from .errors import ConfigError

__all__ = ["CheckRow", "SuiteConfig", "SUITES", "run_suites"]

PASS, FAIL, DEVIATION = "pass", "fail", "deviation"


@dataclass
class CheckRow:
    suite: str
    anchor: str
    params: str
    error: float
    tol: float
    status: str = ""

    def __post_init__(self):
        if not self.status:
            ok = math.isfinite(self.error) and self.error <= self.tol
            self.status = PASS if ok else FAIL

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteConfig:
    """Settings for :func:`run_suites`.

    ``tol`` overrides every tolerance when given; ``tol_overrides`` maps
    anchor prefixes to tolerances.
    """

    signatures: tuple = ((3, 3), (4, 4), (4, 2), (6, 2))
    lmax: int = 3
    kmax: int = 3
    grid_n: int = 4096
    x_min: float = -14.0
    x_max: float = 7.0
    tol: float | None = None
    tol_overrides: dict = field(default_factory=dict)
    seed: int = 12345
    suites: tuple = ()
    cone_points: int = 5

    def __post_init__(self):
        sigs = []
        for pq in self.signatures:
            try:
                sigs.append(radial.Signature(*pq))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"inadmissible signature {pq}: {exc}") from None
        self.signatures = tuple((s.p, s.q) for s in sigs)
        if self.tol is not None and self.tol < 0:
            raise ConfigError("tolerance must be nonnegative")
        if any(v < 0 for v in self.tol_overrides.values()):
            raise ConfigError("tolerance must be nonnegative")
        if self.lmax < 0 or self.kmax < 0:
            raise ConfigError("lmax and kmax must be nonnegative")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ConfigError(f"unknown suites: {sorted(unknown)}")
        if self.grid_n < 256 or self.grid_n & (self.grid_n - 1):
            raise ConfigError("grid_n must be a power of two >= 256")

    def grid(self) -> radial.RadialGrid:
        return radial.RadialGrid(self.x_min, self.x_max, self.grid_n)

    def tolerance(self, anchor: str, default: float) -> float:
        if self.tol is not None:
            return self.tol
        best = None
        for prefix, v in self.tol_overrides.items():
            if anchor.startswith(prefix) and (best is None or len(prefix) > len(best[0])):
                best = (prefix, v)
        return default if best is None else best[1]


class _Rows(list):
    def __init__(self, suite: str, cfg: SuiteConfig):
        super().__init__()
        self.suite, self.cfg = suite, cfg

    def add(self, anchor: str, params, error: float, tol: float):
        self.append(CheckRow(self.suite, anchor, _fmt(params), float(error),
                             self.cfg.tolerance(anchor, tol)))

    def note(self, anchor: str, params, error: float, tol: float):
        """A known-wrong variant of an identity (never counted as a failure)."""
        self.append(CheckRow(self.suite, anchor, _fmt(params), float(error), tol, DEVIATION))

    def exact(self, anchor: str, params, holds: bool):
        self.add(anchor, params, 0.0 if holds else 1.0, 0.0)


def _fmt(params) -> str:
    if isinstance(params, dict):
        return ";".join(f"{k}={v}" for k, v in params.items())
    return str(params)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _sectors(sig: radial.Signature, lmax: int, kmax: int):
    kcap = min(kmax, 1) if sig.q == 2 else kmax
    return [radial.SectorIndex(l, k) for l in range(lmax + 1) for k in range(kcap + 1)]


# ---------------------------------------------------------------------------
# suites


def suite_specfun(cfg: SuiteConfig):
    from . import specfun as sf
    rows = _Rows("specfun-identities", cfg)
    rows.add("specfun.loggamma.half", "z=0.5", abs(sf.log_gamma(0.5) - 0.5 * math.log(math.pi)), 1e-14)
    z = 5.3 + 2.1j
    rows.add("specfun.loggamma.recursion", "z=5.3+2.1i",
             abs(np.exp(sf.log_gamma(z + 1) - sf.log_gamma(z)) - z) / abs(z), 1e-13)
    rows.add("specfun.bessel.k-half", "nu=0.5;x=2",
             _rel(sf.bessel("K", 0.5, 2.0), math.sqrt(math.pi / 4) * math.exp(-2)), 1e-13)
    rows.add("specfun.bessel.k-half-odd", "nu=1.5;x=1",
             _rel(sf.bessel("K", 1.5, 1.0), sf.bessel_k_half_odd(1, 1.0)), 1e-12)
    rows.add("specfun.hyp0f1.bessel", "nu=0.5;x=1.3",
             _rel(sf.hyp_pfq([], [1.5], -1.3 ** 2 / 4) / math.gamma(1.5), sf.bessel_tilde("J", 0.5, 1.3)), 1e-12)
    worst = 0.0
    for mu in (0.5, 1.0, 1.5):
        x, w = sf.gauss_jacobi(40, mu - 0.5, mu - 0.5)
        for l in range(6):
            for m in range(6):
                val = np.dot(sf.gegenbauer_tilde(l, mu, x) * sf.gegenbauer_tilde(m, mu, x), w)
                val /= math.gamma(mu) ** 2
                ref = 0.0 if l != m else (2 ** (1 - 2 * mu) * math.pi * math.gamma(l + 2 * mu)
                                          / ((l + mu) * math.gamma(l + 1) * math.gamma(mu) ** 2))
                worst = max(worst, abs(val - ref))
    rows.add("specfun.gegenbauer.orthogonality", "l,m<=5;mu=0.5,1,1.5", worst, 1e-10)
    worst = 0.0
    for mu, l, a in [(1.0, 1, 1.0), (1.0, 3, 4.0), (1.5, 2, 4.0), (0.5, 0, 1.0)]:
        n = int(round(2 * mu + 2))
        quad = harmonics.funk_hecke(lambda x: np.exp(1j * a * x), l, n)
        quad /= (2 ** (n - 2) * math.pi ** ((n - 2) / 2) * math.factorial(l) / math.gamma(n - 2 + l))
        worst = max(worst, abs(quad - harmonics.gegenbauer_fourier(mu, l, a)) / abs(quad))
    rows.add("specfun.gegenbauer.fourier", "a=1,4;l<=3", worst, 1e-8)
    worst = 0.0
    for nu in (0.0, 0.5):
        for l in range(3):
            for al in (1.0, 3.0):
                worst = max(worst, _rel(harmonics.gegenbauer_bessel_integral(nu, l, al),
                                        harmonics.gegenbauer_bessel_closed(nu, l, al)))
    rows.add("specfun.gegenbauer.hankel", "nu=0,0.5;l<=2;alpha=1,3", worst, 1e-8)
    return rows


def suite_gfun(cfg: SuiteConfig):
    rows = _Rows("gfun-reductions", cfg)
    GS = gfun.GSpec
    t0 = time.perf_counter()
    for nu in (0.0, 0.5, 1.0, 1.5):
        for x in (0.1, 1.0, 10.0):
            p = {"nu": nu, "x": x}
            rows.add("gfun.reduction.bessel-j", p,
                     _rel(gfun.g_contour(x, GS(1, 0, (), (nu, 0.0))),
                          x ** (nu / 2) * sc.jv(nu, 2 * math.sqrt(x))), 1e-9)
            rows.add("gfun.reduction.bessel-k", p,
                     _rel(gfun.g_contour(x, GS(2, 0, (), (nu, 0.0))),
                          2 * x ** (nu / 2) * sc.kv(nu, 2 * math.sqrt(x))), 1e-9)
            a = nu / 2
            rows.add("gfun.reduction.bessel-j-quartic", p,
                     _rel(gfun.g_contour(x, GS(2, 0, (), (a, a + 0.5, 0.0, 0.5))),
                          x ** (a / 2) * sc.jv(nu, 4 * x ** 0.25)), 1e-9)
            rows.add("gfun.reduction.bessel-y", p,
                     _rel(gfun.g_contour(x, GS(2, 0, (-0.5,), (0.0, nu, -0.5))),
                          x ** (nu / 2) * sc.yv(nu, 2 * math.sqrt(x))), 1e-9)
    rows.add("gfun.reduction.runtime", "seconds<10", time.perf_counter() - t0, 10.0)
    spec = GS(2, 0, (), (0.1, 0.35, -0.6, -1.1))
    rows.add("gfun.series.contour", "x=0.5",
             _rel(gfun.g_series(0.5, spec), gfun.g_contour(0.5, spec)), 1e-9)
    spec = GS(2, 0, (), (0.0, 0.0, 0.0, 0.0))
    d = gfun.default_contour(2.0, spec)
    a1 = gfun.g_contour(2.0, spec, d)
    a2 = gfun.g_contour(2.0, spec, gfun.Contour(d.gamma + 0.3, d.s0 - 0.2, 1.5 * d.jog_height))
    rows.add("gfun.contour.independence", "x=2", _rel(a1, a2), 1e-10)
    base = GS(2, 0, (), (0.2, -0.3, -0.7, 0.4))
    shifted = GS(2, 0, (), tuple(b + 0.6 for b in base.b))
    rows.add("gfun.shift", "s=0.6;x=1.7",
             _rel(1.7 ** 0.6 * gfun.g_contour(1.7, base), gfun.g_contour(1.7, shifted)), 1e-10)
    for pq, lk in [((3, 3), (0, 0)), ((4, 4), (1, 0)), ((6, 2), (1, 1)), ((5, 3), (1, 2))]:
        sig, idx = radial.Signature(*pq), radial.SectorIndex(*lk)
        _, kspec = radial.kernel_gspec(sig, idx)
        for t in (0.5, 1.0, 3.0):
            p = {"p": pq[0], "q": pq[1], "l": lk[0], "k": lk[1], "t": t}
            rows.add("gfun.kernel.ode", p, gfun.g_ode_residual(t * t, kspec), 1e-5)
            rows.note("gfun.kernel.ode-without-x-term", p, gfun.g_ode_residual(t * t, kspec, x_term=False), 1e-5)
    return rows


def suite_distrib(cfg: SuiteConfig):
    rows = _Rows("distrib-pairings", cfg)
    rng = np.random.default_rng(cfg.seed)
    phis = [distrib.random_test_fn(rng) for _ in range(5)]
    for kind in ("PsiPlus", "Psi"):
        for m in range(4):
            d = distrib.bessel_dist(m, kind)
            worst = max(abs(distrib.bessel_dist_pair(d, f) - distrib.mb_pairing(m, kind, f)) for f in phis)
            rows.add(f"distrib.pairing.{kind.lower()}", {"m": m, "seed": cfg.seed}, worst, 1e-6)
    for m in range(1, 5):
        d = distrib.bessel_dist(m, "PsiPlus")
        ok = all(c == -Fraction((-1) ** (k - 1), 2 ** k * math.factorial(m - k))
                 for (j, c), k in zip(d.singular.delta_coeffs, range(1, m + 1)))
        rows.exact("distrib.singular.delta", {"m": m}, ok)
        d = distrib.bessel_dist(m, "Psi")
        ok = all(pw == k and c == -Fraction(math.factorial(k - 1), 2 ** k * math.factorial(m - k))
                 for (pw, c), k in zip(d.singular.pv_coeffs, range(1, m + 1)))
        rows.exact("distrib.singular.pv", {"m": m}, ok)
    for kind, m, t in [("PhiPlus", 2, 1.7), ("PsiPlus", 2, 1.7), ("Psi", 1, -2.0), ("Psi", 3, 1.7)]:
        rows.add("distrib.ode.second-order", {"kind": kind, "m": m, "t": t},
                 abs(distrib.dist_ode_residual(distrib.bessel_dist(m, kind), t)), 1e-6)
    for m, t in [(1, 0.5), (2, 1.7), (3, -0.8)]:
        d = distrib.bessel_dist(m, "Phi")
        rows.add("distrib.ode.third-order", {"m": m, "t": t}, abs(distrib.dist_ode_residual(d, t)), 1e-5)
        rows.note("distrib.ode.third-order-2m", {"m": m, "t": t},
                  abs(distrib.dist_ode_residual(d, t, theta_coeff=2 * m)), 1e-5)
    for phi in phis[:2]:
        for lam in (0.3, -1.5, -2.7 + 0.8j):
            rows.add("distrib.riesz.closed-form", {"lam": lam},
                     abs(distrib.riesz_pair(lam, 1, phi) - complex(phi.mellin(lam, 1))), 1e-9)
    return rows


def suite_weyl(cfg: SuiteConfig):
    rows = _Rows("weyl-exact", cfg)
    F = Fraction
    for n1, n2 in [(1, 1), (2, 1), (2, 2), (3, 3)]:
        s = weyl.SignatureVec.from_counts(n1, n2)
        n = s.n
        rows.exact("weyl.sum-of-squares", {"n": n}, weyl.check_sum_squares(s).is_zero())
        for b in (F(0), F(1), F(-1), F(3, 2)):
            ok = all(weyl.commutator(weyl.build_pjb(i, b, s), weyl.build_pjb(j, b, s)).is_zero()
                     for i in range(1, n + 1) for j in range(i + 1, n + 1))
            rows.exact("weyl.commuting", {"n": n, "b": b}, ok)
        for lam in (1, 2, 3):
            for b in (F(0), F(1)):
                ok = weyl.key_identity_operator(1, b, lam, s).is_zero()
                rows.exact("weyl.key-identity", {"n": n, "j": 1, "b": b, "lam": lam}, ok)
        rep = weyl.check_bracket_px(1, 1, s)
        rows.exact("weyl.bracket.diagonal", {"n": n}, "2X" in rep.holds)
        factored = (rep.bracket + 2 * (weyl.euler(n) + (n - 2))).is_zero()
        if n == 2:
            rows.exact("weyl.bracket.diagonal-factored", {"n": n}, factored)
        else:
            rows.note("weyl.bracket.diagonal-factored", {"n": n}, 0.0 if factored else 1.0, 0.0)
        if n > 1:
            rep = weyl.check_bracket_px(1, n, s)
            rows.exact("weyl.bracket.off-diagonal", {"n": n}, rep.holds == ("2X",))
    return rows


def suite_harmonics(cfg: SuiteConfig):
    rows = _Rows("harmonics-spectra", cfg)
    one = lambda x, y: 1.0  # noqa: E731
    for p, q in [(3, 3), (4, 4)]:
        for lam in (0.5, 1.0, 2.3):
            worst = 0.0
            for l in range(3):
                for k in range(3):
                    for s in (1, -1):
                        A = harmonics.alpha_lk(lambda x, y: one(x, y) / math.gamma(lam + 1), l, k, p, q,
                                               edge=(lam, s))
                        B = harmonics.riesz_spectrum(lam, s, l, k, p, q)
                        worst = max(worst, abs(A - B) / max(1.0, abs(B)))
            rows.add("harmonics.riesz.spectrum", {"p": p, "q": q, "lam": lam}, worst, 1e-7)
    for p, q, lam, l, k in [(4, 4, 0.7, 1, 2), (3, 3, 0.5, 1, 1), (5, 5, -0.3, 2, 1)]:
        h1 = harmonics.hlambda_spectrum(lam, l, k, p, q)
        h2 = harmonics.hlambda_spectrum(lam, l, k, p, q, form=2)
        rows.add("harmonics.hlambda.two-forms", {"p": p, "q": q, "lam": lam, "l": l, "k": k},
                 _rel(h1, h2), 1e-12)
    rows.add("harmonics.hlambda.quadrature", "p=4;q=4;lam=0.5;l=0;k=0",
             _rel(harmonics.alpha_lk_hlambda(0.5, 0, 0, 4, 4), harmonics.hlambda_spectrum(0.5, 0, 0, 4, 4)), 1e-7)
    for mu, nu in [(0.5, 0.5), (1.5, 0.5)]:
        for th, ph in [(0.3, 0.5), (1.0, 0.2), (0.7, 1.1)]:
            rows.add("harmonics.hankel-trig", {"mu": mu, "nu": nu, "theta": th, "phi": ph},
                     _rel(harmonics.hankel_trig_integral(mu, nu, th, ph),
                          harmonics.hankel_trig_closed(mu, nu, th, ph)), 1e-7)
    rows.add("harmonics.fractional-integral", "lam=1.3;mu=nu=0.5;l=k=1",
             _rel(harmonics.fractional_integral_2d_quad(1.3, .5, .5, 1, 1),
                  harmonics.fractional_integral_2d(1.3, .5, .5, 1, 1)), 1e-7)
    return rows


def suite_radial(cfg: SuiteConfig):
    rows = _Rows("radial-unitary", cfg)
    grid = cfg.grid()
    wide = radial.RadialGrid(-30.0, 7.0, 8192)
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    for pq in cfg.signatures:
        sig = radial.Signature(*pq)
        for idx in _sectors(sig, cfg.lmax, cfg.kmax):
            p = {"p": sig.p, "q": sig.q, "l": idx.l, "k": idx.k}
            f = radial.random_smooth_fn(grid, sig, rng)
            Tf = radial.t_lk_multiplier(f, idx)
            TTf = radial.t_lk_multiplier(Tf, idx, edge_tol=None)
            n = f.norm()
            rows.add("radial.unitarity", p, abs(Tf.norm() - n) / n, 1e-4)
            rows.add("radial.involution", p, (TTf - f).norm() / n, 1e-4)
            rows.add("radial.multiplier-direct", p, (Tf - radial.t_lk_direct(f, idx)).norm() / n, 1e-5)
            g = radial.RadialFn.from_callable(wide, sig, radial.f_lk(sig, idx))
            ev = radial.eigenvalue(sig, idx)
            rows.add("radial.eigenvector", p,
                     (radial.t_lk_multiplier(g, idx) - g.scaled(ev)).norm() / g.norm(), 1e-5)
            rows.add("radial.norm-closed-form", p,
                     _rel(g.norm() ** 2, radial.f_lk_norm_sq(sig, idx)), 1e-9)
            zeta = np.linspace(-50, 50, 1000)
            rows.add("radial.multiplier-unimodular", p,
                     np.abs(np.abs(radial.psi_multiplier(sig, idx, zeta)) - 1).max(), 1e-12)
    rows.add("radial.runtime", "seconds", time.perf_counter() - t0, 600.0)
    return rows


def suite_cone(cfg: SuiteConfig):
    rows = _Rows("cone-consistency", cfg)
    grid = cfg.grid()
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    sectors = [(0, 0), (1, 0), (1, 1)]
    for pq in cfg.signatures:
        sig = radial.Signature(*pq)
        for l, k in sectors:
            if l > cfg.lmax or k > cfg.kmax:
                continue
            idx = radial.SectorIndex(l, k)
            u = cone.ConeFunctionStructured.single(sig, idx, radial.random_smooth_fn(grid, sig, rng))
            Fu = cone.inversion_fc(u)
            worst = 0.0
            for _ in range(cfg.cone_points):
                xi = cone.ConePoint.random(sig, rng)
                a = cone.evaluate(Fu, xi)
                b = cone.fc_via_radon(u, xi)
                worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
            rows.add("cone.radon-vs-harmonic", {"p": sig.p, "q": sig.q, "l": l, "k": k,
                                                "points": cfg.cone_points}, worst, 1e-3)
        secs = tuple(cone.Sector(radial.SectorIndex(l, k), radial.random_smooth_fn(grid, sig, rng),
                                 np.eye(sig.p - 1)[0], np.eye(sig.q - 1)[0]) for l, k in sectors)
        u = cone.ConeFunctionStructured(sig, secs)
        nu = cone.cone_norm(u)
        p = {"p": sig.p, "q": sig.q}

        def diff(w, z):
            return math.sqrt(sum((a.radial - b.radial).norm() ** 2
                                 for a, b in zip(w.sectors, z.sectors))) / nu

        rows.add("cone.unitarity", p, abs(cone.cone_norm(cone.inversion_fc(u)) - nu) / nu, 1e-4)
        rows.add("cone.group.inversion-squared", p,
                 diff(cone.group_word_apply([cone.Inversion(), cone.Inversion()], u), u), 1e-4)
        rows.add("cone.group.inversion-dilation", dict(p, t=0.3),
                 diff(cone.group_word_apply([cone.Inversion(), cone.Dilation(0.3), cone.Inversion()], u),
                      cone.group_word_apply([cone.Dilation(-0.3)], u)), 1e-4)
        rows.add("cone.parseval", p, abs(cone.cone_norm(cone.synthesize(u)) - nu) / nu, 1e-6)
        rows.add("cone.kernel.ode", dict(p, t=1.3), cone.kernel_ode_residual(sig, 1.3), 1e-6)
    s44 = radial.Signature(4, 4)
    for v0, vl in [(0.3, 0.5), (0.9, -0.2), (-0.1, 0.6)]:
        rows.add("cone.hankel-product", {"v0": v0, "vlast": vl},
                 _rel(cone.hankel_product_integral(s44, radial.SectorIndex(1, 0), v0, vl),
                      cone.hankel_product_closed(s44, radial.SectorIndex(1, 0), v0, vl)), 1e-7)
    rows.add("cone.runtime", "seconds<300", time.perf_counter() - t0, 300.0)
    return rows


SUITES = {
    "specfun-identities": suite_specfun,
    "gfun-reductions": suite_gfun,
    "distrib-pairings": suite_distrib,
    "weyl-exact": suite_weyl,
    "harmonics-spectra": suite_harmonics,
    "radial-unitary": suite_radial,
    "cone-consistency": suite_cone,
}


def run_suites(cfg: SuiteConfig) -> list:
    """Run the selected suites (all by default); individual failures become rows."""
    rows = []
    for name in cfg.suites or tuple(SUITES):
        try:
            rows.extend(SUITES[name](cfg))
        except Exception as exc:  # recorded, not thrown
            rows.append(CheckRow(name, f"{name}.error", type(exc).__name__ + ": " + str(exc),
                                 math.inf, 0.0, FAIL))
    return rows
