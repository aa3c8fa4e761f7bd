"""Exact polynomials and polynomial-coefficient differential operators.

Coefficients are :class:`fractions.Fraction`; nothing in this module touches
floating point, so every identity check is an equality of canonical forms.
Coordinates are numbered ``1..n`` in the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping

from .errors import ArityMismatch, IndexOutOfRange

__all__ = [
    "MultiPoly",
    "SignatureVec",
    "DiffOp",
    "apply",
    "commutator",
    "variable",
    "partial",
    "mult",
    "euler",
    "box",
    "quadratic_form",
    "build_pjb",
    "build_xij",
    "check_sum_squares",
    "check_key_identity",
    "key_identity_operator",
    "check_bracket_px",
    "BracketReport",
    "monomials",
]


def _as_fraction(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError("floats are not accepted; use int or Fraction")
    return Fraction(c)


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class MultiPoly:
    """Polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero :class:`Fraction` coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        clean: dict[tuple, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = _as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def const(cls, nvars: int, c=1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "MultiPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    def _check(self, other: "MultiPoly"):
        if other.nvars != self.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.nvars, _as_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.const(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def deriv(self, i: int, times: int = 1) -> "MultiPoly":
        """Partial derivative in the 0-based variable ``i``."""
        out = {}
        for e, c in self.terms.items():
            if e[i] < times:
                continue
            f = 1
            for s in range(times):
                f *= e[i] - s
            e2 = e[:i] + (e[i] - times,) + e[i + 1:]
            out[e2] = c * f
        return MultiPoly(self.nvars, out)

    def deriv_multi(self, alpha: tuple) -> "MultiPoly":
        out = self
        for i, a in enumerate(alpha):
            if a:
                out = out.deriv(i, a)
        return out

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                t *= Fraction(x) ** k
            total += t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class SignatureVec:
    """Sign pattern ``(+1)^n1 (-1)^n2`` of the quadratic form."""

    eps: tuple

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        if not eps or any(e not in (1, -1) for e in eps):
            raise ValueError("eps must be a nonempty tuple of +-1")
        n1 = eps.count(1)
        if eps != (1,) * n1 + (-1,) * (len(eps) - n1):
            raise ValueError("eps must list all +1 entries before the -1 entries")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def from_counts(cls, n1: int, n2: int) -> "SignatureVec":
        return cls((1,) * n1 + (-1,) * n2)

    @property
    def n(self) -> int:
        return len(self.eps)


class DiffOp:
    """``sum_beta c_beta(x) d^beta`` with derivatives to the right.

    ``terms`` maps derivative multi-indices to nonzero :class:`MultiPoly`
    coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, MultiPoly] | None = None):
        self.nvars = nvars
        clean: dict[tuple, MultiPoly] = {}
        for beta, c in (terms or {}).items():
            beta = tuple(int(v) for v in beta)
            if len(beta) != nvars:
                raise ValueError("derivative index has the wrong length")
            if c.nvars != nvars:
                raise ArityMismatch(f"{c.nvars} vs {nvars} variables")
            clean[beta] = clean[beta] + c if beta in clean else c
        self.terms = {b: c for b, c in sorted(clean.items()) if not c.is_zero()}

    @classmethod
    def zero(cls, nvars: int) -> "DiffOp":
        return cls(nvars)

    @classmethod
    def identity(cls, nvars: int) -> "DiffOp":
        return cls(nvars, {(0,) * nvars: MultiPoly.const(nvars)})

    def _coerce(self, other) -> "DiffOp":
        if isinstance(other, DiffOp):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, MultiPoly):
            return mult(other)
        return DiffOp(self.nvars, {(0,) * self.nvars: MultiPoly.const(self.nvars, _as_fraction(other))})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out[b] + c if b in out else c
        return DiffOp(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp(self.nvars, {b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        """Composition ``self o other`` (scalars and polynomials act by multiplication)."""
        other = self._coerce(other)
        out: dict[tuple, MultiPoly] = {}
        for alpha, a in self.terms.items():
            for beta, b in other.terms.items():
                # d^alpha (b d^beta) = sum_gamma C(alpha, gamma) (d^(alpha-gamma) b) d^(gamma+beta)
                for gamma in product(*(range(k + 1) for k in alpha)):
                    coef = 1
                    for k, g in zip(alpha, gamma):
                        coef *= comb(k, g)
                    db = b.deriv_multi(tuple(k - g for k, g in zip(alpha, gamma)))
                    if db.is_zero():
                        continue
                    key = _add_exp(gamma, beta)
                    term = a * db * coef
                    out[key] = out[key] + term if key in out else term
        return DiffOp(self.nvars, out)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k: int):
        out = DiffOp.identity(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.terms.items():
            d = "".join(f"d{i + 1}^{k}" if k > 1 else f"d{i + 1}" for i, k in enumerate(b) if k)
            parts.append(f"({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# constructors


def _index(j: int, n: int) -> int:
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"coordinate index {j} outside 1..{n}")
    return j - 1


def variable(n: int, j: int) -> MultiPoly:
    """The coordinate ``x_j``."""
    i = _index(j, n)
    return MultiPoly(n, {tuple(1 if k == i else 0 for k in range(n)): 1})


def partial(n: int, j: int) -> DiffOp:
    """``d / dx_j``."""
    i = _index(j, n)
    return DiffOp(n, {tuple(1 if k == i else 0 for k in range(n)): MultiPoly.const(n)})


def mult(u: MultiPoly) -> DiffOp:
    """Multiplication by ``u`` as an operator."""
    return DiffOp(u.nvars, {(0,) * u.nvars: u})


def euler(n: int) -> DiffOp:
    """Euler operator ``E = sum_i x_i d_i``."""
    out = DiffOp.zero(n)
    for j in range(1, n + 1):
        out = out + mult(variable(n, j)) * partial(n, j)
    return out


def box(sig: SignatureVec) -> DiffOp:
    """Wave operator ``sum_j eps_j d_j^2``."""
    n = sig.n
    out = DiffOp.zero(n)
    for j, e in enumerate(sig.eps, start=1):
        out = out + e * partial(n, j) * partial(n, j)
    return out


def quadratic_form(sig: SignatureVec) -> MultiPoly:
    """``Q(x) = sum_j eps_j x_j^2``."""
    n = sig.n
    return sum((e * variable(n, j) ** 2 for j, e in enumerate(sig.eps, start=1)), MultiPoly(n))


def build_pjb(j: int, b, sig: SignatureVec) -> DiffOp:
    """``P_j(b) = eps_j x_j box - (2E + n - 2b) d_j``."""
    n = sig.n
    i = _index(j, n)
    b = _as_fraction(b)
    first = sig.eps[i] * mult(variable(n, j)) * box(sig)
    second = (2 * euler(n) + (n - 2 * b)) * partial(n, j)
    return first - second


def build_xij(i: int, j: int, sig: SignatureVec) -> DiffOp:
    """``X_ij = eps_i eps_j x_i d_j - x_j d_i``."""
    n = sig.n
    ii, jj = _index(i, n), _index(j, n)
    return (sig.eps[ii] * sig.eps[jj] * mult(variable(n, i)) * partial(n, j)
            - mult(variable(n, j)) * partial(n, i))


# ---------------------------------------------------------------------------
# operations and identity checks


def apply(op: DiffOp, u: MultiPoly) -> MultiPoly:
    """Exact action of ``op`` on ``u``."""
    if op.nvars != u.nvars:
        raise ArityMismatch(f"operator on {op.nvars} variables, polynomial in {u.nvars}")
    out = MultiPoly(u.nvars)
    for beta, c in op.terms.items():
        out = out + c * u.deriv_multi(beta)
    return out


def commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    """``AB - BA``."""
    if A.nvars != B.nvars:
        raise ArityMismatch(f"{A.nvars} vs {B.nvars} variables")
    return A * B - B * A


def monomials(n: int, max_degree: int):
    """All monic monomials in ``n`` variables of total degree ``<= max_degree``."""
    def rec(prefix, left, k):
        if k == n:
            yield MultiPoly.monomial(prefix)
            return
        for e in range(left + 1):
            yield from rec(prefix + (e,), left - e, k + 1)
    yield from rec((), max_degree, 0)


def check_sum_squares(sig: SignatureVec) -> DiffOp:
    """``sum_j eps_j P_j(1)^2 - Q box^2``; identically zero when the identity holds."""
    n = sig.n
    if n < 2:
        raise ValueError("need at least two variables")
    total = DiffOp.zero(n)
    for j, e in enumerate(sig.eps, start=1):
        P = build_pjb(j, 1, sig)
        total = total + e * (P * P)
    B = box(sig)
    return total - mult(quadratic_form(sig)) * B * B


def check_key_identity(j: int, b, lam: int, u: MultiPoly, sig: SignatureVec) -> MultiPoly:
    """``P_j(b)(u Q^lam) - [(P_j(b - 2 lam) u) Q^lam - 4 lam (lam - b) eps_j x_j u Q^(lam-1)]``."""
    if not (isinstance(lam, int) and lam >= 1):
        raise ValueError("lam must be a positive integer")
    n = sig.n
    b = _as_fraction(b)
    Q = quadratic_form(sig)
    i = _index(j, n)
    lhs = apply(build_pjb(j, b, sig), u * Q ** lam)
    rhs = (apply(build_pjb(j, b - 2 * lam, sig), u) * Q ** lam
           - 4 * lam * (lam - b) * sig.eps[i] * variable(n, j) * u * Q ** (lam - 1))
    return lhs - rhs


def key_identity_operator(j: int, b, lam: int, sig: SignatureVec) -> DiffOp:
    """Operator form of :func:`check_key_identity`.

    Returns ``P_j(b) Q^lam - Q^lam P_j(b - 2 lam) + 4 lam (lam - b) eps_j x_j Q^(lam-1)``
    with ``Q^k`` acting by multiplication; a zero result proves the identity
    for every polynomial ``u`` at once.
    """
    if not (isinstance(lam, int) and lam >= 1):
        raise ValueError("lam must be a positive integer")
    n = sig.n
    b = _as_fraction(b)
    Q = quadratic_form(sig)
    i = _index(j, n)
    return (build_pjb(j, b, sig) * mult(Q ** lam)
            - mult(Q ** lam) * build_pjb(j, b - 2 * lam, sig)
            + mult(4 * lam * (lam - b) * sig.eps[i] * variable(n, j) * Q ** (lam - 1)))


@dataclass(frozen=True)
class BracketReport:
    """Outcome of comparing ``[P_i, x_j]`` with two candidate closed forms.

    ``single`` is ``[P_i, x_j] - (X_ij - delta_ij (2E+n-2))`` and ``double``
    is ``[P_i, x_j] - (2 X_ij - delta_ij (2E+n-2))``; ``holds`` names the
    candidates whose residual vanishes.
    """

    bracket: DiffOp
    single: DiffOp
    double: DiffOp

    @property
    def holds(self) -> tuple:
        return tuple(name for name, r in (("X", self.single), ("2X", self.double)) if r.is_zero())


def check_bracket_px(i: int, j: int, sig: SignatureVec) -> BracketReport:
    """Compute ``[P_i(1), x_j]`` exactly and test both normalizations."""
    n = sig.n
    br = commutator(build_pjb(i, 1, sig), mult(variable(n, j)))
    diag = (2 * euler(n) + (n - 2)) if i == j else DiffOp.zero(n)
    X = build_xij(i, j, sig)
    return BracketReport(br, br - (X - diag), br - (2 * X - diag))
