from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conefourier import weyl as w
from conefourier.errors import ArityMismatch, IndexOutOfRange

S22 = w.SignatureVec.from_counts(2, 2)


def test_partial_of_square():
    x1 = w.variable(2, 1)
    assert w.apply(w.partial(2, 1), x1 * x1) == 2 * x1


@settings(max_examples=40)
@given(st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_euler_homogeneity(exps):
    m = w.MultiPoly.monomial(exps, Fraction(3, 7))
    assert w.apply(w.euler(3), m) == sum(exps) * m


@pytest.mark.parametrize("n1,n2", [(1, 1), (2, 1), (2, 2), (3, 3)])
def test_box_of_quadratic_form(n1, n2):
    sig = w.SignatureVec.from_counts(n1, n2)
    assert w.apply(w.box(sig), w.quadratic_form(sig)) == 2 * sig.n


def test_pjb_kills_constants():
    for j in range(1, 5):
        for b in (Fraction(0), Fraction(1), Fraction(-3, 2)):
            assert w.apply(w.build_pjb(j, b, S22), w.MultiPoly.const(4)).is_zero()


def test_pjb_n2_on_x1():
    sig = w.SignatureVec.from_counts(1, 1)
    assert w.apply(w.build_pjb(1, 1, sig), w.variable(2, 1)).is_zero()


def test_pjb_at_one_matches_definition():
    n = 4
    for j in range(1, n + 1):
        e = S22.eps[j - 1]
        ref = e * w.mult(w.variable(n, j)) * w.box(S22) - (2 * w.euler(n) + (n - 2)) * w.partial(n, j)
        assert (w.build_pjb(j, 1, S22) - ref).is_zero()


def test_commutator_relations():
    n = 4
    for j in range(1, n + 1):
        assert w.commutator(w.euler(n), w.partial(n, j)) == -w.partial(n, j)
        ref = 2 * S22.eps[j - 1] * w.partial(n, j)
        assert w.commutator(w.box(S22), w.mult(w.variable(n, j))) == ref


@pytest.mark.parametrize("b", [Fraction(0), Fraction(1), Fraction(-1), Fraction(3, 2)])
def test_pjb_commute(b):
    for i in range(1, 5):
        for j in range(i + 1, 5):
            assert w.commutator(w.build_pjb(i, b, S22), w.build_pjb(j, b, S22)).is_zero()


def test_sum_of_squares_n2():
    assert w.check_sum_squares(w.SignatureVec.from_counts(1, 1)).is_zero()


def test_sum_of_squares_on_monomials_n4():
    op = w.check_sum_squares(S22)
    assert all(w.apply(op, m).is_zero() for m in w.monomials(4, 6))


def test_sum_of_squares_n6_spot_monomials():
    sig = w.SignatureVec.from_counts(3, 3)
    op = w.check_sum_squares(sig)
    for exps in [(2, 0, 1, 0, 0, 3), (1, 1, 1, 1, 1, 1), (0, 4, 0, 0, 2, 0)]:
        assert w.apply(op, w.MultiPoly.monomial(exps)).is_zero()


def test_key_identity_examples():
    one = w.MultiPoly.const(4)
    assert w.check_key_identity(1, 1, 1, one, S22).is_zero()
    u = w.variable(4, 1) * w.variable(4, 2)
    assert w.check_key_identity(2, 0, 2, u, S22).is_zero()


def test_box_of_product_with_quadratic_form():
    n = 4
    u = w.variable(n, 1) ** 3
    Q = w.quadratic_form(S22)
    lhs = w.apply(w.box(S22), u * Q)
    rhs = w.apply(w.box(S22), u) * Q + w.apply(4 * w.euler(n) + 2 * n, u)
    assert lhs == rhs


@pytest.mark.parametrize("n1,n2", [(2, 1), (2, 2), (3, 3)])
def test_diagonal_bracket(n1, n2):
    sig = w.SignatureVec.from_counts(n1, n2)
    n = sig.n
    rep = w.check_bracket_px(1, 1, sig)
    assert (rep.bracket + (2 * w.euler(n) + (n - 2))).is_zero()


def test_diagonal_bracket_factored_form_only_at_n2():
    for n1, n2 in [(1, 1), (2, 1), (2, 2)]:
        sig = w.SignatureVec.from_counts(n1, n2)
        rep = w.check_bracket_px(1, 1, sig)
        factored = (rep.bracket + 2 * (w.euler(sig.n) + (sig.n - 2))).is_zero()
        assert factored == (sig.n == 2)


def test_off_diagonal_bracket_is_twice_x():
    rep = w.check_bracket_px(1, 3, S22)
    assert rep.holds == ("2X",)


def test_bracket_all_plus_n2():
    sig = w.SignatureVec((1, 1))
    rep = w.check_bracket_px(1, 2, sig)
    x1, x2 = w.variable(2, 1), w.variable(2, 2)
    # direct expansion on a test polynomial
    u = x1 ** 2 * x2 + x2 ** 3
    P = w.build_pjb(1, 1, sig)
    direct = w.apply(P, x2 * u) - x2 * w.apply(P, u)
    assert w.apply(rep.bracket, u) == direct


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        w.variable(2, 1) + w.variable(3, 1)


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        w.variable(3, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.fractions(min_value=-3, max_value=3, max_denominator=4), st.integers(1, 3),
       st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_key_identity_property(j, b, lam, exps):
    u = w.MultiPoly.monomial(exps)
    assert w.check_key_identity(j, b, lam, u, S22).is_zero()
