from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckbound.errors import ConstantTermNotOne, OrderTooSmall, ZeroConstantTerm, ZeroDenominatorConstant
from ckbound.series import (
    QSeries,
    RationalFunction,
    add,
    binomial_series,
    compare_coefficientwise,
    exp,
    expand,
    invert,
    log,
    mul,
    rational_power,
    substitute_power,
)

from conftest import any_series, unit_series

F = Fraction
geo = lambda order: QSeries.from_coeffs([1] * (order + 1), order)


def test_add_cancellation_and_truncation():
    a = QSeries.from_coeffs([1, 1], 1)
    b = QSeries.from_coeffs([1, -1], 1)
    assert add(a, b) == QSeries.from_coeffs([2, 0], 1)
    assert a + QSeries.zero(1) == a
    longer = QSeries.from_coeffs([1, 2, 3], 2)
    assert add(longer, a) == QSeries.from_coeffs([2, 3], 1)


def test_mul_geometric_and_identity():
    one_minus_t = QSeries.from_coeffs([1, -1], 10)
    assert mul(one_minus_t, geo(10)) == QSeries.one(10)
    a = QSeries.from_coeffs([3, F(1, 2), -2], 2)
    assert a * QSeries.one(2) == a


def test_mul_against_long_division():
    a = QSeries.from_coeffs([1, -2], 2)
    b = expand(RationalFunction((1,), (1, -4, 1)), 2)
    assert list(mul(a, b)) == [1, 2, 7]


def test_invert():
    assert invert(QSeries.from_coeffs([1, -1], 6)) == geo(6)
    assert list(invert(QSeries.from_coeffs([1, -4, 1], 2))) == [1, 4, 15]
    with pytest.raises(ZeroConstantTerm):
        invert(QSeries.from_coeffs([0, 1], 3))


def test_log_and_exp_closed_forms():
    assert log(QSeries.one(5)) == QSeries.zero(5)
    assert list(log(QSeries.from_coeffs([1, -1], 5))) == [0, -1, F(-1, 2), F(-1, 3), F(-1, 4), F(-1, 5)]
    assert exp(QSeries.zero(4)) == QSeries.one(4)
    assert list(exp(QSeries.monomial(1, 5))) == [1, 1, F(1, 2), F(1, 6), F(1, 24), F(1, 120)]
    with pytest.raises(ConstantTermNotOne):
        log(QSeries.from_coeffs([2, 1], 3))


def test_rational_power_edges():
    a = QSeries.from_coeffs([1, 3, -1, 2], 3)
    assert rational_power(a, 0) == QSeries.one(3)
    assert rational_power(QSeries.from_coeffs([1, -1], 7), -1) == geo(7)
    # sqrt(1 + 4t) = 1 + 2t - 2t^2 + 4t^3 - ...
    assert list(rational_power(QSeries.from_coeffs([1, 4], 3), F(1, 2))) == [1, 2, -2, 4]


def test_substitute_power():
    assert substitute_power(QSeries.from_coeffs([1, 1], 2), 2) == QSeries.from_coeffs([1, 0, 1], 2)
    a = QSeries.from_coeffs([1, 2, 3, 4], 3)
    assert substitute_power(a, 1) == a
    assert list(substitute_power(geo(9), 3)) == [1, 0, 0, 1, 0, 0, 1, 0, 0, 1]


def test_expand_recurrence_examples():
    assert list(expand(RationalFunction((1,), (1, -1)), 3)) == [1, 1, 1, 1]
    assert list(expand(RationalFunction((1, -2), (1, -4, 1)), 2)) == [1, 2, 7]
    assert list(expand(RationalFunction((1, -1), (1, -2)), 4)) == [1, 1, 2, 4, 8]
    with pytest.raises(ZeroDenominatorConstant):
        RationalFunction((1,), (0, 1))


@pytest.mark.parametrize("k,e", [(1, 3), (2, -2), (3, 1), (1, -5), (4, 0)])
def test_binomial_series_matches_power(k, e):
    base = substitute_power(QSeries.from_coeffs([1, -1], 20), k)
    assert binomial_series(k, e, 20) == base ** (-e)


def test_compare_coefficientwise():
    a = QSeries.from_coeffs([1, 1], 1)
    b = QSeries.from_coeffs([1, 2], 1)
    assert compare_coefficientwise(a, b, 1).holds
    rep = compare_coefficientwise(b, a, 1)
    assert not rep.holds and rep.first_violation == 1
    assert (rep.lhs_value, rep.rhs_value) == (2, 1)
    with pytest.raises(OrderTooSmall):
        compare_coefficientwise(a, b, 5)


def test_truncate_cannot_extend():
    with pytest.raises(OrderTooSmall):
        QSeries.one(2).truncate(3)


def test_json_roundtrip():
    a = QSeries.from_coeffs([1, F(-3, 7), 0, 10**40], 3)
    assert QSeries.from_json(a.to_json()) == a


@given(unit_series())
def test_exp_log_roundtrip(a):
    assert exp(log(a)) == a


@given(unit_series())
def test_invert_involution(a):
    assert invert(invert(a)) == a
    assert a * invert(a) == QSeries.one(a.order)


@given(unit_series(max_order=10))
def test_sqrt_squared(a):
    assert rational_power(a, F(1, 2)) ** 2 == a


@given(unit_series(max_order=8), st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_power_laws(a, p, q):
    assert rational_power(a, p) * rational_power(a, q) == rational_power(a, p + q)


@given(any_series(), any_series())
def test_mul_commutes(a, b):
    assert mul(a, b) == mul(b, a)


@given(any_series(), st.integers(1, 4))
def test_substitution_is_multiplicative(a, k):
    b = a * a
    assert substitute_power(b, k) == substitute_power(a, k) * substitute_power(a, k)


@given(unit_series(max_order=30))
def test_unit_series_order_preserved(a):
    assert log(a).order == a.order == exp(log(a)).order
