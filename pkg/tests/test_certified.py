import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import iv, mp

from ckbound.certified import (
    exact_ceiling,
    exact_floor,
    kappa_p,
    lower_decimal,
    precision,
    sqrt_sum_check,
    stirling_holds,
    tau,
    upper_decimal,
    window_upper,
)
from ckbound.errors import NotPrime


def test_kappa_decimals():
    assert kappa_p(2).upper() == "4.885391"
    assert kappa_p(2).lower() == "4.885390"
    assert kappa_p(3).upper() == "2.820479"
    assert kappa_p(3).lower() == "2.820478"


def test_kappa_symbolic_forms():
    k = kappa_p(7)
    assert (k.rational_part, k.log_coeff) == (1, Fraction(6, 5))
    assert kappa_p(2).symbolic() == "2 + 2/log(2)"


def test_kappa_decreases_in_p():
    values = [float(kappa_p(p).upper()) for p in (5, 7, 11, 13)]
    assert values == sorted(values, reverse=True)


def test_kappa_large_p_tends_to_one():
    big = kappa_p(1_000_003)
    assert 1 < float(big.lower()) < 1 + 1.01 / math.log(1_000_003)


@pytest.mark.parametrize("p", [1, 4, 9, 91, -3])
def test_kappa_rejects_nonprime(p):
    with pytest.raises(NotPrime):
        kappa_p(p)


def test_ceil_times_against_high_precision():
    mp.prec = 400
    for p in (2, 3, 5, 101):
        k = kappa_p(p)
        for P in (1, 7, 10**6, 3**200):
            exact = mp.mpf(k.rational_part.numerator) / k.rational_part.denominator \
                + mp.mpf(k.log_coeff.numerator) / k.log_coeff.denominator / mp.log(p)
            assert k.ceil_times(P) == int(mp.ceil(exact * P))
    mp.prec = 53


def test_exact_floor_and_ceiling_of_pi():
    assert exact_floor(lambda: iv.pi) == 3
    assert exact_ceiling(lambda: iv.pi * 1000) == 3142


def test_tau_value():
    with precision(80):
        assert upper_decimal(tau(), 6) == "1.062500"
        assert lower_decimal(tau(), 6) == "1.062499"


def test_window_upper_examples():
    assert window_upper(1, 0) == 0
    assert window_upper(2, 4) == 2
    assert type(window_upper(3, 3)) is int
    # the window depends on r + s only
    assert [window_upper(k, 0) for k in range(9, 14)] == [10, 16, 26, 41, 64]
    assert window_upper(5, 6) == window_upper(11, 0)


def test_stirling_small_j_is_false():
    # C(2,1) = 2 < 4 / (e^(1/42) sqrt(pi))
    assert not stirling_holds(1)
    assert [j for j in range(1, 11) if not stirling_holds(j)] == [1, 2, 3, 4, 5]


def test_stirling_large_j_holds():
    assert all(stirling_holds(j) for j in range(6, 65))


def test_sqrt_sum_inequality():
    assert sqrt_sum_check(2000) is None


@given(st.integers(1, 10**30))
def test_ceil_times_bracket(P):
    k = kappa_p(3)
    c = k.ceil_times(P)
    lo = Fraction(k.lower(12)) * P
    hi = Fraction(k.upper(12)) * P
    assert c - 1 < hi and c >= lo
