from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckbound.errors import InvalidN1, InvalidParams, NonIntegerExponent, NotHyperbolic, NotPrime
from ckbound.hilbert import (
    CurveData,
    ExponentVector,
    G_series,
    curve_grid,
    extract_exponents,
    global_bound_series,
    global_series,
    hs_R,
    hs_R_factor,
    is_selmer_consistent,
    local_series,
    log_G,
    mobius_table,
    motivic_dim_series,
    product_form,
    lambda_dims,
    selmer_v2_dim,
    sgn_motivic_series,
    valid_n1,
    verify_functional_equation,
    verify_global_majorant,
    verify_global_exponents,
    verify_product_factors,
)
from ckbound.series import QSeries, compare_coefficientwise, invert, substitute_power

GN = [(g, n) for g in range(4) for n in range(5) if 2 * g + n > 2]


def recurrence(g, n, order):
    c = [1, g]
    while len(c) <= order:
        c.append(2 * g * c[-1] + (n - 1) * c[-2])
    return c[: order + 1]


@pytest.mark.parametrize("g,n", GN)
def test_local_series_matches_recurrence(g, n):
    assert local_series(CurveData(g, n), 60).integers() == recurrence(g, n, 60)


def test_local_series_examples():
    assert local_series(CurveData(1, 1), 4).integers() == [1, 1, 2, 4, 8]
    assert local_series(CurveData(2, 0), 3).integers() == [1, 2, 7, 26]
    assert local_series(CurveData(0, 3), 4).integers() == [1, 0, 2, 0, 4]


def test_motivic_examples():
    assert motivic_dim_series(CurveData(2, 0), 3).integers() == [1, 4, 15, 56]
    assert motivic_dim_series(CurveData(0, 3), 2).integers() == [1, 0, 2]


@pytest.mark.parametrize("g,n", GN)
def test_local_is_motivic_times_one_minus_gt(g, n):
    c = CurveData(g, n)
    assert local_series(c, 40) == QSeries.from_coeffs([1, -g], 40) * motivic_dim_series(c, 40)


@pytest.mark.parametrize("g,n", GN)
def test_motivic_exponents_match_lambda_formulas(g, n):
    ev = extract_exponents(motivic_dim_series(CurveData(g, n), 4))
    assert ev.as_dict() == lambda_dims(g, n)


def test_sgn_motivic_series():
    assert sgn_motivic_series(CurveData(0, 3, n1=1), 8) == QSeries.one(8)
    assert sgn_motivic_series(CurveData(0, 4, n1=0), 6).integers() == [1, 0, 1, 0, 1, 0, 1]


@pytest.mark.parametrize("g,n", GN)
def test_G_constant_term_and_log_nonnegative(g, n):
    for n1 in valid_n1(n):
        c = CurveData(g, n, n1=n1)
        assert G_series(c, 0) == QSeries.one(0)
        assert log_G(c, 64).is_nonnegative()


def test_log_G_first_coefficient_g0_n4():
    assert log_G(CurveData(0, 4, n1=0), 4)[1] >= 0


@pytest.mark.parametrize("g,n", GN)
def test_hs_R_basic_properties(g, n):
    for n1 in valid_n1(n):
        c = CurveData(g, n, n1=n1)
        h = hs_R(c, 48)
        assert h[0] == 1 and h.is_nonnegative()
        assert h * h == G_series(c, 48) * substitute_power(h, 2)
        ev = extract_exponents(h)
        assert all(e >= 0 for e in ev.values)


def test_functional_equation_report():
    assert verify_functional_equation(CurveData(1, 1, n1=1), 64).holds
    assert verify_product_factors(CurveData(2, 1, n1=1), 64).holds


@pytest.mark.parametrize("g,n", GN)
def test_global_bound_ratio_is_tail_product(g, n):
    for n1 in valid_n1(n):
        c = CurveData(g, n, n1=n1)
        tail = QSeries.one(64)
        for j in range(1, 7):
            tail = tail * hs_R_factor(c, j, 64)
        assert global_series(c, 64) * tail == global_bound_series(c, 64)


def test_global_cancellation_case():
    c = CurveData(2, 1, r=0, s=1, rho=1, d_closed=1, n1=1)
    assert c.t2_exponent == 0
    assert global_series(c, 40) == local_series(c, 40) * invert(hs_R(c, 40))


def test_global_constant_term_and_exponents():
    for c in curve_grid(range(4), range(5), (0, 1, 2), (0, 1, 2), all_d_closed=True):
        if not is_selmer_consistent(c):
            continue
        assert verify_global_exponents(c, 32).holds


def test_majorant_examples():
    c = CurveData(1, 1, r=1, s=2, rho=1, d_closed=1, n1=1)
    assert verify_global_majorant(c, 96).holds
    assert compare_coefficientwise(global_series(c, 96), global_bound_series(c, 96)).holds


def test_selmer_dimension_is_nonnegative_for_genus_two():
    c = CurveData(2, 0)
    assert extract_exponents(local_series(c, 2))[2] == 4
    assert extract_exponents(hs_R(c, 2))[2] == 2
    assert selmer_v2_dim(c) == 4 - 2 + 1 - 1 - 0
    for c in curve_grid(range(1, 4), range(5), (0, 1), (0, 1, 2)):
        assert is_selmer_consistent(c)


def test_extract_exponents_examples():
    geo = QSeries.from_coeffs([1] * 11, 10)
    assert extract_exponents(geo).values == (1,) + (0,) * 9
    ev = extract_exponents(invert(QSeries.from_coeffs([1, -4, 1], 6)))
    assert (ev[1], ev[2]) == (4, 5)
    with pytest.raises(NonIntegerExponent):
        extract_exponents(QSeries.from_coeffs([1, Fraction(1, 2)], 3))


def test_mobius_table():
    assert mobius_table(12)[1:] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


@given(st.lists(st.integers(-3, 5), min_size=1, max_size=40))
def test_exponent_roundtrip(exps):
    order = len(exps)
    assert extract_exponents(product_form(exps, order)) == ExponentVector(tuple(exps), order)


@given(st.dictionaries(st.integers(1, 30), st.integers(-2, 4), max_size=5))
def test_product_form_is_multiplicative(e):
    a = product_form(e, 30)
    b = product_form({k: 1 for k in e}, 30)
    both = product_form({k: e.get(k, 0) + 1 for k in e}, 30)
    assert a * b == both


class TestCurveValidation:
    def test_not_hyperbolic(self):
        with pytest.raises(NotHyperbolic):
            CurveData(0, 2)
        with pytest.raises(NotHyperbolic):
            CurveData(1, 0)

    def test_bad_n1(self):
        with pytest.raises(InvalidN1):
            CurveData(1, 3, n1=2)
        with pytest.raises(InvalidN1):
            CurveData(1, 2, n1=4)

    def test_rank_in_genus_zero(self):
        with pytest.raises(InvalidParams):
            CurveData(0, 3, r=1, rho=0)

    def test_rho_in_positive_genus(self):
        with pytest.raises(InvalidParams):
            CurveData(2, 0, rho=0)

    def test_d_closed_bounds(self):
        assert CurveData(0, 4, n1=0).d_closed == 2
        with pytest.raises(InvalidParams):
            CurveData(0, 4, n1=0, d_closed=3)
        with pytest.raises(InvalidParams):
            CurveData(1, 2, d_closed=0)

    def test_prime_checks(self):
        with pytest.raises(NotPrime):
            CurveData(2, 0, p=9)

    def test_json_roundtrip(self):
        c = CurveData(2, 3, r=1, s=2, rho=1, d_closed=2, n1=1, p=7, points_mod_p=9,
                      bad_primes=({"ell": 3, "n_ell": 2, "in_S": True},))
        assert CurveData.from_json(c.to_json()) == c


def test_curve_grid_shape():
    grid = list(curve_grid(range(4), range(5), (0, 1), (0,)))
    assert all(c.r == 0 for c in grid if c.g == 0)
    assert all(c.d_closed == c.n1 + c.n2 for c in grid)
    assert len({(c.g, c.n, c.n1, c.r) for c in grid}) == len(grid)
