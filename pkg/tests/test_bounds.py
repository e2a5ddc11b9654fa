import json
import math

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from ckbound.bounds import (
    BOUND_REPORT_SCHEMA,
    cap_M,
    coefficient_product,
    compute_bound,
    find_minimal_m,
    first_nonvacuous_sum,
    real_ratio_series,
    lower_bound_window,
    order_budget,
    product_tree,
    verify_cap,
    verify_coefficient_growth,
    verify_local_doubling,
    verify_real_ratio_bound,
    verify_squared_global_bound,
    verify_lower_bound_window,
    verify_squared_growth,
    verify_stirling,
)
from ckbound.errors import BudgetExceeded, InvalidParams, MissingBadPrimeData, NotFoundBelowCap
from ckbound.hilbert import CurveData, global_series, local_series
from ckbound.reports import decimal_digits, unlimited_int_digits


def test_minimal_m_examples():
    assert find_minimal_m(CurveData(2, 0, d_closed=0)) <= 16
    assert find_minimal_m(CurveData(1, 1, d_closed=1)) <= 16
    # frozen scan results
    assert find_minimal_m(CurveData(1, 1, r=2, s=2)) == 17
    assert find_minimal_m(CurveData(0, 3, s=3, rho=0)) == 18
    assert find_minimal_m(CurveData(1, 1, r=1, s=3)) == 10


def test_minimal_m_is_a_first_crossing():
    c = CurveData(1, 1, r=2, s=2)
    m = find_minimal_m(c)
    a = global_series(c, m).partial_sums()
    b = local_series(c, m).partial_sums()
    assert a[m] < b[m]
    assert all(a[i] >= b[i] for i in range(m))


def test_minimal_m_errors():
    c = CurveData(1, 1, r=2, s=2)
    with pytest.raises(NotFoundBelowCap):
        find_minimal_m(c, cap=10)
    with pytest.raises(BudgetExceeded):
        find_minimal_m(c, cap=64, budget=8)


def test_order_budget_env(monkeypatch):
    monkeypatch.setenv("CKBOUND_BUDGET", "77")
    assert order_budget() == 77
    assert order_budget(5) == 5
    monkeypatch.delenv("CKBOUND_BUDGET")
    assert order_budget() == 4096
    with pytest.raises(InvalidParams):
        order_budget(0)


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (2, 0), (3, 4)])
def test_local_doubling(g, n):
    assert verify_local_doubling(g, n, 128).holds


@pytest.mark.parametrize("g,n,n1", [(1, 1, 1), (0, 4, 0), (2, 0, 0), (0, 3, 1)])
def test_real_ratio_bound(g, n, n1):
    assert verify_real_ratio_bound(g, n, n1, 128).holds


def test_flipped_sign_variant_fails_where_recorded():
    assert not verify_real_ratio_bound(0, 3, 3, 64, flip_sign=True).holds
    assert not verify_real_ratio_bound(0, 4, 4, 64, flip_sign=True).holds
    assert verify_real_ratio_bound(2, 0, 0, 64, flip_sign=True).holds


def test_real_ratio_series_constant_term():
    assert real_ratio_series(1, 1, 1, 10)[0] == 1


@pytest.mark.parametrize("r,s", [(0, 0), (1, 2)])
def test_squared_global_bound(r, s):
    rep = verify_squared_global_bound(CurveData(1, 1, r=r, s=s), 128)
    assert rep.holds


def test_squared_bound_flags_s_bar_variants():
    c = CurveData(1, 3, r=0, s=2, n1=3)
    assert (c.s_bar, c.s_bar_no_boundary) == (0, 2)
    assert verify_squared_global_bound(c, 64).detail.get("s_bar_differs")


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (2, 0), (3, 2)])
def test_growth_inequalities(g, n):
    assert verify_squared_growth(g, n, 128).holds
    assert verify_coefficient_growth(g, n, 256).holds


def test_cap_report():
    rep = verify_cap(CurveData(2, 0, r=1, s=1))
    assert rep.holds and rep.detail["m"] <= rep.detail["M"] == 4 ** (1 + 1 + 2)


def test_stirling_report_fails_for_small_j():
    rep = verify_stirling(64)
    assert not rep.holds
    assert rep.detail["failing_j"] == [1, 2, 3, 4, 5]


def test_lower_bound_windows():
    assert lower_bound_window(1, 0) == (20, 0)
    assert lower_bound_window(2, 4)[1] == 2
    assert first_nonvacuous_sum() == 11
    assert verify_lower_bound_window(1, 0, 64).detail["vacuous"]
    rep = verify_lower_bound_window(6, 5, 256)
    assert rep.holds and rep.detail["window"] == [20, 26]
    with pytest.raises(InvalidParams):
        verify_lower_bound_window(0, 0, 64)


def test_product_tree():
    assert product_tree([]) == 1
    assert product_tree(range(1, 21)) == math.factorial(20)
    assert type(product_tree([3, 5])) is int


def test_genus_two_bound_example():
    c = CurveData(2, 0, r=0, s=0, p=5, points_mod_p=8, bad_primes=())
    rep = compute_bound(c, "simplified")
    f = rep.factors
    assert rep.M_cap == 16 and rep.m_used <= 16
    assert f["weight_factor"] == 6 ** 16
    assert f["simplified_factor"] == 4 ** 120 and f["simplified_exponent"] == 120
    assert rep.projective_shape["M_matches"] and rep.projective_shape["simplified_exponent_le"]
    # ceil(kappa_5 * 8 * 6^16 * 4^120)
    P = 8 * 6 ** 16 * 4 ** 120
    mp.prec = 800
    assert rep.bound_exact == int(mp.ceil((1 + 4 / (3 * mp.log(5))) * P))
    mp.prec = 53


def test_exact_not_above_simplified():
    c = CurveData(2, 1, r=1, s=2, p=3, points_mod_p=4,
                  bad_primes=({"ell": 5, "n_ell": 3, "in_S": True},))
    exact = compute_bound(c, "exact")
    simple = compute_bound(c, "simplified")
    assert exact.exact_le_simplified
    assert exact.bound_exact <= simple.bound_exact
    # one bad prime in S plus one good prime in S
    assert exact.factors["prod_n_ell_plus_n_in_S"] == (3 + 1) * (1 + 1)


def test_bound_report_json_schema():
    c = CurveData(1, 1, r=1, s=0, p=2, points_mod_p=3, bad_primes=({"ell": 3, "n_ell": 2},))
    with unlimited_int_digits():
        data = json.loads(json.dumps(compute_bound(c).to_json()))
    jsonschema.validate(data, BOUND_REPORT_SCHEMA)


def test_digit_count_matches_log10():
    c = CurveData(2, 0, r=3, p=5, points_mod_p=8, bad_primes=())
    rep = compute_bound(c, "exact")
    assert rep.M_cap == 1024
    assert rep.digits > 10 ** 5
    assert abs(rep.digits - (math.floor(float(rep.bound_log10)) + 1)) <= 1


def test_missing_bad_prime_data():
    with pytest.raises(MissingBadPrimeData):
        compute_bound(CurveData(2, 0, p=5, points_mod_p=8))


def test_simplification_needs_M_at_least_three():
    # c_0 + 1 = 2 exceeds (2g+n)^0; the slack only accumulates from M = 3 on
    c = CurveData(2, 0)
    assert coefficient_product(c, 1) == 2 > 1
    assert coefficient_product(c, 2) == 2 * 3 > 4 ** 1
    assert coefficient_product(c, 3) <= 4 ** 3


@given(st.integers(0, 3), st.integers(0, 4), st.integers(3, 60))
def test_coefficient_product_below_simplified(g, n, M):
    if 2 * g + n <= 2:
        return
    c = CurveData(g, n)
    assert coefficient_product(c, M) <= (2 * g + n) ** ((M * M - M) // 2)


@given(st.integers(0, 10**50))
def test_decimal_digits(n):
    assert decimal_digits(n) == len(str(n))
