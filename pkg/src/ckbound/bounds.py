"""
Minimal-weight search, the coefficientwise inequalities behind the cap
``M = 4^(r + s_bar + 2)``, and assembly of the explicit point-count bound.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from .certified import Kappa, kappa_p, log10_upper, stirling_holds, window_upper
from .errors import BudgetExceeded, InvalidParams, MissingBadPrimeData, NotFoundBelowCap
from .hilbert import CONJECTURAL, CurveData, global_series, local_series
from .reports import CheckReport, decimal_digits, jsonable
from .series import (
    QSeries,
    RationalFunction,
    binomial_series,
    compare_coefficientwise,
    expand,
    poly_mul,
)

DEFAULT_BUDGET = 4096


def order_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``$CKBOUND_BUDGET``, else 4096."""
    if budget is None:
        env = os.environ.get("CKBOUND_BUDGET")
        budget = int(env) if env else DEFAULT_BUDGET
    if budget < 1:
        raise InvalidParams("order budget must be >= 1")
    return budget


def cap_M(c: CurveData) -> int:
    return 4 ** (c.r + c.s_bar + 2)


def delta(g: int) -> int:
    return 1 if g >= 1 else 2


# ---------------------------------------------------------------------------
# minimal m

def first_crossing(glob: QSeries, loc: QSeries, start: int = 0) -> int | None:
    """Smallest ``m >= start`` with ``sum_{i<=m} glob_i < sum_{i<=m} loc_i``."""
    a, b = glob.partial_sums(), loc.partial_sums()
    order = min(a.order, b.order)
    return next((m for m in range(start, order + 1) if a[m] < b[m]), None)


def find_minimal_m(c: CurveData, cap: int | None = None, budget: int | None = None) -> int:
    """Smallest ``m <= cap`` with ``sum_{i<=m} c_i^glob < sum_{i<=m} c_i^loc``.

    ``cap`` defaults to ``4^(r + s_bar + 2)``.  Orders are doubled from 16 so
    the common case of a small ``m`` stays cheap.
    """
    cap = cap_M(c) if cap is None else cap
    if cap < 0:
        raise InvalidParams("cap must be >= 0")
    budget = order_budget(budget)
    limit = min(cap, budget)
    order, searched = min(16, limit), 0
    while True:
        m = first_crossing(global_series(c, order), local_series(c, order), searched)
        if m is not None:
            return m
        searched = order + 1
        if order >= limit:
            break
        order = min(2 * order, limit)
    if cap > budget:
        raise BudgetExceeded(f"no crossing up to the order budget {budget} (cap {cap})")
    raise NotFoundBelowCap(f"no m <= {cap} satisfies the partial-sum inequality")


# ---------------------------------------------------------------------------
# the elementary inequalities

def _params(**kw) -> dict:
    return kw


def _cmp_detail(cmp) -> dict:
    if cmp.holds:
        return {}
    return {"first_violation": cmp.first_violation,
            "lhs": cmp.lhs_value, "rhs": cmp.rhs_value}


def _nonneg(series: QSeries) -> int | None:
    return next((i for i in range(series.order + 1) if series[i] < 0), None)


def verify_local_doubling(g: int, n: int, order: int) -> CheckReport:
    """``loc / (1 - t^delta) <= 2 loc`` plus non-negativity of each factor in the splitting."""
    c = CurveData(g, n)
    d = delta(g)
    loc = local_series(c, order)
    lhs = loc * binomial_series(d, 1, order)
    cmp = compare_coefficientwise(lhs, loc * 2, order)
    detail = _cmp_detail(cmp)
    F = (loc * 2 - lhs)
    # closed forms used in the case analysis
    one = QSeries.one(order)
    rf = lambda num, den: expand(RationalFunction(num, den), order)
    quad = (1, -2 * g, -(n - 1))
    if g == 0:
        pieces = [rf((1,), (1, 0, -1)),
                  one + rf((0, 0, n - 3), (1, 0, -(n - 1)))]
    elif g == 1:
        pieces = [one + rf((0, 0, n - 1), quad)]
    else:
        # first factor is 1/(1-t): delta = 1 here
        pieces = [rf((1,), (1, -1)),
                  one + rf((0, g - 2), (1, -g)),
                  one + rf((0, 0, g * g + n - 1), quad)]
    prod = one
    for k, piece in enumerate(pieces):
        neg = _nonneg(piece)
        if neg is not None:
            detail.setdefault("negative_piece", (k, neg))
        prod = prod * piece
    # F = (1 - 2t^d)(1-gt) / ((1-t^d) quad) equals (2 - 1/(1-t^d)) loc, i.e. 2 loc - lhs
    if prod != F:
        detail["decomposition_mismatch"] = next(i for i in range(order + 1) if prod[i] != F[i])
    return CheckReport("doubling", _params(g=g, n=n, order=order), not detail, detail)


def real_ratio_series(g: int, n: int, n1: int, order: int, flip_sign: bool = False) -> QSeries:
    """``(1-gt)^2 (1 -+ (n1-1)t^2) / ((1-2gt-(n-1)t^2)(1-2gt^2-(n-1)t^4))``.

    ``flip_sign=True`` uses ``1 + (n1-1)t^2``, the sign that makes the
    majorant of the global series agree with the functional equation.
    """
    sign = 1 if flip_sign else -1
    num = poly_mul(poly_mul((1, -g), (1, -g)), (1, 0, sign * (n1 - 1)))
    den = poly_mul((1, -2 * g, -(n - 1)), (1, 0, -2 * g, 0, -(n - 1)))
    return expand(RationalFunction(num, den), order)


def verify_real_ratio_bound(g: int, n: int, n1: int, order: int, flip_sign: bool = False) -> CheckReport:
    """``lhs <= 2 loc`` and, for the stated sign, the term-by-term decomposition of ``2 loc - lhs``."""
    c = CurveData(g, n, n1=n1)
    loc = local_series(c, order)
    lhs = real_ratio_series(g, n, n1, order, flip_sign)
    cmp = compare_coefficientwise(lhs, loc * 2, order)
    detail = _cmp_detail(cmp)
    if not flip_sign:
        q4 = (1, 0, -2 * g, 0, -(n - 1))
        a, b = 6 * g * g - 4 * g + n + n1 - 4, g * (3 * n - n1 + 2)
        if a < 0 or b < 0:
            detail["negative_decomposition_coefficient"] = (a, b)
        first = expand(RationalFunction(poly_mul((1, -g), (1, 3 * g, 2)), q4), order)
        second = loc * expand(RationalFunction((0, 0, a, b), q4), order)
        F = loc * 2 - lhs
        if first + second != F:
            detail["decomposition_mismatch"] = True
    name = "real_ratio_flipped" if flip_sign else "realratio"
    return CheckReport(name, _params(g=g, n=n, n1=n1, order=order), not detail, detail)


def verify_squared_global_bound(c: CurveData, order: int) -> CheckReport:
    """``HS_glob^2 / (1 - t^delta)^2 <= 2^(2r + 2 s_bar + 3) loc`` with ``s_bar = max(s+1-rho, 0)``."""
    d = delta(c.g)
    glob = global_series(c, order)
    lhs = glob * glob * binomial_series(d, 2, order)
    const = 2 ** (2 * c.r + 2 * c.s_bar_no_boundary + 3)
    rhs = local_series(c, order) * const
    cmp = compare_coefficientwise(lhs, rhs, order)
    detail = _cmp_detail(cmp)
    if c.s_bar != c.s_bar_no_boundary:
        detail["s_bar_differs"] = {"squared": c.s_bar_no_boundary, "cap": c.s_bar}
    holds = cmp.holds
    return CheckReport("squared", _params(g=c.g, n=c.n, n1=c.n1, r=c.r, s=c.s, rho=c.rho,
                                          d_closed=c.d_closed, order=order), holds, detail)


def verify_squared_growth(g: int, n: int, order: int) -> CheckReport:
    """``c_i^(2) >= (i+2)/2 * c_i`` where ``c^(2)`` are the coefficients of ``loc^2``."""
    loc = local_series(CurveData(g, n), order)
    sq = loc * loc
    bad = next((i for i in range(order + 1) if 2 * sq[i] < (i + 2) * loc[i]), None)
    detail = {} if bad is None else {"first_violation": bad}
    return CheckReport("squared_growth", _params(g=g, n=n, order=order), bad is None, detail)


def verify_coefficient_growth(g: int, n: int, order: int) -> CheckReport:
    """``c_i <= (2g+n)^i``."""
    loc = local_series(CurveData(g, n), order)
    base = 2 * g + n
    bad = next((i for i in range(order + 1) if loc[i] > base ** i), None)
    return CheckReport("coefficient_growth", _params(g=g, n=n, order=order), bad is None,
                       {} if bad is None else {"first_violation": bad})


def verify_cap(c: CurveData, budget: int | None = None) -> CheckReport:
    M = cap_M(c)
    try:
        m = find_minimal_m(c, M, budget)
        ok, detail = True, {"m": m, "M": M}
    except NotFoundBelowCap:
        ok, detail = False, {"M": M, "error": "not_found_below_cap"}
    return CheckReport("cap", _params(g=c.g, n=c.n, n1=c.n1, r=c.r, s=c.s, rho=c.rho,
                                      d_closed=c.d_closed), ok, detail)


# ---------------------------------------------------------------------------
# the g = n = 1 lower bound

def verify_stirling(max_j: int = 64) -> CheckReport:
    """Certified ``C(2j, j) >= 4^j / (e^(1/42) sqrt(pi j))`` for ``1 <= j <= max_j``."""
    failures = [j for j in range(1, max_j + 1) if not stirling_holds(j)]
    detail = {} if not failures else {"failing_j": failures}
    return CheckReport("stirling", {"max_j": max_j}, not failures, detail)


def lower_bound_window(r: int, s: int) -> tuple[int, int]:
    """Integer window ``[20, floor((5/4)^(2r+2s-2) / (e^(1/21) pi))]``, possibly empty."""
    return 20, window_upper(r, s)


def verify_lower_bound_window(r: int, s: int, order: int) -> CheckReport:
    """For ``g = n = 1``: partial sums of the global series dominate the local ones on the window."""
    if r < 0 or s < 0 or r + s < 1:
        raise InvalidParams("need r, s >= 0 and r + s >= 1")
    lo, hi = lower_bound_window(r, s)
    top = min(hi, order)
    params = _params(r=r, s=s, order=order)
    if top < lo:
        return CheckReport("lowerbound", params, True,
                           {"window": [lo, hi], "vacuous": True})
    c = CurveData(1, 1, r=r, s=s, rho=1, d_closed=1, n1=1)
    a = global_series(c, top).partial_sums()
    b = local_series(c, top).partial_sums()
    bad = next((m for m in range(lo, top + 1) if a[m] < b[m]), None)
    detail = {"window": [lo, hi], "checked_up_to": top}
    if top < hi:
        detail["truncated_by_order"] = True
    if bad is not None:
        detail["first_violation"] = bad
    return CheckReport("lowerbound", params, bad is None, detail)


def first_nonvacuous_sum() -> int:
    """Smallest ``r + s`` whose window reaches 20."""
    k = 1
    while window_upper(k, 0) < 20:
        k += 1
    return k


# ---------------------------------------------------------------------------
# bound assembly

def product_tree(values) -> int:
    """Product of integers by balanced pairing (fast for many large factors)."""
    vals = [int(v) for v in values]
    if not vals:
        return 1
    try:
        import gmpy2
        vals = [gmpy2.mpz(v) for v in vals]
    except ImportError:  # pragma: no cover
        pass
    while len(vals) > 1:
        nxt = [vals[i] * vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return int(vals[0])


@dataclass
class BoundReport:
    mode: str
    m_used: int | None
    M_cap: int
    s_bar: int
    s_bar_no_boundary: int
    kappa: Kappa
    factors: dict
    exact_le_simplified: bool
    bound_exact: int
    bound_log10: str
    projective_shape: dict = field(default_factory=dict)
    conjectural: bool = True
    notes: list = field(default_factory=list)

    @property
    def digits(self) -> int:
        return decimal_digits(self.bound_exact)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "m": self.m_used,
            "M": self.M_cap,
            "s_bar": self.s_bar,
            "s_bar_no_boundary": self.s_bar_no_boundary,
            "kappa_p": self.kappa.to_json(),
            "factors": jsonable(self.factors),
            "exact_le_simplified": self.exact_le_simplified,
            "bound_exact": jsonable(self.bound_exact),
            "bound_exact_digits": self.digits,
            "bound_log10": self.bound_log10,
            "projective_shape": jsonable(self.projective_shape),
            "conjectural": self.conjectural,
            "assumptions": CONJECTURAL,
            "notes": list(self.notes),
        }


_BIG = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}

BOUND_REPORT_SCHEMA = {
    "type": "object",
    "required": ["mode", "m", "M", "s_bar", "kappa_p", "factors", "bound_exact",
                 "bound_exact_digits", "bound_log10", "conjectural"],
    "properties": {
        "mode": {"enum": ["exact", "simplified"]},
        "m": {"type": ["integer", "null"], "minimum": 0},
        "M": {"type": "integer", "minimum": 1},
        "s_bar": {"type": "integer", "minimum": 0},
        "kappa_p": {"type": "object", "required": ["p", "upper"]},
        "factors": {"type": "object", "additionalProperties": _BIG},
        "bound_exact": _BIG,
        "bound_exact_digits": {"type": "integer", "minimum": 1},
        "bound_log10": {"type": "string"},
        "conjectural": {"type": "boolean"},
    },
}


def coefficient_product(c: CurveData, M: int) -> int:
    """``prod_{i<M} (c_i + 1)`` over the local coefficients."""
    if M == 0:
        return 1
    loc = local_series(c, M - 1)
    return product_tree(int(loc[i]) + 1 for i in range(M))


def _log10_of(kappa: Kappa, P: int) -> str:
    return log10_upper(lambda: iv.log10(kappa.interval()) + iv.log10(iv.mpf(P)))


def compute_bound(c: CurveData, mode: str = "exact", budget: int | None = None) -> BoundReport:
    """``kappa_p #Y(F_p) prod n_l prod (n_l + n) (4g+2n-2)^M prod_{i<M}(c_i + 1)``.

    ``mode='simplified'`` replaces the coefficient product by ``(2g+n)^((M^2-M)/2)``.
    Primes of ``S`` with good reduction have ``n_l = 1``.
    """
    if mode not in ("exact", "simplified"):
        raise InvalidParams(f"unknown mode {mode!r}")
    if c.p is None or c.points_mod_p is None or c.bad_primes is None:
        raise MissingBadPrimeData("p, points_mod_p and bad_primes are all required")
    kappa = kappa_p(c.p)
    M = cap_M(c)
    notes = []
    try:
        m = find_minimal_m(c, M, budget)
    except BudgetExceeded:
        m = None
        notes.append("minimal m not searched beyond the order budget")

    outside = product_tree(bp.n_ell for bp in c.bad_primes if not bp.in_S)
    bad_in_S = [bp for bp in c.bad_primes if bp.in_S]
    good_in_S = c.s - len(bad_in_S)
    inside = product_tree([bp.n_ell + c.n for bp in bad_in_S] + [1 + c.n] * good_in_S)
    weight = (4 * c.g + 2 * c.n - 2) ** M
    coeffs = coefficient_product(c, M)
    simple = (2 * c.g + c.n) ** ((M * M - M) // 2)
    if coeffs > simple:
        notes.append("coefficient product exceeds its simplified majorant")
    common = product_tree([max(c.points_mod_p, 0), outside, inside, weight])
    P = common * (coeffs if mode == "exact" else simple)
    if P == 0:
        bound, log10 = 0, "-inf"
    else:
        bound = kappa.ceil_times(P)
        log10 = _log10_of(kappa, P)
    factors = {
        "points_mod_p": c.points_mod_p,
        "prod_n_ell_outside_S": outside,
        "prod_n_ell_plus_n_in_S": inside,
        "weight_factor": weight,
        "weight_base": 4 * c.g + 2 * c.n - 2,
        "coefficient_product": coeffs,
        "simplified_factor": simple,
        "simplified_exponent": (M * M - M) // 2,
    }
    thm11 = {
        "M_formula": 2 ** (2 * c.r + 4),
        "M_matches": M == 2 ** (2 * c.r + 4),
        "exponent": 2 ** (4 * c.r + 7),
        "simplified_exponent_le": (M * M - M) // 2 <= 2 ** (4 * c.r + 7),
    }
    if c.s_bar != c.s_bar_no_boundary:
        notes.append(f"s_bar for the cap is {c.s_bar}; the squared-series inequality uses "
                     f"{c.s_bar_no_boundary}")
    return BoundReport(mode, m, M, c.s_bar, c.s_bar_no_boundary, kappa, factors,
                       coeffs <= simple, bound, log10, thm11, True, notes)
