"""Named verification suites over parameter grids, shared by the CLI and the test-suite."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from . import bounds, cm
from .errors import BudgetExceeded, InvalidParams, UnknownSuite
from .hilbert import (
    CurveData,
    curve_grid,
    extract_exponents,
    is_selmer_consistent,
    product_form,
    selmer_v2_dim,
    valid_n1,
    verify_global_majorant,
    verify_functional_equation,
    verify_global_exponents,
    verify_product_factors,
    verify_sgn_consistency,
)
from .lambda_c2 import C2Class, verify_sign_image
from .reports import CheckReport


@dataclass(frozen=True)
class Grid:
    g: tuple = (0, 1, 2, 3)
    n: tuple = (0, 1, 2, 3, 4)
    r: tuple = (0, 1, 2)
    s: tuple = (0, 1, 2)
    rho: int | None = 1
    all_d: bool = True

    def gn(self):
        return [(g, n) for g in self.g for n in self.n if 2 * g + n > 2]

    def gnn1(self):
        return [(g, n, n1) for g, n in self.gn() for n1 in valid_n1(n)]

    def curves(self):
        return list(curve_grid(self.g, self.n, self.r, self.s, self.rho, self.all_d))


_RANGE = re.compile(r"^(-?\d+)(?:\.\.(-?\d+))?$")


def parse_grid(text: str | None) -> Grid:
    """``"g=0..3,n=0..4,r=0..2,s=0..2,rho=1,d=all"``; unspecified keys keep defaults.

    ``rho=auto`` uses 0 for genus 0 and 1 otherwise; ``d=max`` keeps only the
    largest admissible number of closed boundary points.
    """
    grid = Grid()
    if not text:
        return grid
    changes = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InvalidParams(f"grid entry {part!r} is not key=value")
        key, value = (x.strip() for x in part.split("=", 1))
        if key in ("g", "n", "r", "s"):
            m = _RANGE.match(value)
            if not m:
                raise InvalidParams(f"grid range {value!r} must look like a..b or a")
            lo = int(m.group(1))
            hi = int(m.group(2)) if m.group(2) is not None else lo
            if lo < 0 or hi < lo:
                raise InvalidParams(f"bad grid range {value!r}")
            changes[key] = tuple(range(lo, hi + 1))
        elif key == "rho":
            changes["rho"] = None if value == "auto" else int(value)
        elif key == "d":
            if value not in ("all", "max"):
                raise InvalidParams("d must be 'all' or 'max'")
            changes["all_d"] = value == "all"
        else:
            raise InvalidParams(f"unknown grid key {key!r}")
    return Grid(**{**grid.__dict__, **changes})


def _curve_params(c: CurveData) -> dict:
    return {k: getattr(c, k) for k in ("g", "n", "n1", "r", "s", "rho", "d_closed")}


def _skip_inconsistent(name: str, c: CurveData) -> CheckReport:
    return CheckReport(name, _curve_params(c), True,
                       {"reason": "dim H^1_f(G_Q, V_2) < 0", "dim": selmer_v2_dim(c)},
                       skipped=True)


def suite_funceq(grid, order=128, **_):
    return [verify_functional_equation(CurveData(g, n, n1=n1), order) for g, n, n1 in grid.gnn1()]


def suite_product(grid, order=128, **_):
    out = []
    for g, n, n1 in grid.gnn1():
        c = CurveData(g, n, n1=n1)
        out.append(verify_product_factors(c, order))
        out.append(verify_sgn_consistency(c, min(order, 64)))
    return out


def suite_majorant(grid, order=128, **_):
    out = []
    for c in grid.curves():
        if not is_selmer_consistent(c):
            out.append(_skip_inconsistent("majorant", c))
            continue
        out.append(verify_global_majorant(c, order))
    return out


def suite_global_exponents(grid, order=64, **_):
    out = []
    for c in grid.curves():
        if not is_selmer_consistent(c):
            out.append(_skip_inconsistent("global_exponents", c))
            continue
        out.append(verify_global_exponents(c, order))
    return out


def suite_doubling(grid, order=200, **_):
    return [bounds.verify_local_doubling(g, n, order) for g, n in grid.gn()]


def suite_real_ratio(grid, order=200, **_):
    return [bounds.verify_real_ratio_bound(g, n, n1, order) for g, n, n1 in grid.gnn1()]


def suite_real_ratio_flipped(grid, order=200, **_):
    return [bounds.verify_real_ratio_bound(g, n, n1, order, flip_sign=True) for g, n, n1 in grid.gnn1()]


def suite_squared(grid, order=200, **_):
    out = [bounds.verify_squared_global_bound(c, order) for c in grid.curves()]
    out += [bounds.verify_squared_growth(g, n, order) for g, n in grid.gn()]
    return out


def suite_cap(grid, budget=1024, max_excess=3, **_):
    """Minimal ``m <= 4^(r + s_bar + 2)`` for grid curves with ``r + s_bar <= max_excess``."""
    out = []
    for c in grid.curves():
        if c.r + c.s_bar > max_excess:
            continue
        try:
            out.append(bounds.verify_cap(c, budget))
        except BudgetExceeded:
            out.append(CheckReport("cap", _curve_params(c), True,
                                   {"reason": "budget", "M": bounds.cap_M(c)}, skipped=True))
    return out


def suite_bound_products(grid, max_M=256, **_):
    """Exact coefficient product ``<=`` its simplified majorant and ``c_i <= (2g+n)^i``."""
    out = []
    for c in grid.curves():
        M = bounds.cap_M(c)
        if M > max_M:
            continue
        exact = bounds.coefficient_product(c, M)
        simple = (2 * c.g + c.n) ** ((M * M - M) // 2)
        out.append(CheckReport("exact_le_simplified", {**_curve_params(c), "M": M},
                               exact <= simple))
    for g, n in grid.gn():
        out.append(bounds.verify_coefficient_growth(g, n, 256))
    return out


def suite_lowerbound(grid=None, order=256, max_sum=16, **_):
    out = [bounds.verify_stirling(64)]
    for k in range(1, max_sum + 1):
        for r in range(k + 1):
            out.append(bounds.verify_lower_bound_window(r, k - r, order))
    return out


def suite_sign_image(grid=None, order=64, bound=8, **_):
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            rep = verify_sign_image(C2Class(a, b), order)
            out.append(CheckReport("signimage", {"a": a, "b": b, "order": order}, rep.holds,
                                   {} if rep.holds else {"first_mismatch": rep.first_mismatch}))
    return out


def suite_cm(grid=None, order=128, budget=None, r_primes=range(2, 13), **_):
    out = []
    loc = extract_exponents(cm.cm_local_series(64))
    out.append(CheckReport("cm_local_exponents", {"order": 64},
                           list(loc.values) == cm.cm_local_exponents(64)))
    for r, s in [(0, 2), (2, 0), (1, 3), (3, 1)]:
        glob = extract_exponents(cm.cm_global_series(r, s, 64))
        out.append(CheckReport("cm_global_exponents", {"r": r, "s": s, "order": 64},
                               list(glob.values) == cm.cm_global_exponents(r, s, 64)))
    out.append(cm.verify_b_identity(order))
    out.append(cm.verify_middle_terms(2 * order))
    out.append(cm.verify_B_chain(order))
    for rp in range(2, 7):
        out.append(cm.verify_relaxation(rp, 0, order))
        out.append(cm.verify_relaxation(1, rp - 1, order))
    C1 = cm.hardy_ramanujan_constants(order)[1]
    C2 = cm.fit_C2(order)
    for rp in range(2, 7):
        out.append(cm.verify_asymptotic_bounds(rp, order, C1, C2))
    values = {}
    for rp in r_primes:
        try:
            values[rp] = cm.cm_find_minimal_m(rp, 0, budget)
        except BudgetExceeded:
            out.append(CheckReport("cm_find_m", {"r_prime": rp}, True, {"reason": "budget"},
                                   skipped=True))
    if values:
        fit = cm.fit_growth("cm", values)
        out.append(CheckReport("cm_growth_fit", {"r_prime": sorted(values)}, fit.bounded(),
                               fit.to_json()))
    out.append(cm.verify_sqrt_sum(10_000))
    return out


def suite_polylog(grid=None, order=64, budget=None, s_values=range(2, 13), **_):
    out = [cm.verify_polylog_identities(order)]
    values = {}
    for s in s_values:
        try:
            values[s] = cm.polylog_find_minimal_m(s, budget)
        except BudgetExceeded:
            out.append(CheckReport("polylog_find_m", {"s": s}, True, {"reason": "budget"},
                                   skipped=True))
    if values:
        fit = cm.fit_growth("polylog", values)
        out.append(CheckReport("polylog_growth_fit", {"s": sorted(values)}, fit.bounded(),
                               fit.to_json()))
    return out


def suite_roundtrip(grid=None, order=64, seed=0, count=100, **_):
    """Random sparse exponent vectors survive product expansion and Mobius inversion."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        exps = [0] * order
        for k in rng.sample(range(1, order + 1), rng.randint(1, 6)):
            exps[k - 1] = rng.randint(-3, 5)
        back = extract_exponents(product_form(exps, order))
        out.append(CheckReport("roundtrip", {"case": i, "seed": seed}, list(back.values) == exps))
    return out


SUITES = {
    "funceq": suite_funceq,
    "product": suite_product,
    "majorant": suite_majorant,
    "globalexp": suite_global_exponents,
    "doubling": suite_doubling,
    "realratio": suite_real_ratio,
    "squared": suite_squared,
    "cap": suite_cap,
    "boundproducts": suite_bound_products,
    "lowerbound": suite_lowerbound,
    "signimage": suite_sign_image,
    "cm": suite_cm,
    "polylog": suite_polylog,
    "roundtrip": suite_roundtrip,
}

# suites whose default grid differs from Grid()
_DEFAULT_GRIDS = {
    "funceq": Grid(r=(0,), s=(0,)),
    "product": Grid(r=(0,), s=(0,)),
}


def run_suite(name: str, grid: Grid | None = None, order: int | None = None,
              budget: int | None = None, seed: int = 0) -> list[CheckReport]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, grid, order, budget, seed))
        return out
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}")
    kwargs = {"seed": seed}
    if order is not None:
        kwargs["order"] = order
    if budget is not None:
        kwargs["budget"] = budget
    return SUITES[name](grid or _DEFAULT_GRIDS.get(name, Grid()), **kwargs)
