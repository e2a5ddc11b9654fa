"""
Local, real and global Hilbert series of a hyperbolic curve, built from its
arithmetic invariants, and exponent recovery for product forms.

Every global output is conditional on the Tate-Shafarevich and Bloch-Kato
conjectures; callers attach that flag (``CONJECTURAL``) to anything derived
from :func:`global_series` or :func:`global_bound_series`.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import (
    ConstantTermNotOne,
    InvalidN1,
    InvalidParams,
    NonIntegerExponent,
    NotHyperbolic,
    NotPrime,
)
from .reports import CheckReport
from .series import (
    QSeries,
    RationalFunction,
    binomial_series,
    compare_coefficientwise,
    exp_from_log_derivative,
    expand,
    invert,
    log,
    poly_mul,
    rational_power,
    substitute_power,
)

CONJECTURAL = "conjectural (Tate-Shafarevich + Bloch-Kato)"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class BadPrime:
    ell: int
    n_ell: int
    in_S: bool = False

    def to_json(self) -> dict:
        return {"ell": self.ell, "n_ell": self.n_ell, "in_S": self.in_S}


@dataclass(frozen=True)
class CurveData:
    """Arithmetic invariants of ``Y = X - D`` over Q.

    ``d_closed`` is the number of closed points of ``D`` and ``n1`` the number
    of real points.  ``n1`` defaults to ``n``; ``d_closed`` defaults to
    ``n1 + n2``, the number of complex-conjugation orbits on ``D``.
    ``bad_primes=None`` means the data is absent, ``()`` means good reduction
    everywhere.
    """

    g: int
    n: int = 0
    r: int = 0
    s: int = 0
    rho: int = 1
    d_closed: int | None = None
    n1: int | None = None
    p: int | None = None
    points_mod_p: int | None = None
    bad_primes: tuple | None = None

    def __post_init__(self):
        if self.n1 is None:
            object.__setattr__(self, "n1", self.n)
        if self.d_closed is None and isinstance(self.n1, int):
            object.__setattr__(self, "d_closed", (self.n + self.n1) // 2)
        if self.bad_primes is not None:
            object.__setattr__(self, "bad_primes", tuple(
                bp if isinstance(bp, BadPrime) else BadPrime(**bp)
                for bp in self.bad_primes))
        self._validate()

    def _validate(self):
        for name in ("g", "n", "r", "s", "rho", "d_closed", "n1"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise InvalidParams(f"{name} must be a non-negative integer, got {value!r}")
        if 2 * self.g + self.n <= 2:
            raise NotHyperbolic(f"2g+n > 2 fails for g={self.g}, n={self.n}")
        if self.g >= 1 and self.rho < 1:
            raise InvalidParams("rho must be >= 1 when g >= 1")
        if self.g == 0 and self.r:
            raise InvalidParams("r must be 0 when g = 0 (the Jacobian is trivial)")
        if self.n1 > self.n or (self.n - self.n1) % 2:
            raise InvalidN1(f"n1={self.n1} must satisfy n1 <= n and n1 = n mod 2 (n={self.n})")
        if self.d_closed > self.n1 + self.n2:
            # Galois orbits on D are unions of complex-conjugation orbits
            raise InvalidParams(f"d_closed={self.d_closed} exceeds the number of "
                                f"conjugation orbits n1+n2={self.n1 + self.n2}")
        if self.n and not self.d_closed:
            raise InvalidParams("d_closed must be >= 1 when n >= 1")
        if self.p is not None:
            if not is_prime(self.p):
                raise NotPrime(f"p={self.p} is not prime")
        if self.points_mod_p is not None and self.points_mod_p < 0:
            raise InvalidParams("points_mod_p must be non-negative")
        if self.bad_primes is not None:
            seen = set()
            for bp in self.bad_primes:
                if not is_prime(bp.ell):
                    raise InvalidParams(f"bad prime ell={bp.ell} is not prime")
                if bp.n_ell < 1:
                    raise InvalidParams(f"n_ell must be >= 1 (ell={bp.ell})")
                if bp.ell in seen:
                    raise InvalidParams(f"bad prime ell={bp.ell} listed twice")
                seen.add(bp.ell)
                if self.p is not None and bp.ell == self.p:
                    raise InvalidParams(f"p={self.p} must be a prime of good reduction")
            if sum(bp.in_S for bp in self.bad_primes) > self.s:
                raise InvalidParams("more bad primes flagged in_S than s")

    @property
    def n2(self) -> int:
        return (self.n - self.n1) // 2

    @property
    def s_bar(self) -> int:
        """Excess ``max(s + 1 - rho - #|D|, 0)`` entering the cap ``M``."""
        return max(self.s + 1 - self.rho - self.d_closed, 0)

    @property
    def s_bar_no_boundary(self) -> int:
        """The variant ``max(s + 1 - rho, 0)`` without the ``#|D|`` term."""
        return max(self.s + 1 - self.rho, 0)

    @property
    def t2_exponent(self) -> int:
        """Exponent ``rho + #|D| - 1 - s`` of ``(1 - t^2)`` in the global series."""
        return self.rho + self.d_closed - 1 - self.s

    def with_(self, **changes) -> "CurveData":
        return replace(self, **changes)

    def to_json(self) -> dict:
        out = {
            "g": self.g, "n": self.n, "r": self.r, "s": self.s, "rho": self.rho,
            "d_closed": self.d_closed, "n1": self.n1,
            "p": self.p, "points_mod_p": self.points_mod_p,
        }
        out["bad_primes"] = (None if self.bad_primes is None
                             else [bp.to_json() for bp in self.bad_primes])
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CurveData":
        data = dict(data)
        bad = data.pop("bad_primes", None)
        if bad is not None:
            bad = tuple(BadPrime(int(b["ell"]), int(b["n_ell"]), bool(b.get("in_S", False)))
                        for b in bad)
        known = {k: data[k] for k in ("g", "n", "r", "s", "rho", "d_closed", "n1",
                                      "p", "points_mod_p") if k in data}
        return cls(bad_primes=bad, **known)


CURVE_SCHEMA = {
    "type": "object",
    "required": ["g", "n", "r", "s", "rho", "d_closed", "n1", "p", "points_mod_p",
                 "bad_primes"],
    "properties": {
        "g": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 0},
        "r": {"type": "integer", "minimum": 0},
        "s": {"type": "integer", "minimum": 0},
        "rho": {"type": "integer", "minimum": 0},
        "d_closed": {"type": "integer", "minimum": 0},
        "n1": {"type": "integer", "minimum": 0},
        "p": {"type": "integer", "minimum": 2},
        "points_mod_p": {"type": "integer", "minimum": 0},
        "bad_primes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ell", "n_ell", "in_S"],
                "properties": {
                    "ell": {"type": "integer", "minimum": 2},
                    "n_ell": {"type": "integer", "minimum": 1},
                    "in_S": {"type": "boolean"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


# ---------------------------------------------------------------------------
# closed forms

def _quadratic(c: CurveData) -> tuple:
    """``1 - 2g t - (n-1) t^2``."""
    return (1, -2 * c.g, -(c.n - 1))


def local_rf(c: CurveData) -> RationalFunction:
    return RationalFunction((1, -c.g), _quadratic(c))


def real_quadratic(c: CurveData) -> tuple:
    """``1 + (n1-1) t^2``, the denominator of the sign image."""
    return (1, 0, c.n1 - 1)


def G_rf(c: CurveData) -> RationalFunction:
    """``(1 - 2g t^2 - (n-1) t^4) / ((1 + (n1-1) t^2)(1 - 2g t - (n-1) t^2))``."""
    num = (1, 0, -2 * c.g, 0, -(c.n - 1))
    den = poly_mul(real_quadratic(c), _quadratic(c))
    return RationalFunction(num, den)


def local_series(c: CurveData, order: int) -> QSeries:
    """``(1 - g t) / (1 - 2g t - (n-1) t^2)``."""
    return expand(local_rf(c), order)


def motivic_dim_series(c: CurveData, order: int) -> QSeries:
    """Dimension image of the motivic Hilbert series: ``1 / (1 - 2g t - (n-1) t^2)``."""
    return expand(RationalFunction((1,), _quadratic(c)), order)


def sgn_motivic_series(c: CurveData, order: int) -> QSeries:
    """Sign image of the motivic Hilbert series: ``1 / (1 + (n1-1) t^2)``."""
    return expand(RationalFunction((1,), (1, 0, c.n1 - 1)), order)


def G_series(c: CurveData, order: int) -> QSeries:
    return expand(G_rf(c), order)


# ---------------------------------------------------------------------------
# the real Hilbert series HS_R

_cache_lock = threading.Lock()
_log_G_cache: dict = {}
_hs_R_cache: dict = {}


def _cached(cache: dict, key, order: int, build):
    with _cache_lock:
        hit = cache.get(key)
    if hit is not None and hit.order >= order:
        return hit.truncate(order)
    value = build()
    with _cache_lock:
        prev = cache.get(key)
        if prev is None or prev.order < value.order:
            cache[key] = value
    return value


def log_G(c: CurveData, order: int) -> QSeries:
    key = (c.g, c.n, c.n1)
    return _cached(_log_G_cache, key, order, lambda: log(G_series(c, order)))


def product_depth(order: int) -> int:
    """Largest ``j`` with ``2^j <= order``; later factors are ``1`` to this order."""
    return max(order, 1).bit_length() - 1


def hs_R_factor(c: CurveData, j: int, order: int) -> QSeries:
    """``G(t^(2^j))^(1 / 2^(j+1))``."""
    return _factor(c.g, c.n, c.n1, j, order)


@lru_cache(maxsize=512)
def _factor(g: int, n: int, n1: int, j: int, order: int) -> QSeries:
    lg = substitute_power(log_G(CurveData(g, n, n1=n1), order), 2 ** j)
    return (lg * Fraction(1, 2 ** (j + 1))).exp()


@lru_cache(maxsize=256)
def _tail_product(g: int, n: int, n1: int, order: int) -> QSeries:
    """``prod_{j>=1} G(t^(2^j))^(1/2^(j+1))``."""
    out = QSeries.one(order)
    for j in range(1, order.bit_length() + 1):
        out = out * _factor(g, n, n1, j, order)
    return out


def hs_R_factors(c: CurveData, order: int) -> list[QSeries]:
    """Factors ``j = 0 .. ceil(log2(order+1))``; those with ``2^j > order`` are 1."""
    return [hs_R_factor(c, j, order) for j in range(order.bit_length() + 1)]


def _hs_R_build(c: CurveData, order: int) -> QSeries:
    # log of the product: m[t^m] log HS_R = (1/2) sum_{2^j | m} lam_G(m / 2^j)
    lg = log_G(c, order)
    lam_G = [k * lg[k] for k in range(order + 1)]
    lam = [Fraction(0)] * (order + 1)
    for m in range(1, order + 1):
        total = Fraction(0)
        k = m
        while True:
            total += lam_G[k]
            if k % 2:
                break
            k //= 2
        lam[m] = total / 2
    return exp_from_log_derivative(lam, order)


def hs_R(c: CurveData, order: int) -> QSeries:
    """``HS_R(t) = prod_{j>=0} G(t^(2^j))^(1/2^(j+1))``, truncated at ``order``."""
    key = (c.g, c.n, c.n1)
    return _cached(_hs_R_cache, key, order, lambda: _hs_R_build(c, order))


# ---------------------------------------------------------------------------
# global series

def global_series(c: CurveData, order: int) -> QSeries:
    """``(1-t)^(-r) (1-t^2)^(rho+#|D|-1-s) HS_loc(t) / HS_R(t)`` (conjectural)."""
    out = binomial_series(1, c.r, order) * binomial_series(2, -c.t2_exponent, order)
    return out * _local_over_real(c.g, c.n, c.n1, order)


@lru_cache(maxsize=256)
def _local_over_real(g: int, n: int, n1: int, order: int) -> QSeries:
    c = CurveData(g, n, n1=n1)
    return local_series(c, order) * invert(hs_R(c, order))


def global_bound_series(c: CurveData, order: int) -> QSeries:
    """Closed-form coefficientwise majorant of :func:`global_series`."""
    out = binomial_series(1, c.r, order) * binomial_series(2, -c.t2_exponent, order)
    return out * _majorant_core(c.g, c.n, c.n1, order)


@lru_cache(maxsize=256)
def _majorant_core(g: int, n: int, n1: int, order: int) -> QSeries:
    """``(1-gt) / sqrt(1-2gt-(n-1)t^2) * sqrt((1+(n1-1)t^2) / (1-2gt^2-(n-1)t^4))``."""
    c = CurveData(g, n, n1=n1)
    half = Fraction(1, 2)
    quad = expand(RationalFunction((1,), _quadratic(c)), order)
    ratio = expand(RationalFunction(real_quadratic(c),
                                    (1, 0, -2 * g, 0, -(n - 1))), order)
    out = QSeries.from_coeffs([1, -g], order)
    return out * rational_power(quad, half) * rational_power(ratio, half)


def clear_caches() -> None:
    """Drop memoised series (used before timing runs)."""
    with _cache_lock:
        _log_G_cache.clear()
        _hs_R_cache.clear()
    for fn in (_factor, _tail_product, _local_over_real, _majorant_core):
        fn.cache_clear()


def selmer_v2_dim(c: CurveData) -> int:
    """``dim H^1_f(G_Q, V_2) = e_2(loc) - e_2^sigma + 1 - rho - #|D|``.

    A negative value means the invariants cannot come from an actual curve.
    """
    loc = extract_exponents(local_series(c, 2))
    sig = extract_exponents(hs_R(c, 2))
    return loc[2] - sig[2] + 1 - c.rho - c.d_closed


def is_selmer_consistent(c: CurveData) -> bool:
    return selmer_v2_dim(c) >= 0


def valid_n1(n: int) -> range:
    return range(n % 2, n + 1, 2)


def curve_grid(gs=range(4), ns=range(5), rs=(0,), ss=(0,), rho=1,
               all_d_closed=False):
    """Hyperbolic curves over the given ranges with every valid ``n1``.

    ``rho`` is used for ``g >= 1``; for ``g = 0`` it is kept as given (pass
    ``rho=None`` to use 0 there).  Only ``r = 0`` is emitted when ``g = 0``.
    """
    for g in gs:
        for n in ns:
            if 2 * g + n <= 2:
                continue
            for n1 in valid_n1(n):
                top = n1 + (n - n1) // 2
                ds = [top] if not all_d_closed else (range(1, top + 1) if n else [0])
                for d in ds:
                    for r in (rs if g else (0,)):
                        for s in ss:
                            rh = (0 if g == 0 else 1) if rho is None else rho
                            yield CurveData(g, n, r=r, s=s, rho=rh, d_closed=d, n1=n1)


# ---------------------------------------------------------------------------
# product forms and exponent recovery

@dataclass(frozen=True)
class ExponentVector:
    """Exponents ``e_k`` (``1 <= k <= order``) of ``prod (1 - t^k)^(-e_k)``."""

    values: tuple
    order: int = field(default=-1)

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if self.order < 0:
            object.__setattr__(self, "order", len(values))
        if len(values) != self.order:
            raise ValueError("need exactly one exponent per k = 1..order")

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.order:
            raise IndexError(k)
        return self.values[k - 1]

    def as_dict(self) -> dict:
        return {k: v for k, v in enumerate(self.values, start=1)}

    def to_json(self) -> dict:
        return {"order": self.order, "exponents": list(self.values)}


def mobius_table(n: int) -> list[int]:
    mu = [1] * (n + 1)
    is_comp = [False] * (n + 1)
    primes = []
    if n >= 0:
        mu[0] = 0
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for q in primes:
            if i * q > n:
                break
            is_comp[i * q] = True
            if i % q == 0:
                mu[i * q] = 0
                break
            mu[i * q] = -mu[i]
    return mu


def product_form(exponents, order: int) -> QSeries:
    """``prod_{k=1}^{order} (1 - t^k)^(-e_k)``; ``exponents`` is an ExponentVector,
    mapping ``k -> e_k`` or sequence ``e_1, e_2, ...``."""
    if isinstance(exponents, ExponentVector):
        e = exponents.as_dict()
    elif isinstance(exponents, dict):
        e = dict(exponents)
    else:
        e = {k: v for k, v in enumerate(exponents, start=1)}
    lam = [0] * (order + 1)
    for k, ek in e.items():
        if ek and 1 <= k <= order:
            for m in range(k, order + 1, k):
                lam[m] += k * ek
    return exp_from_log_derivative(lam, order)


def extract_exponents(f: QSeries) -> ExponentVector:
    """Recover ``e_k`` with ``f = prod (1 - t^k)^(-e_k)`` by Mobius inversion."""
    if f[0] != 1:
        raise ConstantTermNotOne("exponent extraction needs constant term 1")
    order = f.order
    lf = log(f)
    L = [k * lf[k] for k in range(order + 1)]
    mu = mobius_table(order)
    values = []
    for n in range(1, order + 1):
        total = Fraction(0)
        for d in range(1, math.isqrt(n) + 1):
            if n % d == 0:
                total += mu[n // d] * L[d]
                if d * d != n:
                    total += mu[d] * L[n // d]
        e = total / n
        if e.denominator != 1:
            raise NonIntegerExponent(f"e_{n} = {e} is not an integer")
        values.append(e.numerator)
    return ExponentVector(tuple(values), order)


def lambda_dims(g: int, n: int) -> dict:
    """Dimensions of the first four graded pieces from the universal lambda-formulas
    ``V1 = A``, ``V2 = l2(A) + B``, ``V3 = A l2(A) + AB - l3(A)``,
    ``V4 = A^2 l2(A) + A^2 B - l2(A)^2 + l2(B)`` with ``dim A = 2g``, ``dim B = n - 1``."""
    a, b = 2 * g, n - 1
    l2a, l3a = math.comb(a, 2), math.comb(a, 3)
    l2b = b * (b - 1) // 2
    return {
        1: a,
        2: l2a + b,
        3: a * l2a + a * b - l3a,
        4: a * a * l2a + a * a * b - l2a * l2a + l2b,
    }


# ---------------------------------------------------------------------------
# verifications

def _params(c: CurveData, *names) -> dict:
    return {k: getattr(c, k) for k in names}


def verify_functional_equation(c: CurveData, order: int) -> CheckReport:
    """``HS_R(t)^2 == G(t) HS_R(t^2)`` exactly to ``order``."""
    h = hs_R(c, order)
    lhs = h * h
    rhs = G_series(c, order) * substitute_power(h, 2)
    bad = next((i for i in range(order + 1) if lhs[i] != rhs[i]), None)
    detail = {} if bad is None else {"first_mismatch": bad}
    return CheckReport("funceq", {**_params(c, "g", "n", "n1"), "order": order},
                       bad is None, detail)


def verify_product_factors(c: CurveData, order: int) -> CheckReport:
    """Each factor ``G(t^(2^j))^(1/2^(j+1))`` is ``>= 0`` with constant term 1, and
    their product matches :func:`hs_R`."""
    factors = hs_R_factors(c, order)
    detail: dict = {}
    ok = True
    for j, fac in enumerate(factors):
        if fac[0] != 1 or not fac.is_nonnegative():
            neg = next((i for i in range(order + 1) if fac[i] < 0), None)
            detail = {"factor_j": j, "first_negative": neg, "constant": fac[0]}
            ok = False
            break
    lg = log_G(c, order)
    if ok and not lg.is_nonnegative():
        ok = False
        detail = {"log_G_first_negative": next(i for i in range(order + 1) if lg[i] < 0)}
    if ok:
        prod = QSeries.one(order)
        for fac in factors:
            prod = prod * fac
        if prod != hs_R(c, order):
            ok = False
            detail = {"product_mismatch": True}
    return CheckReport("product", {**_params(c, "g", "n", "n1"), "order": order}, ok, detail)


def verify_global_majorant(c: CurveData, order: int) -> CheckReport:
    """``HS_glob <= majorant`` and ``majorant == HS_glob * prod_{j>=1} factors``."""
    glob = global_series(c, order)
    bound = global_bound_series(c, order)
    cmp = compare_coefficientwise(glob, bound, order)
    detail: dict = {}
    ok = cmp.holds
    if not ok:
        detail = {"first_violation": cmp.first_violation}
    else:
        prod = glob * _tail_product(c.g, c.n, c.n1, order)
        if prod != bound:
            ok = False
            detail = {"identity_mismatch": next(i for i in range(order + 1)
                                                if prod[i] != bound[i])}
    return CheckReport("majorant", {**_params(c, "g", "n", "n1", "r", "s", "rho", "d_closed"),
                                  "order": order}, ok, detail)


def verify_sgn_consistency(c: CurveData, order: int) -> CheckReport:
    """``prod (1-t^k)^(-e^sigma_k) (1+t^k)^(-(dim V_k - e^sigma_k))`` equals the sign image."""
    e_sigma = extract_exponents(hs_R(c, order))
    dims = extract_exponents(motivic_dim_series(c, order))
    # (1 + t^k)^(-m) = (1 - t^{2k})^(-m) (1 - t^k)^(m)
    combined = {}
    for k in range(1, order + 1):
        es, dv = e_sigma[k], dims[k]
        combined[k] = combined.get(k, 0) + es - (dv - es)
        if 2 * k <= order:
            combined[2 * k] = combined.get(2 * k, 0) + (dv - es)
    lhs = product_form(combined, order)
    rhs = sgn_motivic_series(c, order)
    bad = next((i for i in range(order + 1) if lhs[i] != rhs[i]), None)
    negatives = [k for k in range(1, order + 1) if e_sigma[k] < 0 or dims[k] < e_sigma[k]]
    ok = bad is None and not negatives
    detail = {}
    if bad is not None:
        detail["first_mismatch"] = bad
    if negatives:
        detail["bad_fixed_dims"] = negatives[:5]
    return CheckReport("sgn", {**_params(c, "g", "n", "n1"), "order": order}, ok, detail)


def verify_global_exponents(c: CurveData, order: int) -> CheckReport:
    """Global exponents against the Selmer dimension formulas:
    ``e_1 = r``, ``e_2 + rho + #|D| - 1 - s = e_2(loc) - e_2^sigma``,
    ``e_k = e_k(loc) - e_k^sigma`` for ``k >= 3``."""
    glob = extract_exponents(global_series(c, order))
    loc = extract_exponents(local_series(c, order))
    sig = extract_exponents(hs_R(c, order))
    problems = {}
    if glob[1] != c.r:
        problems["e1"] = glob[1]
    if order >= 2 and glob[2] + c.t2_exponent != loc[2] - sig[2]:
        problems["e2"] = glob[2]
    for k in range(3, order + 1):
        if glob[k] != loc[k] - sig[k] or glob[k] < 0:
            problems[f"e{k}"] = glob[k]
            break
    return CheckReport("global_exponents",
                       {**_params(c, "g", "n", "n1", "r", "s", "rho", "d_closed"),
                        "order": order}, not problems, problems)
