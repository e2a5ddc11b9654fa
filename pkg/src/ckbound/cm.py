"""
Metabelian quotients: punctured CM elliptic curves and the polylogarithmic
quotient of the thrice-punctured line.

Both reduce to comparisons between partition-number sequences.  All
sequences here are plain integer lists indexed by weight; only the
user-facing series builders return :class:`QSeries`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv, mp

from .bounds import order_budget, product_tree
from .certified import (
    Kappa,
    kappa_p,
    log10_upper,
    lower_decimal,
    precision,
    refine,
    sqrt_sum_check,
    tau,
    upper_decimal,
    width_ok,
)
from .errors import BudgetExceeded, InvalidParams, MissingC1, MissingConstants
from .hilbert import ExponentVector, is_prime, product_form
from .reports import CheckReport, decimal_digits, jsonable
from .series import QSeries

# ---------------------------------------------------------------------------
# integer sequence helpers


def partial_sums(seq: list[int], times: int = 1, step: int = 1) -> list[int]:
    """Multiply by ``(1 - t^step)^(-times)``."""
    out = list(seq)
    for _ in range(times):
        for i in range(step, len(out)):
            out[i] += out[i - step]
    return out


def times_one_minus(seq: list[int], step: int = 1, times: int = 1) -> list[int]:
    """Multiply by ``(1 - t^step)^times``."""
    out = list(seq)
    for _ in range(times):
        for i in range(len(out) - 1, step - 1, -1):
            out[i] -= out[i - step]
    return out


def _pack(values: list[int], width: int) -> int:
    return int.from_bytes(b"".join(v.to_bytes(width, "little") for v in values), "little")


def convolve_nonnegative(a: list[int], b: list[int], length: int | None = None) -> list[int]:
    """Cauchy product of non-negative integer sequences by Kronecker substitution."""
    if not a or not b:
        return []
    if min(a) < 0 or min(b) < 0:
        raise ValueError("Kronecker packing needs non-negative entries")
    length = len(a) + len(b) - 1 if length is None else length
    bits = max(a).bit_length() + max(b).bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (bits + 7) // 8
    try:
        import gmpy2
        x, y = gmpy2.mpz(_pack(a, width)), gmpy2.mpz(_pack(b, width))
        prod = int(x * x) if a is b else int(x * y)
    except ImportError:  # pragma: no cover
        prod = _pack(a, width) * _pack(b, width)
    raw = prod.to_bytes(width * (len(a) + len(b)), "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(length)]


# ---------------------------------------------------------------------------
# partition numbers

@dataclass(frozen=True)
class PartitionTable:
    """``p(0..N)`` and ``q(0..N)`` (partitions into odd parts)."""

    p_values: tuple
    q_values: tuple

    @property
    def N(self) -> int:
        return len(self.p_values) - 1

    def p(self, n: int) -> int:
        return self.p_values[n]

    def q(self, n: int) -> int:
        return self.q_values[n]


def _pentagonal(limit: int):
    """Generalised pentagonal numbers ``k(3k-1)/2`` up to ``limit`` with their signs."""
    k = 1
    while True:
        for kk in (k, -k):
            w = kk * (3 * kk - 1) // 2
            if w > limit:
                if kk < 0:
                    return
                continue
            yield w, (-1) ** (k + 1)
        k += 1


def _p_list(N: int) -> list[int]:
    p = [0] * (N + 1)
    p[0] = 1
    pent = list(_pentagonal(N))
    for n in range(1, N + 1):
        total = 0
        for w, sign in pent:
            if w > n:
                break
            total += sign * p[n - w]
        p[n] = total
    return p


def _q_from_p(p: list[int]) -> list[int]:
    """Odd-part partitions: ``prod (1 + t^k) = f(t) * prod (1 - t^(2k))``."""
    N = len(p) - 1
    euler = [(0, 1)] + [(2 * w, -sign) for w, sign in _pentagonal(N // 2) if w]
    return [sum(c * p[n - w] for w, c in euler if w <= n) for n in range(N + 1)]


_table_lock = threading.Lock()
_table: PartitionTable | None = None


def partition_numbers(N: int) -> PartitionTable:
    """Exact ``p(n)`` (pentagonal recurrence) and ``q(n)`` for ``0 <= n <= N``."""
    global _table
    if N < 0:
        raise InvalidParams("N must be >= 0")
    with _table_lock:
        if _table is not None and _table.N >= N:
            t = _table
            return PartitionTable(t.p_values[:N + 1], t.q_values[:N + 1])
    p = _p_list(N)
    table = PartitionTable(tuple(p), tuple(_q_from_p(p)))
    with _table_lock:
        if _table is None or _table.N < N:
            _table = table
    return table


def distinct_part_counts(N: int) -> list[int]:
    """Partitions into distinct parts by direct product expansion (an independent check)."""
    out = [1] + [0] * N
    for k in range(1, N + 1):
        for n in range(N, k - 1, -1):
            out[n] += out[n - k]
    return out


def _hr_ratio(n: int, value: int, power: int, scale: int):
    """``value * n^power / e^(pi sqrt(scale n / 3))``."""
    return iv.mpf(value) * iv.mpf(n) ** power / iv.exp(iv.pi * iv.sqrt(iv.mpf(scale * n) / 3))


@dataclass(frozen=True)
class EmpiricalConstant:
    """A constant valid over ``lo..hi``; ``value`` is a certified decimal (rounded safely)."""

    name: str
    value: str
    lo: int
    hi: int
    attained_at: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.value)

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "valid_for": [self.lo, self.hi],
                "attained_at": self.attained_at}


def _fit(name: str, values, power: int, scale: int, lo: int, hi: int, upper: bool,
         places: int = 6) -> EmpiricalConstant:
    best, best_n = None, lo
    with precision(96):
        for n in range(lo, hi + 1):
            x = _hr_ratio(n, values[n], power, scale)
            end = x.b if upper else x.a
            if best is None or (end > best if upper else end < best):
                best, best_n = end, n
        text = upper_decimal(best, places) if upper else lower_decimal(best, places)
    return EmpiricalConstant(name, text, lo, hi, best_n)


def hardy_ramanujan_constants(N: int, lo: int = 1) -> tuple[EmpiricalConstant, EmpiricalConstant]:
    """Tightest ``C0, C1`` with ``C0 e^(pi sqrt(2n/3)) / n <= p(n) <= C1 e^(...) / n`` on ``lo..N``."""
    p = partition_numbers(N).p_values
    return (_fit("C0", p, 1, 2, lo, N, upper=False),
            _fit("C1", p, 1, 2, lo, N, upper=True))


def fit_C2(N: int, lo: int = 1) -> EmpiricalConstant:
    """Largest ``C2`` with ``b_n >= C2 e^(pi sqrt(4n/3)) / n^2`` on ``lo..N``."""
    b = f_squared(N)
    return _fit("C2", b, 2, 4, lo, N, upper=False)


# ---------------------------------------------------------------------------
# CM series

def f_squared(N: int) -> list[int]:
    """``b_n = [t^n] f(t)^2 = sum_k p(k) p(n-k)``."""
    p = list(partition_numbers(N).p_values)
    return convolve_nonnegative(p, p, N + 1)


def cm_local_exponents(order: int) -> list[int]:
    return [1, 1] + [2] * max(order - 2, 0) if order >= 2 else [1] * order


def cm_global_exponents(r: int, s: int, order: int) -> list[int]:
    return ([r, s] + [1] * max(order - 2, 0))[:order]


def cm_local_series(order: int) -> QSeries:
    """``(1-t)^-1 (1-t^2)^-1 prod_{k>=3} (1-t^k)^-2``."""
    return product_form(cm_local_exponents(order), order)


def cm_global_series(r: int, s: int, order: int) -> QSeries:
    """``(1-t)^-r (1-t^2)^-s prod_{k>=3} (1-t^k)^-1`` (conjectural)."""
    if r < 0 or s < 0:
        raise InvalidParams("r and s must be non-negative")
    return product_form(cm_global_exponents(r, s, order), order)


def verify_b_identity(order: int) -> CheckReport:
    """``HS'_loc / ((1-t)(1-t^2)) = f^2`` and ``b_n = sum p(k) p(n-k)``."""
    lhs = cm_local_series(order)
    lhs = QSeries.from_coeffs(partial_sums(partial_sums([int(x) for x in lhs]), 1, 2), order)
    p = partition_numbers(order).p_values
    direct = [sum(p[k] * p[n - k] for k in range(n + 1)) for n in range(order + 1)]
    fast = f_squared(order)
    bad = next((n for n in range(order + 1) if not (lhs[n] == direct[n] == fast[n])), None)
    return CheckReport("cm_b_identity", {"order": order}, bad is None,
                       {} if bad is None else {"first_mismatch": bad})


def cm_sequences(r: int, s: int, N: int) -> dict:
    """Coefficient lists ``0..N`` of the four generating functions compared in the CM case.

    ``a_tilde = (1-t)^-(r+s) f``, ``a = (1-t)^-r (1-t^2)^-s f``, ``b = f^2``,
    ``A = (1-t^2) a`` and ``B = (1-t^2) b`` (the latter two are the series
    ``HS'/(1-t)``).
    """
    p = list(partition_numbers(N).p_values)
    a = partial_sums(partial_sums(p, r), s, 2)
    b = f_squared(N)
    return {
        "a_tilde": partial_sums(p, r + s),
        "a": a,
        "b": b,
        "A": times_one_minus(a, 2),
        "B": times_one_minus(b, 2),
    }


_CM_KINDS = {"tilde": ("a_tilde", "b"), "a": ("a", "b"), "A": ("A", "B")}


def cm_find_minimal_m(r: int, s: int, budget: int | None = None, kind: str = "tilde") -> int:
    """Smallest ``m`` with ``a_tilde_m < b_m`` (``kind='tilde'``), ``a_m < b_m``
    (``'a'``) or ``A_m < B_m`` (``'A'``), searching up to the order budget."""
    if kind not in _CM_KINDS:
        raise InvalidParams(f"unknown crossing kind {kind!r}")
    if r < 0 or s < 0:
        raise InvalidParams("r and s must be non-negative")
    if kind == "tilde" and r + s < 2:
        raise InvalidParams("the relaxed comparison needs r' = r + s >= 2")
    budget = order_budget(budget)
    left, right = _CM_KINDS[kind]
    N, start = min(64, budget), 0
    while True:
        seqs = cm_sequences(r, s, N)
        lhs, rhs = seqs[left], seqs[right]
        m = next((i for i in range(start, N + 1) if lhs[i] < rhs[i]), None)
        if m is not None:
            return m
        if N >= budget:
            raise BudgetExceeded(f"no crossing up to order {budget}")
        start, N = N + 1, min(2 * N, budget)


def verify_relaxation(r: int, s: int, order: int) -> CheckReport:
    """``a_n <= a_tilde_n`` and ``a_tilde_n <= (n+1)^(r') p(n)``."""
    seqs = cm_sequences(r, s, order)
    p = partition_numbers(order).p_values
    rp = r + s
    bad = next((n for n in range(order + 1) if seqs["a"][n] > seqs["a_tilde"][n]), None)
    bad2 = next((n for n in range(order + 1) if seqs["a_tilde"][n] > (n + 1) ** rp * p[n]), None)
    detail = {}
    if bad is not None:
        detail["a_exceeds_a_tilde_at"] = bad
    if bad2 is not None:
        detail["a_tilde_exceeds_bound_at"] = bad2
    return CheckReport("cm_relaxation", {"r": r, "s": s, "order": order}, not detail, detail)


def verify_middle_terms(order: int) -> CheckReport:
    """``b_n >= p(n/2)^2`` (n even) and ``b_n >= 2 p((n-1)/2) p((n+1)/2)`` (n odd)."""
    b = f_squared(order)
    p = partition_numbers(order).p_values
    def middle(n):
        h = n // 2
        return p[h] ** 2 if n % 2 == 0 else 2 * p[h] * p[h + 1]
    bad = next((n for n in range(order + 1) if b[n] < middle(n)), None)
    return CheckReport("cm_middle_terms", {"order": order}, bad is None,
                       {} if bad is None else {"first_violation": bad})


def verify_B_chain(order: int) -> CheckReport:
    """``c'_i + 1 <= B_i <= b_i <= (i+1) p(i)^2`` for ``1 <= i <= order``."""
    loc = cm_local_series(order)
    seqs = cm_sequences(0, 0, order)
    p = partition_numbers(order).p_values
    B, b = seqs["B"], seqs["b"]
    bad = next((i for i in range(1, order + 1)
                if not (loc[i] + 1 <= B[i] <= b[i] <= (i + 1) * p[i] ** 2)), None)
    return CheckReport("cm_B_chain", {"order": order}, bad is None,
                       {} if bad is None else {"first_violation": bad})


def verify_asymptotic_bounds(r_prime: int, order: int, C1: EmpiricalConstant,
                             C2: EmpiricalConstant) -> CheckReport:
    """``a_tilde_n <= 2^r' C1 n^(r'-1) e^(pi sqrt(2n/3))`` and
    ``b_n >= C2 n^-2 e^(pi sqrt(4n/3))`` for ``1 <= n <= order``."""
    seqs = cm_sequences(r_prime, 0, order)
    c1, c2 = C1.as_fraction(), C2.as_fraction()
    bad_a = bad_b = None
    with precision(96):
        k1 = iv.mpf(c1.numerator) / c1.denominator
        k2 = iv.mpf(c2.numerator) / c2.denominator
        for n in range(1, order + 1):
            growth2 = iv.exp(iv.pi * iv.sqrt(iv.mpf(2 * n) / 3))
            rhs_a = 2 ** r_prime * k1 * iv.mpf(n) ** (r_prime - 1) * growth2
            if bad_a is None and not seqs["a_tilde"][n] <= rhs_a.a:
                bad_a = n
            rhs_b = k2 * iv.exp(iv.pi * iv.sqrt(iv.mpf(4 * n) / 3)) / iv.mpf(n) ** 2
            if bad_b is None and not seqs["b"][n] >= rhs_b.b:
                bad_b = n
    detail = {}
    if bad_a is not None:
        detail["global_asymptotic_fails_at"] = bad_a
    if bad_b is not None:
        detail["local_asymptotic_fails_at"] = bad_b
    return CheckReport("cm_asymptotics", {"r_prime": r_prime, "order": order,
                                          "C1": C1.value, "C2": C2.value},
                       not detail, detail)


# ---------------------------------------------------------------------------
# the gamma function of the crossing analysis

@dataclass
class GammaCrossing:
    r_prime: int
    u_star: str
    x_star: str
    derivative_at_4r: str
    increasing_from_4r: bool
    ratio: str

    def to_json(self) -> dict:
        return dict(self.__dict__)


def cm_gamma_crossing(r_prime: int, C1: EmpiricalConstant | None,
                      C2: EmpiricalConstant | None) -> GammaCrossing:
    """Where ``gamma(u) = tau u - 2(r'+1) log u + log C2 - log C1 - r' log 2`` turns
    positive for good, and whether ``gamma' > 0.06`` from ``u = 4 r'`` on."""
    if C1 is None or C2 is None:
        raise MissingConstants("C1 and C2 are required")
    if r_prime < 2:
        raise InvalidParams("r' must be >= 2")
    c1, c2 = C1.as_fraction(), C2.as_fraction()
    with precision(96):
        T = tau()
        deriv = T - iv.mpf(2 * (r_prime + 1)) / (4 * r_prime)
        increasing = deriv.a > iv.mpf(0.06).b
        deriv_text = lower_decimal(deriv, 6)
    mp.prec = 96
    t = mp.mpf(T.a)
    const = mp.log(mp.mpf(c2.numerator) / c2.denominator) - \
        mp.log(mp.mpf(c1.numerator) / c1.denominator) - r_prime * mp.log(2)
    gamma = lambda u: t * u - 2 * (r_prime + 1) * mp.log(u) + const
    # gamma is convex; its last zero lies right of the minimiser
    u_min = 2 * (r_prime + 1) / t
    if gamma(u_min) > 0:
        u_star = mp.mpf(0)
    else:
        hi = 2 * u_min
        while gamma(hi) <= 0:
            hi *= 2
        u_star = mp.findroot(gamma, (u_min, hi), solver="bisect")
    ratio = u_star / (r_prime * mp.log(r_prime))
    return GammaCrossing(r_prime, mp.nstr(u_star, 10), mp.nstr(u_star ** 2, 10), deriv_text,
                         increasing, mp.nstr(ratio, 8))


# ---------------------------------------------------------------------------
# CM bound

@dataclass(frozen=True)
class CMData:
    r: int
    s: int
    p: int
    points_mod_p: int
    t_bad: int
    unconditional: bool = False
    r1: int | None = None
    C1: str | None = None

    def __post_init__(self):
        for name in ("r", "s", "points_mod_p", "t_bad"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidParams(f"{name} must be a non-negative integer")
        if not is_prime(self.p):
            from .errors import NotPrime
            raise NotPrime(f"p={self.p} is not prime")
        if self.points_mod_p < 1:
            raise InvalidParams("points_mod_p counts the origin, so it is >= 1")
        if self.unconditional and self.r1 is None:
            raise InvalidParams("the unconditional variant needs r1 = r_p + delta")
        if self.r_prime < 2:
            raise InvalidParams(f"r' = {self.r_prime} but at least 2 is required")

    @property
    def rank(self) -> int:
        return self.r1 if self.unconditional else self.r

    @property
    def r_prime(self) -> int:
        return self.rank + self.s

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, "p": self.p, "points_mod_p": self.points_mod_p,
                "t_bad": self.t_bad, "unconditional": self.unconditional, "r1": self.r1,
                "C1": self.C1}

    @classmethod
    def from_json(cls, data: dict) -> "CMData":
        C1 = data.get("C1")
        return cls(int(data["r"]), int(data["s"]), int(data["p"]), int(data["points_mod_p"]),
                   int(data["t_bad"]), bool(data.get("unconditional", False)),
                   None if data.get("r1") is None else int(data["r1"]),
                   None if C1 is None else str(C1))


CM_SCHEMA = {
    "type": "object",
    "required": ["r", "s", "p", "points_mod_p", "t_bad"],
    "properties": {
        "r": {"type": "integer", "minimum": 0},
        "s": {"type": "integer", "minimum": 0},
        "p": {"type": "integer", "minimum": 2},
        "points_mod_p": {"type": "integer", "minimum": 1},
        "t_bad": {"type": "integer", "minimum": 0},
        "unconditional": {"type": "boolean"},
        "r1": {"type": ["integer", "null"], "minimum": 0},
        "C1": {"type": ["string", "number", "null"]},
    },
    "additionalProperties": False,
}


@dataclass
class CMBoundReport:
    mode: str
    m0: int
    m_A: int
    r_prime: int
    kappa: Kappa
    kappa_text: str
    factors: dict
    bound_exact: int | None
    bound_log10: str
    closed_form_log10: str | None = None
    unconditional: bool = False
    conjectural: bool = True
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "m": self.m0,
            "m_A": self.m_A,
            "r_prime": self.r_prime,
            "kappa_p": self.kappa.to_json(),
            "kappa": self.kappa_text,
            "factors": jsonable(self.factors),
            "bound_exact": None if self.bound_exact is None else jsonable(self.bound_exact),
            "bound_exact_digits": None if self.bound_exact is None
            else decimal_digits(self.bound_exact),
            "bound_log10": self.bound_log10,
            "closed_form_log10": self.closed_form_log10,
            "unconditional": self.unconditional,
            "conjectural": self.conjectural and not self.unconditional,
            "notes": list(self.notes),
        }


def _exp_sum_sqrt(m: int):
    total = iv.mpf(0)
    for i in range(1, m + 1):
        total += iv.sqrt(i)
    return total


def asymptotic_log10(d: CMData, m0: int, C1: Fraction):
    """Enclosures of ``log10`` of the majorant with ``1/m0!`` kept, and of the
    closed form ``exp(m0 log(8 C1^2) + 2 pi sqrt(2/3) ((2/3) m0^(3/2) + m0^(1/2) / 2))``."""
    k = kappa_p(d.p)
    c1 = iv.mpf(C1.numerator) / C1.denominator
    base = k.log10_interval() + iv.log10(iv.mpf((d.points_mod_p - 1) * 5 ** d.t_bad)) \
        if d.points_mod_p > 1 else None
    if base is None:
        return None, None
    ln10 = iv.log(10)
    two_pi = 2 * iv.pi * iv.sqrt(iv.mpf(2) / 3)
    kept = base + (m0 * iv.log(4 * 2 * c1 ** 2) - iv.loggamma(m0 + 1)
                   + two_pi * _exp_sum_sqrt(m0)) / ln10
    rm = iv.sqrt(m0)
    closed = base + (m0 * iv.log(8 * c1 ** 2)
                     + two_pi * (iv.mpf(2) / 3 * m0 * rm + rm / 2)) / ln10
    return kept, closed


def cm_bound(d: CMData, mode: str = "exact", budget: int | None = None) -> CMBoundReport:
    """``kappa_p (#E(F_p) - 1) 5^t 4^m0 prod_{i=1}^{m0} B_i`` in exact mode, or the
    ``C1``-majorant in asymptotic mode; ``m0`` is the relaxed crossing."""
    if mode not in ("exact", "asymptotic"):
        raise InvalidParams(f"unknown mode {mode!r}")
    if mode == "asymptotic" and d.C1 is None:
        raise MissingC1("asymptotic mode needs a C1 constant")
    m0 = cm_find_minimal_m(d.rank, d.s, budget, "tilde")
    try:
        m_A = cm_find_minimal_m(d.rank, d.s, budget, "A")
    except BudgetExceeded:
        m_A = None
    k = kappa_p(d.p)
    scale = (d.points_mod_p - 1) * 5 ** d.t_bad
    factors = {"points_minus_one": d.points_mod_p - 1, "five_power": 5 ** d.t_bad,
               "four_power": 4 ** m0}
    notes = []
    with precision(64):
        kappa_text = upper_decimal(k.interval() * scale, 6)
    if scale == 0:
        notes.append("#E(F_p) = 1 makes the bound 0")
    if mode == "exact":
        B = cm_sequences(0, 0, m0)["B"]
        prodB = product_tree(B[1:m0 + 1])
        factors["prod_B"] = prodB
        P = scale * 4 ** m0 * prodB
        bound = k.ceil_times(P) if P else 0
        log10 = (log10_upper(lambda: k.log10_interval() + iv.log10(iv.mpf(P)))
                 if P else "-inf")
        return CMBoundReport(mode, m0, m_A, d.r_prime, k, kappa_text, factors, bound, log10,
                             None, d.unconditional, True, notes)
    C1 = Fraction(d.C1)
    def decide_kept(pair):
        kept, _ = pair
        return upper_decimal(kept, 6) if width_ok(kept, 6) else None
    def decide_closed(pair):
        _, closed = pair
        return upper_decimal(closed, 6) if width_ok(closed, 6) else None
    if scale == 0:
        return CMBoundReport(mode, m0, m_A, d.r_prime, k, kappa_text, factors, None, "-inf",
                             "-inf", d.unconditional, True, notes)
    build = lambda: asymptotic_log10(d, m0, C1)
    kept = refine(build, decide_kept)
    closed = refine(build, decide_closed)
    factors["C1"] = d.C1
    return CMBoundReport(mode, m0, m_A, d.r_prime, k, kappa_text, factors, None, kept,
                         closed, d.unconditional, True, notes)


def verify_sqrt_sum(max_m: int = 10_000) -> CheckReport:
    bad = sqrt_sum_check(max_m)
    return CheckReport("sqrt_sum", {"max_m": max_m}, bad is None,
                       {} if bad is None else {"first_violation": bad})


# ---------------------------------------------------------------------------
# thrice-punctured line, polylogarithmic quotient

def polylog_local_series(order: int) -> QSeries:
    """``(1-t^2)^-2 prod_{k>=4 even} (1-t^k)^-1``."""
    e = [0] * order
    for k in range(2, order + 1, 2):
        e[k - 1] = 2 if k == 2 else 1
    return product_form(e, order)


def polylog_global_majorant(s: int, order: int) -> QSeries:
    """``(1-t^2)^-s prod_{k>=3, k = 2 mod 4} (1-t^k)^-1``."""
    if s < 0:
        raise InvalidParams("s must be non-negative")
    e = [0] * order
    for k in range(2, order + 1, 4):
        e[k - 1] = s if k == 2 else 1
    return product_form(e, order)


def _in_t_squared(values, order: int) -> QSeries:
    out = [0] * (order + 1)
    for n, v in enumerate(values):
        if 2 * n > order:
            break
        out[2 * n] = v
    return QSeries.from_coeffs(out, order)


def verify_polylog_identities(order: int) -> CheckReport:
    """``HS'_loc = (1-t^2)^-1 sum p(n) t^2n`` and ``prod_{k = 2 mod 4} (1-t^k)^-1 = sum q(n) t^2n``."""
    tab = partition_numbers(order // 2)
    lhs1 = polylog_local_series(order)
    rhs1 = _in_t_squared(partial_sums(list(tab.p_values)), order)
    e = [0] * order
    for k in range(2, order + 1, 4):
        e[k - 1] = 1
    lhs2 = product_form(e, order)
    rhs2 = _in_t_squared(tab.q_values, order)
    # the global majorant rewritten with q
    lhs3 = polylog_global_majorant(3, order)
    rhs3 = _in_t_squared(partial_sums(list(tab.q_values), 2), order)
    detail = {}
    if lhs1 != rhs1:
        detail["local_mismatch"] = True
    if lhs2 != rhs2:
        detail["odd_parts_mismatch"] = True
    if lhs3 != rhs3:
        detail["majorant_mismatch"] = True
    return CheckReport("polylog_identities", {"order": order}, not detail, detail)


def polylog_sequences(s: int, N: int) -> tuple[list[int], list[int]]:
    """In ``u = t^2``: ``(1-u)^-1 sum p(n) u^n`` and ``(1-u)^-(s-1) sum q(n) u^n``."""
    tab = partition_numbers(N)
    loc = partial_sums(list(tab.p_values))
    glob = list(tab.q_values)
    glob = partial_sums(glob, s - 1) if s >= 1 else times_one_minus(glob)
    return loc, glob


def polylog_find_minimal_m(s: int, budget: int | None = None) -> int:
    """Smallest ``m`` where ``[t^m]`` of the majorant over ``1-t`` is below that of ``HS'_loc/(1-t)``."""
    if s < 1:
        raise InvalidParams("s must be >= 1")
    budget = order_budget(budget)
    top = budget // 2
    N, start = min(64, top), 0
    while True:
        loc, glob = polylog_sequences(s, N)
        L, G = partial_sums(loc), partial_sums(glob)
        n = next((i for i in range(start, N + 1) if G[i] < L[i]), None)
        if n is not None:
            return 2 * n
        if N >= top:
            raise BudgetExceeded(f"no crossing up to order {budget}")
        start, N = N + 1, min(2 * N, top)


# ---------------------------------------------------------------------------
# growth fits

def shape(x: int) -> float:
    return x * x * math.log(x) ** 2


@dataclass
class GrowthFit:
    name: str
    values: dict
    ratios: dict
    constant: float

    def bounded(self) -> bool:
        return all(ratio <= self.constant for ratio in self.ratios.values())

    def to_json(self) -> dict:
        return {"name": self.name, "values": self.values,
                "ratios": {k: round(v, 6) for k, v in self.ratios.items()},
                "constant": self.constant, "shape": "x^2 log(x)^2"}


def fit_growth(name: str, values: dict) -> GrowthFit:
    ratios = {k: v / shape(k) for k, v in values.items()}
    return GrowthFit(name, dict(values), ratios, max(ratios.values()))
