"""
Certified real arithmetic on top of mpmath's interval context.

Every quantity here is an enclosure ``[lo, hi]``; decisions (comparisons,
floors, ceilings) are only taken once the enclosure is narrow enough to make
them unambiguous, raising the working precision otherwise.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import from_int, mpf_cmp, round_ceiling, round_floor, to_int

from .errors import NotPrime

DEFAULT_PREC = 96
MAX_PREC = 1 << 24


@contextmanager
def precision(bits: int):
    old = iv.prec
    iv.prec = max(bits, 53)
    try:
        yield
    finally:
        iv.prec = old


def _ends(x):
    return x._mpi_


def floor_lo(x) -> int:
    return int(to_int(_ends(x)[0], round_floor))


def ceil_hi(x) -> int:
    return int(to_int(_ends(x)[1], round_ceiling))


def width_ok(x, places: int) -> bool:
    """Is the enclosure narrower than ``10^-(places+1)``?"""
    scaled = (x.delta * iv.mpf(10) ** (places + 1))._mpi_[1]
    return mpf_cmp(scaled, from_int(1)) < 0


def upper_decimal(x, places: int = 6) -> str:
    """Decimal string ``>= hi`` with ``places`` fractional digits."""
    scaled = ceil_hi(x * 10 ** places)
    return _fixed(scaled, places)


def lower_decimal(x, places: int = 6) -> str:
    scaled = floor_lo(x * 10 ** places)
    return _fixed(scaled, places)


def _fixed(scaled: int, places: int) -> str:
    sign = "-" if scaled < 0 else ""
    q, r = divmod(abs(scaled), 10 ** places)
    return f"{sign}{q}.{r:0{places}d}" if places else f"{sign}{q}"


def refine(build, decided, start: int = DEFAULT_PREC):
    """Evaluate ``build()`` at growing precision until ``decided(value)`` is not None."""
    bits = start
    while bits <= MAX_PREC:
        with precision(bits):
            value = build()
            verdict = decided(value)
        if verdict is not None:
            return verdict
        bits *= 2
    raise ArithmeticError("enclosure did not tighten enough to decide")


def compare_int(n: int, build, start: int = DEFAULT_PREC) -> int:
    """Sign of ``n - x`` for the irrational ``x`` enclosed by ``build()``."""
    fn = from_int(n)

    def decide(x):
        lo, hi = _ends(x)
        if mpf_cmp(lo, fn) > 0:
            return -1
        if mpf_cmp(hi, fn) < 0:
            return 1
        return None
    return refine(build, decide, max(start, n.bit_length() + 64))


def exact_ceiling(build, bits_hint: int = 0) -> int:
    """``ceil(x)`` for an irrational real ``x`` enclosed by ``build()``."""
    def decide(x):
        lo, hi = _ends(x)
        a, b = int(to_int(lo, round_ceiling)), int(to_int(hi, round_ceiling))
        return a if a == b else None
    return refine(build, decide, max(DEFAULT_PREC, bits_hint + 64))


def exact_floor(build, bits_hint: int = 0) -> int:
    def decide(x):
        lo, hi = _ends(x)
        a, b = int(to_int(lo, round_floor)), int(to_int(hi, round_floor))
        return a if a == b else None
    return refine(build, decide, max(DEFAULT_PREC, bits_hint + 64))


def log10_upper(build, places: int = 6) -> str:
    def decide(x):
        return upper_decimal(x, places) if width_ok(x, places) else None
    return refine(build, decide)


def _frac(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


# ---------------------------------------------------------------------------
# kappa_p

@dataclass(frozen=True)
class Kappa:
    """``kappa_p = rational_part + log_coeff / log(p)``."""

    p: int
    rational_part: Fraction
    log_coeff: Fraction

    def interval(self):
        return _frac(self.rational_part) + _frac(self.log_coeff) / iv.log(self.p)

    def upper(self, places: int = 6) -> str:
        return log10_upper(self.interval, places)

    def lower(self, places: int = 6) -> str:
        def decide(x):
            return lower_decimal(x, places) if width_ok(x, places) else None
        return refine(self.interval, decide)

    def log10_interval(self):
        return iv.log10(self.interval())

    def ceil_times(self, P: int) -> int:
        """``ceil(kappa_p * P)`` for a positive integer ``P``."""
        if P <= 0:
            raise ValueError("P must be positive")
        base = self.rational_part * P
        if base.denominator != 1:
            return exact_ceiling(lambda: _frac(base) + _frac(self.log_coeff * P) / iv.log(self.p),
                                 P.bit_length())
        extra = exact_ceiling(lambda: _frac(self.log_coeff * P) / iv.log(self.p),
                              P.bit_length())
        return base.numerator + extra

    def symbolic(self) -> str:
        return f"{self.rational_part} + {self.log_coeff}/log({self.p})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rational_part": str(self.rational_part),
            "log_coeff": str(self.log_coeff),
            "symbolic": self.symbolic(),
            "upper": self.upper(),
        }


def kappa_p(p: int) -> Kappa:
    from .hilbert import is_prime

    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"p={p!r} is not prime")
    if p == 2:
        return Kappa(2, Fraction(2), Fraction(2))
    return Kappa(p, Fraction(1), Fraction(p - 1, p - 2))


# ---------------------------------------------------------------------------
# constants for the g = n = 1 lower-bound window and the CM analysis

def tau():
    """``(sqrt(2) - 1) pi sqrt(2/3)``."""
    return (iv.sqrt(2) - 1) * iv.pi * iv.sqrt(iv.mpf(2) / 3)


def window_upper_interval(r: int, s: int):
    """``(5/4)^(2r+2s-2) / (e^(1/21) pi)``."""
    k = 2 * r + 2 * s - 2
    return (iv.mpf(5) / 4) ** k / (iv.exp(iv.mpf(1) / 21) * iv.pi)


def window_upper(r: int, s: int) -> int:
    """Largest integer ``m`` inside the g = n = 1 lower-bound window."""
    return exact_floor(lambda: window_upper_interval(r, s))


def stirling_rhs(j: int):
    """``4^j / (e^(1/42) sqrt(pi j))``."""
    return iv.mpf(4) ** j / (iv.exp(iv.mpf(1) / 42) * iv.sqrt(iv.pi * j))


def stirling_holds(j: int) -> bool:
    """Certified ``C(2j, j) >= 4^j / (e^(1/42) sqrt(pi j))``."""
    return compare_int(math.comb(2 * j, j), lambda: stirling_rhs(j)) > 0


def sqrt_sum_check(max_m: int) -> int | None:
    """First ``m <= max_m`` violating ``sum_{i<=m} sqrt(i) <= (2/3) m^(3/2) + (1/2) m^(1/2)``.

    Returns ``None`` when the inequality is certified for every ``m``.
    """
    bits = DEFAULT_PREC
    while bits <= 4096:
        with precision(bits):
            total = iv.mpf(0)
            undecided = False
            for m in range(1, max_m + 1):
                total += iv.sqrt(m)
                rm = iv.sqrt(m)
                rhs = iv.mpf(2) / 3 * m * rm + rm / 2
                if total.b <= rhs.a:
                    continue
                if total.a > rhs.b:
                    return m
                undecided = True
                break
            if not undecided:
                return None
        bits *= 2
    raise ArithmeticError("square-root sum comparison undecided")
