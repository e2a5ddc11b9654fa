"""
Truncated formal power series with exact rational coefficients.

A :class:`QSeries` is known modulo ``t**(order + 1)``.  Binary operations
truncate to the smaller order; nothing ever extends precision.  The hot
loops (products, inverses, log, exp) run on Python integers after clearing
denominators and only fall back to :class:`fractions.Fraction` when a
coefficient genuinely is not integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    ConstantTermNotOne,
    NonzeroConstantTerm,
    OrderTooSmall,
    ZeroConstantTerm,
    ZeroDenominatorConstant,
)

Number = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def _scaled(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    """Clear denominators: returns integers ``A`` and ``D`` with ``coeffs == A / D``."""
    d = 1
    for c in coeffs:
        if c.denominator != 1:
            d = math.lcm(d, c.denominator)
    if d == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (d // c.denominator) for c in coeffs], d


def _support(values: Sequence[int]) -> list[tuple[int, int]]:
    return [(i, v) for i, v in enumerate(values) if v]


@dataclass(frozen=True)
class QSeries:
    """Power series ``sum coeffs[i] t^i`` known modulo ``t^(order+1)``."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        coeffs = tuple(_as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    # -- construction -------------------------------------------------

    @classmethod
    def from_coeffs(cls, values: Iterable, order: int | None = None) -> "QSeries":
        """Build from a (possibly short) coefficient list, padding with zeros."""
        values = list(values)
        if order is None:
            order = max(len(values) - 1, 0)
        values = values[: order + 1]
        values += [0] * (order + 1 - len(values))
        return cls(tuple(values), order)

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls.from_coeffs([], order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.from_coeffs([1], order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Number = 1) -> "QSeries":
        values = [0] * (order + 1)
        if k <= order:
            values[k] = c
        return cls(tuple(values), order)

    # -- basic protocol -----------------------------------------------

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"QSeries([{shown}{more}], order={self.order})"

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise OrderTooSmall(
                f"cannot extend a series known to order {self.order} to {order}")
        return QSeries(self.coeffs[: order + 1], order)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integers(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("series has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def is_nonnegative(self, up_to: int | None = None) -> bool:
        up_to = self.order if up_to is None else up_to
        return all(c >= 0 for c in self.coeffs[: up_to + 1])

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + QSeries.monomial(0, self.order, _as_fraction(other))
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        c = _as_fraction(other)
        return QSeries(tuple(c * x for x in self.coeffs), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, invert(other))
        c = _as_fraction(other)
        return QSeries(tuple(x / c for x in self.coeffs), self.order)

    def __pow__(self, q):
        if isinstance(q, int):
            if q < 0:
                return invert(self) ** (-q)
            result = QSeries.one(self.order)
            base = self
            while q:
                if q & 1:
                    result = result * base
                base = base * base
                q >>= 1
            return result
        return rational_power(self, q)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def agrees_with(self, other: "QSeries", up_to: int | None = None) -> bool:
        """Coefficient equality up to ``up_to`` (default: the shared order)."""
        n = min(self.order, other.order) if up_to is None else up_to
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``t^k`` keeping the order."""
        values = [0] * min(k, self.order + 1) + list(self.coeffs[: max(self.order + 1 - k, 0)])
        return QSeries(tuple(values), self.order)

    def partial_sums(self) -> "QSeries":
        """Coefficients of ``self / (1 - t)``."""
        total = Fraction(0)
        out = []
        for c in self.coeffs:
            total += c
            out.append(total)
        return QSeries(tuple(out), self.order)

    def log(self):
        return log(self)

    def exp(self):
        return exp(self)

    def substitute_power(self, k: int):
        return substitute_power(self, k)

    # -- serialisation ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        return cls(tuple(Fraction(c) for c in data["coeffs"]), int(data["order"]))


@dataclass(frozen=True)
class RationalFunction:
    """``numerator / denominator`` with integer polynomial coefficients, lowest degree first."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(int(c) for c in self.numerator))
        object.__setattr__(self, "denominator", tuple(int(c) for c in self.denominator))
        if not self.denominator or self.denominator[0] == 0:
            raise ZeroDenominatorConstant("denominator must have a nonzero constant term")


def poly_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def poly_pow(p: Sequence[int], e: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for _ in range(e):
        out = poly_mul(out, p)
    return out


def add(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.order, b.order)
    return QSeries(tuple(x + y for x, y in zip(a.coeffs[: n + 1], b.coeffs[: n + 1])), n)


def mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.order, b.order)
    A, da = _scaled(a.coeffs[: n + 1])
    B, db = _scaled(b.coeffs[: n + 1])
    sa, sb = _support(A), _support(B)
    if len(sa) > len(sb):
        sa, sb = sb, sa
    out = [0] * (n + 1)
    for i, x in sa:
        for j, y in sb:
            if i + j > n:
                break
            out[i + j] += x * y
    d = da * db
    return QSeries(tuple(Fraction(v, d) for v in out), n)


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; raises :class:`ZeroConstantTerm` when ``a(0) == 0``."""
    if a.coeffs[0] == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    n = a.order
    A, d = _scaled(a.coeffs)
    a0 = A[0]
    tail = _support(A)[1:]
    # 1/A has coefficients B_m / a0^(m+1) with B_m integral
    B = [1] + [0] * n
    powers = [1]
    for _ in range(n):
        powers.append(powers[-1] * a0)
    for m in range(1, n + 1):
        s = 0
        for k, ak in tail:
            if k > m:
                break
            s += ak * B[m - k] * powers[k - 1]
        B[m] = -s
    return QSeries(tuple(Fraction(d * B[m], powers[m] * a0) for m in range(n + 1)), n)


def log(a: QSeries) -> QSeries:
    """Formal logarithm of a series with constant term 1."""
    if a.coeffs[0] != 1:
        raise ConstantTermNotOne("log needs constant term 1")
    n = a.order
    A, d = _scaled(a.coeffs)
    tail = _support(A)[1:]
    # m*[t^m] log a = N_m / d^m with N_m integral
    N = [0] * (n + 1)
    dpow = [1]
    for _ in range(n):
        dpow.append(dpow[-1] * d)
    for m in range(1, n + 1):
        s = m * A[m] * dpow[m - 1]
        for k, ak in tail:
            if k >= m:
                break
            s -= N[m - k] * ak * dpow[k - 1]
        N[m] = s
    coeffs = [Fraction(0)] + [Fraction(N[m], m * dpow[m]) for m in range(1, n + 1)]
    return QSeries(tuple(coeffs), n)


def exp_from_log_derivative(lam: Sequence[Fraction], order: int) -> QSeries:
    """Series ``b`` with ``b(0) = 1`` and ``m b_m = sum_{k=1}^m lam[k] b_{m-k}``.

    ``lam[k]`` is ``k`` times the ``t^k`` coefficient of ``log b``.
    """
    L, d = _scaled([_as_fraction(x) for x in lam[: order + 1]])
    tail = _support(L)
    tail = [(k, v) for k, v in tail if k >= 1]
    b: list = [1] + [0] * order
    integral = True
    for m in range(1, order + 1):
        s = 0
        for k, lk in tail:
            if k > m:
                break
            s += lk * b[m - k]
        if integral:
            q, r = divmod(s, m * d)
            if r == 0:
                b[m] = q
                continue
            integral = False
        b[m] = Fraction(s, m * d) if isinstance(s, int) else s / (m * d)
    return QSeries(tuple(b), order)


def exp(a: QSeries) -> QSeries:
    """Formal exponential of a series with zero constant term."""
    if a.coeffs[0] != 0:
        raise NonzeroConstantTerm("exp needs constant term 0")
    lam = [Fraction(0)] + [k * a.coeffs[k] for k in range(1, a.order + 1)]
    return exp_from_log_derivative(lam, a.order)


def rational_power(a: QSeries, q) -> QSeries:
    """``a ** q`` for rational ``q`` and ``a(0) == 1``, computed as ``exp(q log a)``."""
    q = _as_fraction(q)
    if a.coeffs[0] != 1:
        raise ConstantTermNotOne("rational powers need constant term 1")
    if q == 0:
        return QSeries.one(a.order)
    return exp(log(a) * q)


def substitute_power(a: QSeries, k: int) -> QSeries:
    """``a(t^k)`` truncated at ``a.order``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    values = [0] * (a.order + 1)
    for i in range(0, a.order // k + 1):
        values[i * k] = a.coeffs[i]
    return QSeries(tuple(values), a.order)


def polynomial(coeffs: Sequence[Number], order: int) -> QSeries:
    return QSeries.from_coeffs(list(coeffs)[: order + 1], order)


def expand(rf: RationalFunction, order: int) -> QSeries:
    """Taylor expansion of a rational function, via invert-then-multiply."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if rf.denominator[0] == 0:
        raise ZeroDenominatorConstant("denominator must have a nonzero constant term")
    return mul(polynomial(rf.numerator, order), invert(polynomial(rf.denominator, order)))


def binomial_series(k: int, e: int, order: int) -> QSeries:
    """``(1 - t^k)^(-e)`` for any integer ``e``."""
    values = [0] * (order + 1)
    for i in range(order // k + 1):
        if e >= 0:
            c = math.comb(e + i - 1, i) if i else 1
        else:
            c = (-1) ** i * math.comb(-e, i)
        values[i * k] = c
    return QSeries(tuple(values), order)


@dataclass(frozen=True)
class ComparisonReport:
    holds: bool
    up_to: int
    first_violation: int | None = None
    lhs_value: Fraction | None = None
    rhs_value: Fraction | None = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {"holds": self.holds, "up_to": self.up_to,
               "first_violation": self.first_violation}
        if self.first_violation is not None:
            out["lhs"] = str(self.lhs_value)
            out["rhs"] = str(self.rhs_value)
        return out


def compare_coefficientwise(a: QSeries, b: QSeries, up_to: int | None = None) -> ComparisonReport:
    """Check ``a_i <= b_i`` for ``i <= up_to``."""
    limit = min(a.order, b.order)
    if up_to is None:
        up_to = limit
    if up_to > limit:
        raise OrderTooSmall(f"comparison to {up_to} needs both series known that far "
                            f"(orders {a.order}, {b.order})")
    for i in range(up_to + 1):
        if a.coeffs[i] > b.coeffs[i]:
            return ComparisonReport(False, up_to, i, a.coeffs[i], b.coeffs[i])
    return ComparisonReport(True, up_to)
