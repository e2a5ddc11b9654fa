"""
The Grothendieck ring Z[xi]/(xi^2 - 1) of C2-representations.

``xi`` is the sign character.  Only what the Hilbert-series formulas need is
modelled: products, symmetric powers, and the two specialisations
``dim(a + b xi) = a + b`` and ``sgn(a + b xi) = a - b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import QSeries, RationalFunction, expand, poly_mul, poly_pow


def s_int(a: int, i: int) -> int:
    """Symmetric power ``s^i`` in the lambda-ring Z, valid for negative ``a``.

    ``s^i(a) = C(a+i-1, i)`` for ``a >= 0`` and ``s^i(-m) = (-1)^i C(m, i)``.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return 1
    if a >= 0:
        return math.comb(a + i - 1, i)
    return (-1) ** i * math.comb(-a, i)


@dataclass(frozen=True)
class C2Class:
    a: int = 0
    b: int = 0

    def __add__(self, other):
        other = _promote(other)
        return C2Class(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return C2Class(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_promote(other))

    def __mul__(self, other):
        other = _promote(other)
        return C2Class(self.a * other.a + self.b * other.b,
                       self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def dim(self) -> int:
        return self.a + self.b

    def sgn(self) -> int:
        return self.a - self.b

    def fixed_dim(self) -> int:
        """Dimension of the invariants, ``(dim + sgn) / 2``."""
        return self.a

    def is_effective(self) -> bool:
        return self.a >= 0 and self.b >= 0

    def __str__(self):
        return f"{self.a}+{self.b}xi"


XI = C2Class(0, 1)
ONE = C2Class(1, 0)


def _promote(x) -> C2Class:
    if isinstance(x, C2Class):
        return x
    if isinstance(x, int):
        return C2Class(x, 0)
    raise TypeError(f"cannot promote {type(x).__name__} to C2Class")


def symmetric_power(c: C2Class, k: int) -> C2Class:
    """``s^k(a + b xi) = sum_{i+j=k} s^i(a) s^j(b) xi^j``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    trivial = sign = 0
    for j in range(k + 1):
        term = s_int(c.a, k - j) * s_int(c.b, j)
        if j % 2:
            sign += term
        else:
            trivial += term
    return C2Class(trivial, sign)


@dataclass(frozen=True)
class C2Series:
    """A power series with C2Class coefficients, stored as its two integer parts."""

    one: QSeries
    xi: QSeries

    @property
    def order(self) -> int:
        return min(self.one.order, self.xi.order)

    def dim(self) -> QSeries:
        return self.one + self.xi

    def sgn(self) -> QSeries:
        return self.one - self.xi

    def __getitem__(self, k) -> C2Class:
        return C2Class(int(self.one[k]), int(self.xi[k]))

    def __mul__(self, other: "C2Series") -> "C2Series":
        return C2Series(self.one * other.one + self.xi * other.xi,
                        self.one * other.xi + self.xi * other.one)


def power_series_with_class_exponent(c: C2Class, order: int) -> C2Series:
    """``(1 - t)^(-c) = sum_k s^k(c) t^k``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    powers = [symmetric_power(c, k) for k in range(order + 1)]
    return C2Series(QSeries(tuple(p.a for p in powers), order),
                    QSeries(tuple(p.b for p in powers), order))


def _binomial_rf(a: int, b: int) -> RationalFunction:
    """``(1-t)^(-a) (1+t)^(-b)`` as a rational function."""
    num, den = (1,), (1,)
    if a >= 0:
        den = poly_mul(den, poly_pow((1, -1), a))
    else:
        num = poly_mul(num, poly_pow((1, -1), -a))
    if b >= 0:
        den = poly_mul(den, poly_pow((1, 1), b))
    else:
        num = poly_mul(num, poly_pow((1, 1), -b))
    return RationalFunction(num, den)


@dataclass(frozen=True)
class SignImageReport:
    c: C2Class
    order: int
    holds: bool
    first_mismatch: int | None = None


def verify_sign_image(c: C2Class, order: int) -> SignImageReport:
    """Compare ``sgn((1-t)^(-a-b xi))`` with ``(1-t)^(-a) (1+t)^(-b)`` to ``order``."""
    lhs = power_series_with_class_exponent(c, order).sgn()
    rhs = expand(_binomial_rf(c.a, c.b), order)
    for i in range(order + 1):
        if lhs[i] != rhs[i]:
            return SignImageReport(c, order, False, i)
    return SignImageReport(c, order, True)
