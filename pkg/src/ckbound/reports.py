"""Verification reports and JSON helpers shared by every module."""

from __future__ import annotations

import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction


@contextmanager
def unlimited_int_digits():
    """Lift the interpreter's int<->str digit cap for the duration of the block."""
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def int_to_str(n: int) -> str:
    with unlimited_int_digits():
        return str(n)


def str_to_int(s: str) -> int:
    with unlimited_int_digits():
        return int(s)


def decimal_digits(n: int) -> int:
    """Exact number of decimal digits of ``|n|`` (``1`` for zero)."""
    n = abs(n)
    if n < 10:
        return 1
    # bit_length bounds the answer to within one; settle it with one power of ten
    guess = int((n.bit_length() - 1) * math.log10(2)) + 1
    if n >= 10 ** guess:
        return guess + 1
    if n < 10 ** (guess - 1):
        return guess - 1
    return guess


def log10_int(n: int) -> float:
    """Floating-point ``log10`` of a positive integer of any size."""
    if n <= 0:
        raise ValueError("log10 of a non-positive integer")
    bits = n.bit_length()
    if bits <= 1000:
        return math.log10(n)
    shift = bits - 64
    return math.log10(n >> shift) + shift * math.log10(2)


# integers at or beyond this magnitude are emitted as digit strings
SAFE_INT = 2 ** 53


def jsonable(value):
    """Recursively render big ints as digit strings and Fractions as ``p/q`` strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value if abs(value) < SAFE_INT else int_to_str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class CheckReport:
    """Outcome of one verification case."""

    name: str
    params: dict
    holds: bool
    detail: dict = field(default_factory=dict)
    skipped: bool = False

    def __bool__(self):
        return self.holds

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIP"
        return "PASS" if self.holds else "FAIL"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": jsonable(self.params),
            "holds": self.holds,
            "detail": jsonable(self.detail),
            "skipped": self.skipped,
        }

    def line(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in self.params.items())
        status = self.status
        extra = ""
        if (not self.holds or self.skipped) and self.detail:
            extra = " " + ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{status} {self.name}[{params}]{extra}"


CHECK_REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "params", "holds", "detail"],
    "properties": {
        "name": {"type": "string"},
        "params": {"type": "object"},
        "holds": {"type": "boolean"},
        "detail": {"type": "object"},
        "skipped": {"type": "boolean"},
    },
}
