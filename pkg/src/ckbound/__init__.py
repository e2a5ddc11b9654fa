"""Exact Hilbert-series computations and explicit point-count bounds for hyperbolic curves."""

from .errors import CKBoundError
from .series import QSeries
from .hilbert import CurveData, BadPrime, extract_exponents, product_form
from .bounds import compute_bound, find_minimal_m
from .cm import CMData, cm_bound

__all__ = [
    "BadPrime",
    "CKBoundError",
    "CMData",
    "CurveData",
    "QSeries",
    "cm_bound",
    "compute_bound",
    "extract_exponents",
    "find_minimal_m",
    "product_form",
]

__version__ = "0.1.0"
