"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class CKBoundError(Exception):
    code = "error"


class SeriesError(CKBoundError, ArithmeticError):
    code = "series_error"


class ZeroConstantTerm(SeriesError):
    code = "zero_constant_term"


class ConstantTermNotOne(SeriesError):
    code = "constant_term_not_one"


class NonzeroConstantTerm(SeriesError):
    code = "nonzero_constant_term"


class ZeroDenominatorConstant(SeriesError):
    code = "zero_denominator_constant"


class OrderTooSmall(SeriesError):
    code = "order_too_small"


class NonIntegerExponent(SeriesError):
    code = "non_integer_exponent"


class InvalidParams(CKBoundError, ValueError):
    code = "invalid_params"


class NotHyperbolic(InvalidParams):
    code = "not_hyperbolic"


class InvalidN1(InvalidParams):
    code = "invalid_n1"


class NotPrime(InvalidParams):
    code = "not_prime"


class MissingBadPrimeData(InvalidParams):
    code = "missing_bad_prime_data"


class MissingC1(InvalidParams):
    code = "missing_c1"


class MissingConstants(InvalidParams):
    code = "missing_constants"


class NotFoundBelowCap(CKBoundError):
    code = "not_found_below_cap"


class BudgetExceeded(CKBoundError):
    code = "budget_exceeded"


class UnknownSuite(CKBoundError, ValueError):
    code = "unknown_suite"
