from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ckbound.series import QSeries

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def unit_series(draw, max_order=12):
    """Series with constant term 1 and small rational coefficients."""
    order = draw(st.integers(0, max_order))
    tail = draw(st.lists(small_fractions, min_size=order, max_size=order))
    return QSeries.from_coeffs([Fraction(1), *tail], order)


@st.composite
def any_series(draw, max_order=12):
    order = draw(st.integers(0, max_order))
    values = draw(st.lists(small_fractions, min_size=order + 1, max_size=order + 1))
    return QSeries.from_coeffs(values, order)


# ---------------------------------------------------------------------------
# acceptance criteria reporting

import contextlib

import pytest

_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """``with criterion(3, "title"):`` records PASS or FAIL for the summary."""
    results = request.config.stash.setdefault(_CRITERIA, {})

    @contextlib.contextmanager
    def record(number: int, title: str):
        try:
            yield
        except BaseException as exc:
            results[number] = ("FAIL", title, str(exc).splitlines()[0] if str(exc) else "")
            raise
        results[number] = ("PASS", title, "")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, title, why = results[number]
        line = f"{status} criterion {number:2d}: {title}"
        if why:
            line += f"  ({why[:160]})"
        terminalreporter.write_line(line)
