from fractions import Fraction

from hypothesis import strategies as st

from hurwitz.gaussian import GaussianInt, GaussianRational

small_ints = st.integers(min_value=-10**4, max_value=10**4)

gaussian_ints = st.builds(GaussianInt, small_ints, small_ints)
nonzero_gaussian_ints = gaussian_ints.filter(bool)
gaussian_rationals = st.builds(GaussianRational, gaussian_ints, nonzero_gaussian_ints)

# points of D that are not Gaussian rationals with tiny denominators
half_open = st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=10**6).filter(lambda x: x < Fraction(1, 2))
domain_points = st.builds(GaussianRational.from_parts, half_open, half_open)


def words_strategy(max_len=12):
    """HCF words, obtained as expansions of random Gaussian rationals."""
    from hurwitz.hcf import hcf_expand_rational

    return gaussian_rationals.map(lambda z: hcf_expand_rational(z).quotients).filter(lambda w: 0 < len(w) <= max_len)


# acceptance summary: one line per criterion test, printed after the run

import pytest  # noqa: E402

_ACCEPTANCE: list[tuple[str, str, str]] = []


def criterion(label: str, text: str):
    """Tag an acceptance test with its criterion label and statement."""

    def mark(fn):
        fn.criterion = (label, text)
        return fn

    return mark


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    tag = getattr(getattr(item, "function", None), "criterion", None)
    if tag is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((tag[0], "PASS" if report.passed else "FAIL", tag[1]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, text in _ACCEPTANCE:
        terminalreporter.write_line(f"criterion {label:<4} {status}  {text}")
