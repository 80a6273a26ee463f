from fractions import Fraction

from hypothesis import strategies as st

from richlines.lines import Line

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=12)
nonzero_rationals = rationals.filter(lambda q: q != 0)
lines = st.builds(Line, nonzero_rationals, rationals)


def ground_sets(min_size=1, max_size=12):
    return st.sets(
        st.fractions(min_value=-20, max_value=20, max_denominator=4),
        min_size=min_size,
        max_size=max_size,
    )


def L(*pairs):
    return [Line(Fraction(a), Fraction(b)) for a, b in pairs]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
