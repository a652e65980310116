import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gbs.arith import factorize
from gbs.group import BSGroup, GroupElement

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

KS = (6, 10, 12)


def zk_values(k: int, max_exp: int = 5, max_num: int = 10**6):
    """Strategy for elements of Z[1/k]."""
    fact = factorize(k)

    @st.composite
    def build(draw):
        den = 1
        for p, m in fact.primes:
            den *= p ** draw(st.integers(0, m * max_exp))
        return Fraction(draw(st.integers(-max_num, max_num)), den)

    return build()


def elements(G: BSGroup, max_exp: int = 3, box: int = 3):
    return st.builds(
        GroupElement,
        zk_values(G.k, max_exp, 1000),
        st.tuples(*[st.integers(-box, box) for _ in range(G.n)]),
    )


@pytest.fixture(scope="session")
def G6():
    return BSGroup(6)


@pytest.fixture(scope="session")
def G12():
    return BSGroup(12)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
