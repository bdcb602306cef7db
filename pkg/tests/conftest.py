import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from utcompat.scalars import QQ, PrimeField
from utcompat.utalg import Element, Product, basis

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

F2, F3, F5, F7 = (PrimeField(p) for p in (2, 3, 5, 7))
FIELDS = [QQ, F2, F5, F7]


def small_values(field):
    if field == QQ:
        return st.fractions(min_value=-6, max_value=6, max_denominator=5)
    return st.integers(min_value=0, max_value=field.p - 1)


@st.composite
def elements(draw, n, field):
    coeffs = {}
    for e in basis(n):
        if draw(st.booleans()):
            coeffs[e] = draw(small_values(field))
    return Element(n, field, coeffs)


@st.composite
def products(draw, n, field, density=0.3):
    table = {}
    bas = basis(n)
    for a in bas:
        for b in bas:
            if draw(st.floats(0, 1)) < density:
                table[(a, b)] = {s: draw(small_values(field)) for s in bas
                                 if draw(st.floats(0, 1)) < density}
    return Product(n, field, table)


def random_element(n, field, rng, density=0.5):
    return Element(n, field, {e: field.random(rng) for e in basis(n) if rng.random() < density})


@pytest.fixture
def rng():
    return random.Random(20261017)


# Acceptance criteria register their verdicts here so that the terminal
# summary lists one line per criterion even when output is captured.
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {text}")


__all__ = ["F2", "F3", "F5", "F7", "FIELDS", "Fraction", "elements", "products",
           "random_element", "small_values", "ACCEPTANCE"]
