"""Shared fixtures: bundled tori and a generator of random rational tori."""

import random
from fractions import Fraction

import pytest

from torusgerbes.errors import SingularImaginaryPart
from torusgerbes.exact_algebra import ComplexElement, rational_algebra
from torusgerbes.spec_files import FIXTURE_NAMES, load_fixture
from torusgerbes.torus import TorusSpec


@pytest.fixture(scope="session")
def fixtures():
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session", params=FIXTURE_NAMES)
def fixture_torus(request, fixtures):
    return fixtures[request.param]


def random_rational(rng, bound=9, den=4):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_rational_torus(g, seed):
    """A torus over Q with random rational tau; retries until Im(tau) is invertible."""
    rng = random.Random(seed)
    alg = rational_algebra()
    while True:
        tau = [[ComplexElement(alg.rational(random_rational(rng)), alg.rational(random_rational(rng)))
                for _ in range(g)] for _ in range(g)]
        try:
            return TorusSpec(g, alg, tau)
        except SingularImaginaryPart:
            continue


# --- acceptance bookkeeping: one summary line per criterion -------------------

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(ACCEPTANCE, key=lambda e: e["number"]):
        terminalreporter.write_line(entry["line"])
