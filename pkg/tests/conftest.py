from fractions import Fraction

import pytest
from hypothesis import strategies as st

from momentbounds import make_atomic
from momentbounds.kernels import available_backends

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def two_point():
    return make_atomic([-0.5, 0.5], [0.5, 0.5])


def exact_expect(mu, g):
    """sum w_i g(x_i) in rationals, with g acting on Fractions."""
    return sum(Fraction(w) * g(Fraction(x)) for x, w in zip(mu.atoms, mu.weights))


atom = st.floats(min_value=-0.999, max_value=0.999, allow_nan=False)
weight = st.floats(min_value=1e-6, max_value=1.0, allow_nan=False)


@st.composite
def measures(draw, max_atoms=8):
    n = draw(st.integers(min_value=1, max_value=max_atoms))
    xs = draw(st.lists(atom, min_size=n, max_size=n))
    ws = draw(st.lists(weight, min_size=n, max_size=n))
    return make_atomic(xs, ws)
