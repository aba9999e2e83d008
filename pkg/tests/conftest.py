import math

import numpy as np
import pytest
from hypothesis import strategies as st

from nhcircuit.model import CircuitParams
from nhcircuit.selftest import random_params

FUZZ_DRAWS = 10_000


@pytest.fixture
def fig2():
    return CircuitParams()


@pytest.fixture
def symmetric():
    """Equal Lamb-shifted detunings and equal Gamma, phase difference pi/2."""
    return CircuitParams(omega_q=(4500.0, 4500.0), g_qc=(30.0, 30.0), gamma_q=(1.0, 1.0)).with_delta_theta(math.pi / 2)


def fuzz_params(n=FUZZ_DRAWS, seed=12345):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield random_params(rng)


@st.composite
def circuit_params(draw):
    omega_a = draw(st.floats(4000, 5000))
    omega_q = (omega_a + draw(st.floats(-100, 100)), omega_a + draw(st.floats(-100, 100)))
    return CircuitParams(
        omega_a=omega_a,
        omega_q=omega_q,
        omega_c=max(omega_q) + draw(st.floats(200, 1500)),
        gamma_q=(draw(st.floats(0, 5)), draw(st.floats(0, 5))),
        gamma_a=draw(st.floats(10, 500)),
        g_xy=draw(st.floats(-10, 10)),
        g_qc=(draw(st.floats(0, 50)), draw(st.floats(0, 50))),
        lambda_q=(draw(st.floats(0, 30)), draw(st.floats(0, 30))),
        theta_q=(draw(st.floats(0, 2 * math.pi)), draw(st.floats(0, 2 * math.pi))),
        sigma_z=(draw(st.floats(-1, 1)), draw(st.floats(-1, 1))),
    )


# acceptance reporting: one line per criterion at the end of the run

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.fixture
def measured():
    """Collects ``name=value`` strings that the summary line echoes for a criterion."""
    return []


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    ok = call.excinfo is None
    notes = list(item.funcargs.get("measured", []))
    prev = _CRITERIA.get(n)
    if prev is not None:
        ok, notes = prev[1] and ok, prev[2] + notes
    _CRITERIA[n] = (title, ok, notes)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok, notes = _CRITERIA[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if notes:
            line += "  [" + "; ".join(notes) + "]"
        terminalreporter.write_line(line)
