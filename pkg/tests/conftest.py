import math

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from psafiber.fwm import FiberParams, MuNu, PumpConfigA, PumpConfigB

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GAMMA = 11.3e-3
LENGTH = 300.0


@pytest.fixture
def two_pump():
    return FiberParams(GAMMA, 4.53e-11, LENGTH), PumpConfigA(0.2, 0.2)


@pytest.fixture
def single_pump():
    return FiberParams(GAMMA, -4.54e-11, LENGTH), PumpConfigB(0.23)


phases = st.floats(-math.pi, math.pi)


@st.composite
def munu(draw, max_nu=50.0):
    return MuNu.from_polar(draw(st.floats(0.0, max_nu)), draw(phases), draw(phases))


@st.composite
def fiber_and_pumps_a(draw):
    fiber = FiberParams(
        draw(st.floats(1e-3, 2e-2)),
        draw(st.floats(-0.05, 0.05)),
        draw(st.floats(0.0, 1000.0)),
    )
    pumps = PumpConfigA(draw(st.floats(0.01, 1.0)), draw(st.floats(0.01, 1.0)), draw(phases), draw(phases))
    return fiber, pumps


@st.composite
def fiber_and_pump_b(draw):
    fiber = FiberParams(
        draw(st.floats(1e-3, 2e-2)),
        draw(st.floats(-0.05, 0.05)),
        draw(st.floats(0.0, 1000.0)),
    )
    return fiber, PumpConfigB(draw(st.floats(0.01, 1.0)), draw(phases))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda l: int(l.split()[2])):
        terminalreporter.write_line(line)
