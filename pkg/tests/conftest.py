import pytest
from hypothesis import settings

from ostrowski.invex import InvexSegment, SamplingPlan
from ostrowski.registry import ETA_MAPS, FUNCTIONS

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def trivial():
    return ETA_MAPS["trivial"]


@pytest.fixture
def unit(trivial):
    return InvexSegment(trivial, 0.0, 1.0)


@pytest.fixture
def fns():
    return FUNCTIONS


@pytest.fixture
def coarse_plan():
    return SamplingPlan(n_space=17, n_t=9)
