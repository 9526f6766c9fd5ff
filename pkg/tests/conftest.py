import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from hopfgreen.algebra import make_truncated_algebra  # noqa: E402
from hopfgreen.field import make_field  # noqa: E402

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def algebra(p, orders, k=1):
    return make_truncated_algebra(make_field(p, k), orders)


@pytest.fixture(scope="session")
def kron():
    return algebra(2, [1, 1])


@pytest.fixture(scope="session")
def x4():
    return algebra(2, [2])


@pytest.fixture(scope="session")
def x8():
    return algebra(2, [3])
