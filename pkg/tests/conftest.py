import pytest

from sbmetric import SamplerConfig

ACCEPTANCE_LINES: list = []


@pytest.fixture
def small_cfg():
    """Coarse grid and few random draws, for property checks that run many times."""
    return SamplerConfig(seed=7, lo=-3, hi=3, step=1, random_count=300)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
