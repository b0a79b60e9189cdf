import random
from fractions import Fraction

import pytest

from coinduel.model import GameParams


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long reproduction checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running reproduction checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def example_params():
    return GameParams(Fraction(9, 50), Fraction(1, 5))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[2:5])):
            terminalreporter.write_line(line)
