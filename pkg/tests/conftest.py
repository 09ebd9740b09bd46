import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from divcurve.market import compute_scalars, paper4_universe  # noqa: E402
from divcurve.verification import random_universes  # noqa: E402

SIGMA4 = [
    [185.0, 86.5, 80.0, 20.0],
    [86.5, 196.0, 76.0, 13.5],
    [80.0, 76.0, 411.0, -19.0],
    [20.0, 13.5, -19.0, 25.0],
]
MU_HI = [14.0, 12.0, 15.0, 7.0]
MU_LO = [0.14, 0.12, 0.15, 0.7]
RANDOM_SEED = 20240611


@pytest.fixture(scope="session")
def hi():
    return paper4_universe("MU_HI")


@pytest.fixture(scope="session")
def lo():
    return paper4_universe("MU_LO")


@pytest.fixture(scope="session")
def s_hi(hi):
    return compute_scalars(hi)


@pytest.fixture(scope="session")
def s_lo(lo):
    return compute_scalars(lo)


@pytest.fixture(scope="session")
def universes():
    return random_universes(200, RANDOM_SEED)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
