import math

import numpy as np
import pytest

from antibunch.dispersion import PAPER_BANDWIDTH

ZETA = 2 * PAPER_BANDWIDTH / math.pi

_ACCEPTANCE_LINES = []


@pytest.fixture
def zeta():
    return ZETA


@pytest.fixture
def rng():
    return np.random.default_rng(20260514)


@pytest.fixture
def record_criterion():
    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
