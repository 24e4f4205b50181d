import json
import sys
from pathlib import Path

import numpy as np
import pytest

HERE = Path(__file__).resolve().parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE))

A_EX = np.array([[1, 2, 3], [0, 0, 0], [0, 0, 0]], dtype=complex)
B_EX = np.array([[1, 2, 3], [0, 0, 1], [0, 0, 0]], dtype=complex)
SHIFT2 = np.array([[0, 1], [0, 0]], dtype=complex)


def decode(m):
    return np.array([[complex(re, im) for re, im in row] for row in m], dtype=complex)


def rel_err(x, y):
    scale = max(np.linalg.norm(x), np.linalg.norm(y))
    d = np.linalg.norm(x - y)
    return d / scale if scale else d


@pytest.fixture(scope="session")
def oracle_data():
    return json.loads((DATA / "oracle_values.json").read_text())


@pytest.fixture
def example_pair():
    return A_EX.copy(), B_EX.copy()


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
