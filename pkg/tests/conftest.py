import math

import numpy as np
import pytest

from eulerfan.eos import GammaLaw
from eulerfan.riemann import RiemannData, build_fan

GAMMAS = (1.2, 1.4, 2.0, 3.0)


@pytest.fixture
def law2():
    return GammaLaw(1.0, 2.0)


@pytest.fixture
def symmetric_data():
    return RiemannData(1.0, -1.0, 1.0, 1.0)


@pytest.fixture
def symmetric_fan(law2, symmetric_data):
    return build_fan(symmetric_data, law2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


RHO_C_SYMMETRIC = (1.0 - 1.0 / (2.0 * math.sqrt(2.0))) ** 2


def tamper_snapshots(out_dir, factor=1.1):
    """Scale u1 by ``factor`` in the second half of a simulate output."""
    from eulerfan.io import FIELD_HEADER
    paths = sorted((out_dir / "snapshots").glob("t_*.csv"))
    for path in paths[len(paths) // 2:]:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        data[:, 3] *= factor
        with open(path, "w", newline="\n") as fh:
            fh.write(FIELD_HEADER + "\n")
            np.savetxt(fh, data, fmt="%.17g", delimiter=",")
    return paths


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
