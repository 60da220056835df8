import time

import numpy as np
import pytest

from gelfand_morse import SweepOptions, exponential, sweep
from gelfand_morse.continuation import compute_point

_ACCEPTANCE = []


def record_criterion(number: int, ok: bool, detail: str):
    _ACCEPTANCE.append((number, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def warm_jit():
    # compile (or load from cache) every kernel once so timings measure solving
    compute_point(exponential(), 3, 1.0)
    return True


class TimedCurve:
    def __init__(self, curve, seconds):
        self.curve = curve
        self.seconds = seconds


def _timed_sweep(n, a_grid, **kw):
    t = time.perf_counter()
    curve = sweep(exponential(), n, a_grid, SweepOptions(**kw))
    return TimedCurve(curve, time.perf_counter() - t)


LIOUVILLE_MU = (0.25, 1.0, 4.0)


@pytest.fixture(scope="session")
def liouville_grid():
    grid = np.linspace(0.0, 6.0, 121)
    extra = [2 * np.log1p(m) for m in LIOUVILLE_MU]
    return np.unique(np.concatenate([grid, extra]))


@pytest.fixture(scope="session")
def sweep_n2(warm_jit, liouville_grid):
    return _timed_sweep(2, liouville_grid)


@pytest.fixture(scope="session")
def sweep_n2_long(warm_jit):
    return _timed_sweep(2, np.linspace(0.0, 30.0, 301))


@pytest.fixture(scope="session")
def sweep_n3(warm_jit):
    return _timed_sweep(3, np.linspace(0.0, 30.0, 601))


@pytest.fixture(scope="session")
def sweep_n3_fine(warm_jit):
    return _timed_sweep(3, np.linspace(0.0, 30.0, 1201))


@pytest.fixture(scope="session")
def sweep_n3_long(warm_jit):
    return _timed_sweep(3, np.linspace(0.0, 60.0, 1201))


@pytest.fixture(scope="session")
def sweep_n10(warm_jit):
    return _timed_sweep(10, np.linspace(0.0, 30.0, 301))
