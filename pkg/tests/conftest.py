import pytest

from _helpers import FREQ
from kirchhoff_track.geometry import build_disk_grid, uniform_circular_array
from kirchhoff_track.wavecore import BackgroundMedium


@pytest.fixture(scope="session")
def water():
    return BackgroundMedium(FREQ, 78.0, 0.2)


@pytest.fixture(scope="session")
def lossless_water():
    return BackgroundMedium(FREQ, 78.0, 0.0)


@pytest.fixture(scope="session")
def array16():
    return uniform_circular_array(16, 0.09)


@pytest.fixture(scope="session")
def roi_grid():
    return build_disk_grid(0.085, 0.0017)


@pytest.fixture(scope="session")
def coarse_grid():
    return build_disk_grid(0.085, 0.0085)




_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; printed at the end of the run."""

    def emit(criterion, description, ok, detail):
        line = f"[acceptance {criterion}] {'PASS' if ok else 'FAIL'}  {description}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
