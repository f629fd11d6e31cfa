import numpy as np
import pytest

from barewire import dispersion

RADII = (0.5e-3, 1e-3, 2e-3, 5e-3, 10e-3, 20e-3)


@pytest.fixture(scope="session")
def mmw_sweeps():
    """Copper sweeps over 30-100 GHz for every standard radius."""
    f = np.linspace(30e9, 100e9, 36)
    return {a: dispersion.sweep(f, dispersion.MediumParams.copper(a)) for a in RADII}


@pytest.fixture(scope="session")
def band_sweep_thin():
    """a = 0.5 mm over 1-100 GHz on a 100 MHz grid."""
    f = np.linspace(1e9, 100e9, 991)
    return dispersion.sweep(f, dispersion.MediumParams.copper(0.5e-3))


CRITERIA = {}


def record_criterion(number, title, ok, detail):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    CRITERIA[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
