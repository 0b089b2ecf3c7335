import math
import warnings

import numpy as np
import pytest

from cavity_radiance.constants import SI
from cavity_radiance.geometry import SphericalCavity
from cavity_radiance.oracle import enumerate_sphere_modes

# One line per acceptance criterion, filled in by test_acceptance.py.
ACCEPTANCE_LINES = {}


def record_acceptance(number, ok, detail):
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


def x_to_nu(x, r0):
    return x * SI.c / (2.0 * math.pi * r0)


@pytest.fixture(scope="session")
def sphere2cm():
    return SphericalCavity(0.02)


@pytest.fixture(scope="session")
def modes_headline(sphere2cm):
    """Modes of the 2 cm sphere covering the [1.5e11, 3e11] Hz comparison window."""
    return enumerate_sphere_modes(sphere2cm, 1.3 * 3e11 + 10 * 5e-3 * 3e11)


@pytest.fixture(scope="session")
def modes_thermal():
    """Modes of a 1 cm sphere up to x = 610, enough for the Planck tail at x = 10."""
    cav = SphericalCavity(0.01)
    return cav, enumerate_sphere_modes(cav, x_to_nu(610.0, 0.01))


@pytest.fixture(scope="session")
def modes_small(sphere2cm):
    return enumerate_sphere_modes(sphere2cm, x_to_nu(60.0, 0.02))


@pytest.fixture(autouse=True)
def _quiet_validity():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*periodic-orbit expansion.*")
        yield
