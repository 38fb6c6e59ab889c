import pytest

from lattice_spectra.eigensolver import full_spectrum
from lattice_spectra.operator import assemble
from lattice_spectra.region import box_region, new_region

_acceptance_lines: list[str] = []


def two_vertex(n):
    return new_region(n, [(0,) * n, (1,) + (0,) * (n - 1)])


@pytest.fixture
def pair1():
    region = two_vertex(1)
    return region, full_spectrum(assemble(region))


@pytest.fixture
def square():
    region = box_region([2, 2])
    return region, full_spectrum(assemble(region))


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    _acceptance_lines.append(f"{status}  {name}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
