import cmath
import math

import numpy as np
import pytest

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = next((m for m in getattr(report, "criterion_markers", [])), None)
    if marker is None:
        return
    number, title = marker
    previous = _criteria.get(number, (title, "PASS"))[1]
    status = "PASS" if report.passed and previous == "PASS" else "FAIL"
    _criteria[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    report.criterion_markers = [m.args] if m else []


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"AC{number:<2} {status}  {title}")


def random_amplitudes(rng: np.random.Generator) -> tuple[complex, complex]:
    """Random normalized complex pair with |alpha|, |beta| both well away from zero."""
    theta = rng.uniform(0.15, math.pi / 2 - 0.15)
    phi_a, phi_b = rng.uniform(0, 2 * math.pi, size=2)
    return math.cos(theta) * cmath.exp(1j * phi_a), math.sin(theta) * cmath.exp(1j * phi_b)


@pytest.fixture
def amplitude_samples():
    rng = np.random.default_rng(20240611)
    return [random_amplitudes(rng) for _ in range(20)]
