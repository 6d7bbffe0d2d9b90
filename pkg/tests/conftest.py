"""Shared fixtures plus the acceptance-report terminal section."""
import pytest

from plcrelay import default_system, gauss_hermite

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def rule32():
    return gauss_hermite(32)


@pytest.fixture
def base_system():
    return default_system()


@pytest.fixture
def record_acceptance():
    """Collect one PASS/FAIL line per acceptance criterion for the summary."""

    def _record(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
