"""Shared fixtures plus the acceptance report printed after the run."""

import pytest

import convoviz

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, name: str, passed: bool, measured: str) -> None:
    """Collect one PASS/FAIL line per acceptance criterion for the summary."""
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] criterion {number} ({name}): {measured}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def houses():
    return convoviz.load_sample("houses")


@pytest.fixture(scope="session")
def olympics():
    return convoviz.load_sample("olympics")


@pytest.fixture(scope="session")
def movies():
    return convoviz.load_sample("movies")


@pytest.fixture(scope="session")
def players():
    return convoviz.load_sample("players")
