"""Shared fixtures and the acceptance-criteria terminal summary."""

import pytest

_ACCEPTANCE_LINES: list[tuple[float, str]] = []


def record_criterion(num: float, detail: str) -> None:
    """Called by acceptance tests once their assertions have passed."""
    _ACCEPTANCE_LINES.append((num, detail))


@pytest.fixture(scope="session")
def bump_weight():
    from divap.divisor_ap import default_weight

    return default_weight()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, detail in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:>4}: {detail}")
