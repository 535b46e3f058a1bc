from __future__ import annotations

import pytest

from ehrelay.params import baseline

# (criterion number, passed, detail) appended by test_acceptance.py
ACCEPTANCE_LINES: list = []


@pytest.fixture
def base_params():
    return baseline()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
