import re

import pytest

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome, then assert it."""

    def record(key: str, passed: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[key] = (bool(passed), detail)
        assert passed, f"criterion {key}: {detail}"

    return record


def _natural(key):
    return [int(x) if x.isdigit() else x for x in re.split(r"(\d+)", key)]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=_natural):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key:<4} {detail}")
