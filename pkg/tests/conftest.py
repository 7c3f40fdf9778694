"""Shared pytest hooks: collects one verdict line per acceptance criterion."""
import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    def record(k: int, passed: bool, detail: str) -> bool:
        line = f"criterion {k}: {'PASS' if passed else 'FAIL'} {detail}"
        ACCEPTANCE[k] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
