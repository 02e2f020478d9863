import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture
def verdict():
    """Record one acceptance line: ``verdict(number, title, passed, detail)``."""

    def record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)
        print(f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail}")
