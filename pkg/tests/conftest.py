import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one pass/fail line for the end-of-run acceptance summary."""

    def record(number: int, title: str, ok: bool, note: str = "") -> None:
        line = f"AC{number:02d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{note}]" if note else "")
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
