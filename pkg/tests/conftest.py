import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def emit(label: str, ok: bool, detail: str) -> None:
        line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
