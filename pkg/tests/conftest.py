import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line. ``ok=None`` marks a criterion as not applicable."""

    def record(number, title, ok, detail=""):
        status = "N/A" if ok is None else "PASS" if ok else "FAIL"
        _ACCEPTANCE.append((number, f"[{status}] AC-{number:02d} {title}: {detail}"))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda item: item[0]):
        terminalreporter.write_line(line)
