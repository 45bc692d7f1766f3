from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance: list[tuple[str, str, str]] = []
_notes: list[str] = []


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def acceptance_note():
    """Append text shown under the acceptance summary (e.g. the benchmark table)."""
    return _notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _acceptance.append((marker.args[0], status, marker.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title in sorted(_acceptance, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
    for note in _notes:
        terminalreporter.write_line("")
        for line in note.rstrip("\n").splitlines():
            terminalreporter.write_line(line)
