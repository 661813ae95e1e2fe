import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


class _Recorder:
    def __call__(self, number: int, title: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE[number] = (bool(passed), title, detail)
        return bool(passed)


@pytest.fixture(scope="session")
def criterion():
    """Record one acceptance verdict; the terminal summary prints them all."""
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, title, detail = _ACCEPTANCE[number]
        line = f"[{'PASS' if passed else 'FAIL'}] {number}. {title}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
