import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_SESSION_START = time.monotonic()


@pytest.fixture(scope="session")
def session_start() -> float:
    return _SESSION_START


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.monotonic() - _SESSION_START
    terminalreporter.write_line(f"total suite wall time: {elapsed:.1f} s")
