import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pgi.families import build_group, named_spec  # noqa: E402


@lru_cache(maxsize=None)
def named(name: str):
    return build_group(named_spec(name))


@pytest.fixture
def group():
    return named


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[k])
