import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from omplan.benchmarks import running_example  # noqa: E402
from omplan.dl.reasoner import Reasoner  # noqa: E402


@pytest.fixture(scope="session")
def bw():
    """The running blocksworld example, loaded."""
    return running_example().load()


@pytest.fixture
def reasoner():
    return Reasoner()


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    """Store and print the verdict for one acceptance criterion."""
    ACCEPTANCE[criterion] = (passed, detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'} ({detail})")
