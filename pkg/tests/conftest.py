import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20231, help="seed for randomized property loops")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    merged = {}
    for number, ok, elapsed, title in RESULTS:
        prev = merged.get(number, (True, 0.0, title))
        merged[number] = (prev[0] and ok, prev[1] + elapsed, prev[2])
    terminalreporter.section("acceptance criteria")
    for number in sorted(merged):
        ok, elapsed, title = merged[number]
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  ({elapsed:6.2f}s)  {title}"
        )
