import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import build_vocab

ACCEPTANCE_LINES = []


@pytest.fixture
def toy_vocab():
    return build_vocab(
        ["the", "cat", "dog", "drinks", "milk", "milc", "a", "on", "mat", "##s", "##ing", "run"]
    )


@pytest.fixture
def acceptance(request):
    """Times an end-to-end guarantee and records its one-line verdict."""
    start = time.monotonic()

    def finish(detail: str, budget_seconds: float):
        took = time.monotonic() - start
        ACCEPTANCE_LINES.append(
            f"PASS {request.node.name}: {detail} [{took:.1f}s, budget {budget_seconds:.0f}s]"
        )
        assert took < budget_seconds, f"took {took:.1f}s, budget {budget_seconds:.0f}s"

    return finish


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if (
        report.when == "call"
        and report.failed
        and item.fspath.basename == "test_acceptance.py"
    ):
        ACCEPTANCE_LINES.append(f"FAIL {item.name}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
