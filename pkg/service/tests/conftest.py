import sys
import time
from pathlib import Path

import pytest
import torch
from transformers import BertConfig, BertForMaskedLM

sys.path.insert(0, str(Path(__file__).parent))

from service_helpers import ALL_PIECES

from mlm_service import ScoringEngine
from mlm_service.vocab import load_piece_inventory

SERVICE_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def vocab_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("service-vocab") / "vocab.txt"
    path.write_text("\n".join(ALL_PIECES) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def inventory(vocab_file):
    return load_piece_inventory(str(vocab_file))


@pytest.fixture(scope="session")
def tiny_model():
    """A randomly initialized masked LM, seeded so scores are stable."""
    torch.manual_seed(20240822)
    config = BertConfig(
        vocab_size=len(ALL_PIECES),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    return BertForMaskedLM(config)


@pytest.fixture(scope="session")
def engine(tiny_model, inventory):
    engine = ScoringEngine(
        model=tiny_model,
        inventory=inventory,
        model_name="tiny-random-bert",
        max_sequence_length=tiny_model.config.max_position_embeddings,
    )
    yield engine
    engine.close()


@pytest.fixture
def client(engine):
    from fastapi.testclient import TestClient

    from mlm_service import create_app

    return TestClient(create_app(engine))


@pytest.fixture
def acceptance(request):
    """Times an end-to-end guarantee and records its one-line verdict.

    Pass ``took`` to exclude setup that the budget should not count,
    such as loading model weights.
    """
    start = time.monotonic()

    def finish(detail: str, budget_seconds: float, took: float | None = None):
        if took is None:
            took = time.monotonic() - start
        SERVICE_ACCEPTANCE_LINES.append(
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
        and item.fspath.basename == "test_wire_contract.py"
    ):
        SERVICE_ACCEPTANCE_LINES.append(f"FAIL {item.name}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if SERVICE_ACCEPTANCE_LINES:
        terminalreporter.section("service acceptance summary")
        for line in SERVICE_ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
