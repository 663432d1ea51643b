"""Assembly of a scoring engine from a model checkpoint and vocab file."""

from __future__ import annotations

from .engine import ScoringEngine
from .vocab import load_piece_inventory


def load_engine(
    model_name_or_path: str,
    vocab_path: str,
    window_seconds: float = 0.002,
) -> ScoringEngine:
    """Load a BERT-family masked LM and pair it with its vocabulary file.

    The vocabulary file must be the exact one shipped with the
    checkpoint; the engine refuses to start when the model head and the
    file disagree on vocabulary size.
    """
    from transformers import AutoModelForMaskedLM

    inventory = load_piece_inventory(vocab_path)
    model = AutoModelForMaskedLM.from_pretrained(model_name_or_path)
    max_len = int(model.config.max_position_embeddings)
    return ScoringEngine(
        model=model,
        inventory=inventory,
        model_name=model_name_or_path,
        max_sequence_length=max_len,
        window_seconds=window_seconds,
    )
