"""Shared test utilities: slow oracles and canned backends."""

from __future__ import annotations

import itertools
from functools import lru_cache

from mlm_denoise import PiecePrediction, ScoreRequest, Vocab

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def build_vocab(extra: list[str]) -> Vocab:
    return Vocab.from_pieces(SPECIALS + list(extra))


def slow_edit_distance(a: str, b: str) -> int:
    """Textbook recursive formulation, memoized. Deliberately naive."""
    a, b = a.lower(), b.lower()

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            go(i - 1, j) + 1,
            go(i, j - 1) + 1,
            go(i - 1, j - 1) + (0 if a[i - 1] == b[j - 1] else 1),
        )

    result = go(len(a), len(b))
    go.cache_clear()
    return result


def all_strings(alphabet: str, max_len: int):
    """Every string over the alphabet up to max_len, shortest first."""
    yield ""
    for length in range(1, max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            yield "".join(combo)


class UniformOracle:
    """Backend that always answers the same piece list, uniformly."""

    def __init__(self, vocab: Vocab, pieces: list[str], log_prob: float = -1.0):
        self.vocab = vocab
        self.entries = tuple(
            PiecePrediction(vocab.piece_id(piece), log_prob) for piece in pieces
        )
        self.requests: list[ScoreRequest] = []

    def score(self, request: ScoreRequest):
        self.requests.append(request)
        return tuple(self.entries[: request.top_k] for _ in request.mask_positions)


class ScriptedBackend:
    """Backend that looks up rendered piece strings in a plain dict.

    Scripts map a fingerprint (space-joined piece strings) to per-mask
    lists of (piece, log_prob). Unknown fingerprints raise so a test
    never silently scores a context it did not anticipate.
    """

    def __init__(self, vocab: Vocab, script: dict[str, list[list[tuple[str, float]]]]):
        self.vocab = vocab
        self.script = script
        self.seen: list[str] = []

    def score(self, request: ScoreRequest):
        fingerprint = " ".join(self.vocab.render(request.pieces))
        self.seen.append(fingerprint)
        if fingerprint not in self.script:
            raise AssertionError(f"unscripted context: {fingerprint!r}")
        per_mask = self.script[fingerprint]
        assert len(per_mask) == len(request.mask_positions)
        return tuple(
            tuple(
                PiecePrediction(self.vocab.piece_id(piece), log_prob)
                for piece, log_prob in entries[: request.top_k]
            )
            for entries in per_mask
        )
