"""Masked-slot scoring contract plus its two shipped implementations.

A backend answers one question: given a piece sequence containing mask
tokens, what are the top-k pieces (with natural-log probabilities) for
each masked position, scored independently per mask? The table oracle
answers from a fixture for hermetic runs; the remote client forwards to
an HTTP scoring service and enforces the vocabulary handshake.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Protocol, Sequence, runtime_checkable

import requests

from .errors import BackendError, BackendUnavailableError, ConfigurationError
from .vocab import Vocab


class PiecePrediction(NamedTuple):
    piece_id: int
    log_prob: float


# One inner tuple per mask position, each sorted by log_prob descending.
MaskPredictions = tuple[tuple[PiecePrediction, ...], ...]


@dataclass(frozen=True)
class ScoreRequest:
    """Pieces with mask tokens in place, the mask positions, and top_k."""

    pieces: tuple[int, ...]
    mask_positions: tuple[int, ...]
    top_k: int

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "mask_positions", tuple(self.mask_positions))
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if not self.mask_positions:
            raise ValueError("at least one mask position is required")
        for a, b in zip(self.mask_positions, self.mask_positions[1:]):
            if a >= b:
                raise ValueError(f"mask positions must be strictly increasing: {self.mask_positions}")
        for position in self.mask_positions:
            if not 0 <= position < len(self.pieces):
                raise ValueError(f"mask position {position} outside sequence of length {len(self.pieces)}")


@runtime_checkable
class MlmBackend(Protocol):
    """Anything that can score masked positions."""

    def score(self, request: ScoreRequest) -> MaskPredictions: ...


def check_request(request: ScoreRequest, vocab: Vocab) -> None:
    """Reject requests whose ids are invalid or whose masks aren't masks."""
    for piece_id in request.pieces:
        if not 0 <= piece_id < len(vocab):
            raise BackendError(f"unknown piece id {piece_id}")
    for position in request.mask_positions:
        if request.pieces[position] != vocab.mask_id:
            raise BackendError(
                f"mask position {position} points at piece id {request.pieces[position]}, not the mask token"
            )


def check_predictions(predictions: MaskPredictions, request: ScoreRequest) -> None:
    """Enforce the response contract shared by every backend."""
    if len(predictions) != len(request.mask_positions):
        raise BackendError(
            f"expected predictions for {len(request.mask_positions)} masks, got {len(predictions)}"
        )
    for mask_index, entries in enumerate(predictions):
        if len(entries) > request.top_k:
            raise BackendError(
                f"mask {mask_index}: {len(entries)} entries exceed top_k={request.top_k}"
            )
        previous = None
        for entry in entries:
            if not math.isfinite(entry.log_prob) or entry.log_prob > 0.0:
                raise BackendError(
                    f"mask {mask_index}: log_prob {entry.log_prob} is not a finite log probability"
                )
            if previous is not None and entry.log_prob > previous:
                raise BackendError(f"mask {mask_index}: entries are not sorted by log_prob descending")
            previous = entry.log_prob


class TableOracle:
    """Deterministic fixture-backed scorer for hermetic tests and demos.

    A request's pieces are rendered to their strings and joined with
    single spaces; that fingerprint is looked up exactly. Unmatched
    fingerprints fall back to a uniform distribution over the configured
    default piece list.
    """

    def __init__(
        self,
        vocab: Vocab,
        contexts: dict[str, list[list[tuple[str, float]]]],
        default_pieces: Sequence[str],
    ):
        self._vocab = vocab
        if not default_pieces:
            raise ConfigurationError("the fallback piece list must not be empty")
        self._default = [self._require_piece(piece) for piece in default_pieces]
        self._contexts: dict[str, tuple[tuple[PiecePrediction, ...], ...]] = {}
        for fingerprint, per_mask in contexts.items():
            masks = []
            for entries in per_mask:
                converted = []
                for piece, log_prob in entries:
                    if not math.isfinite(log_prob) or log_prob > 0.0:
                        raise ConfigurationError(
                            f"fixture log_prob {log_prob} for piece {piece!r} is not a log probability"
                        )
                    converted.append(PiecePrediction(self._require_piece(piece), float(log_prob)))
                converted.sort(key=lambda entry: -entry.log_prob)
                masks.append(tuple(converted))
            self._contexts[fingerprint] = tuple(masks)

    def _require_piece(self, piece: str) -> int:
        if piece not in self._vocab.pieces:
            raise ConfigurationError(f"fixture piece {piece!r} is not in the vocabulary")
        return self._vocab.piece_id(piece)

    def fingerprint(self, piece_ids: Sequence[int]) -> str:
        return " ".join(self._vocab.render(piece_ids))

    def score(self, request: ScoreRequest) -> MaskPredictions:
        check_request(request, self._vocab)
        entry = self._contexts.get(self.fingerprint(request.pieces))
        if entry is None:
            uniform = -math.log(len(self._default))
            fallback = tuple(
                PiecePrediction(piece_id, uniform) for piece_id in self._default[: request.top_k]
            )
            return tuple(fallback for _ in request.mask_positions)
        if len(entry) != len(request.mask_positions):
            raise BackendError(
                f"fixture entry has {len(entry)} masks but the request has {len(request.mask_positions)}"
            )
        predictions = tuple(masks[: request.top_k] for masks in entry)
        check_predictions(predictions, request)
        return predictions


def load_table_oracle(path: str | Path, vocab: Vocab) -> TableOracle:
    """Build a TableOracle from a JSON fixture.

    Layout: {"default_pieces": [...], "contexts": {fingerprint:
    [[{"piece": ..., "log_prob": ...}, ...] per mask]}}.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read oracle fixture {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"oracle fixture {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "contexts" not in data or "default_pieces" not in data:
        raise ConfigurationError(
            f"oracle fixture {path} must be an object with 'contexts' and 'default_pieces'"
        )
    contexts: dict[str, list[list[tuple[str, float]]]] = {}
    raw_contexts = data["contexts"]
    if not isinstance(raw_contexts, dict):
        raise ConfigurationError("'contexts' must map fingerprints to per-mask entry lists")
    for fingerprint, per_mask in raw_contexts.items():
        if not isinstance(per_mask, list):
            raise ConfigurationError(f"fixture entry for {fingerprint!r} must be a list of masks")
        masks = []
        for entries in per_mask:
            if not isinstance(entries, list):
                raise ConfigurationError(f"per-mask entries for {fingerprint!r} must be lists")
            converted = []
            for item in entries:
                try:
                    converted.append((item["piece"], float(item["log_prob"])))
                except (TypeError, KeyError, ValueError) as exc:
                    raise ConfigurationError(
                        f"malformed entry {item!r} under {fingerprint!r}: {exc}"
                    ) from exc
            masks.append(converted)
        contexts[fingerprint] = masks
    return TableOracle(vocab, contexts, data["default_pieces"])


@dataclass(frozen=True)
class RemoteConfig:
    """Connection settings for the HTTP scoring service."""

    endpoint: str
    timeout: float = 30.0
    attempts: int = 3
    backoff: float = 0.5
    max_in_flight: int = 8


class RemoteBackend:
    """HTTP client for the scoring service.

    Before the first score the client fetches /v1/info and compares the
    service's vocabulary digest with the local one; a mismatch is fatal
    because the two sides would silently tokenize differently. Transient
    transport failures are retried with exponential backoff.
    """

    _TRANSIENT_STATUS = frozenset({500, 502, 503, 504})

    def __init__(self, config: RemoteConfig, vocab: Vocab, session: requests.Session | None = None):
        if vocab.content_hash is None:
            raise ConfigurationError(
                "the remote backend requires a vocabulary loaded from disk (no content hash available)"
            )
        self._config = config
        self._vocab = vocab
        self._session = session or requests.Session()
        self._gate = threading.BoundedSemaphore(config.max_in_flight)
        self._handshake_lock = threading.Lock()
        self._handshake_done = False

    def info(self) -> dict:
        response = self._request("GET", "/v1/info")
        try:
            return response.json()
        except ValueError as exc:
            raise BackendError(f"service info is not valid JSON: {exc}") from exc

    def check_vocab(self) -> None:
        """Run the vocabulary handshake now instead of on first score."""
        info = self.info()
        remote_hash = info.get("vocab_hash")
        if remote_hash != self._vocab.content_hash:
            raise ConfigurationError(
                f"vocabulary mismatch: service reports hash {remote_hash!r}, "
                f"local file has {self._vocab.content_hash!r}"
            )
        with self._handshake_lock:
            self._handshake_done = True

    def score(self, request: ScoreRequest) -> MaskPredictions:
        check_request(request, self._vocab)
        with self._handshake_lock:
            pending = not self._handshake_done
        if pending:
            self.check_vocab()
        body = {
            "pieces": self._vocab.render(request.pieces),
            "mask_positions": list(request.mask_positions),
            "top_k": request.top_k,
        }
        with self._gate:
            response = self._request("POST", "/v1/score", body)
        try:
            payload = response.json()
        except ValueError as exc:
            raise BackendError(f"service response is not valid JSON: {exc}") from exc
        predictions = self._parse_predictions(payload)
        check_predictions(predictions, request)
        return predictions

    def _parse_predictions(self, payload: dict) -> MaskPredictions:
        try:
            raw = payload["predictions"]
        except (TypeError, KeyError):
            raise BackendError("service response is missing 'predictions'") from None
        masks = []
        for entries in raw:
            converted = []
            for item in entries:
                try:
                    piece, log_prob = item["piece"], float(item["log_prob"])
                except (TypeError, KeyError, ValueError) as exc:
                    raise BackendError(f"malformed prediction entry {item!r}: {exc}") from exc
                if piece not in self._vocab.pieces:
                    raise BackendError(f"service returned out-of-vocabulary piece {piece!r}")
                converted.append(PiecePrediction(self._vocab.piece_id(piece), log_prob))
            masks.append(tuple(converted))
        return tuple(masks)

    def _request(self, method: str, route: str, body: dict | None = None):
        url = self._config.endpoint.rstrip("/") + route
        delay = self._config.backoff
        failure: Exception | None = None
        for attempt in range(self._config.attempts):
            if attempt:
                time.sleep(delay)
                delay *= 2
            try:
                response = self._session.request(method, url, json=body, timeout=self._config.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                failure = exc
                continue
            if response.status_code in self._TRANSIENT_STATUS:
                failure = BackendError(f"{url} answered {response.status_code}")
                continue
            if response.status_code >= 400:
                raise BackendError(f"{url} answered {response.status_code}: {response.text[:200]}")
            return response
        raise BackendUnavailableError(
            f"scoring service at {self._config.endpoint} unreachable after "
            f"{self._config.attempts} attempts: {failure}"
        )
