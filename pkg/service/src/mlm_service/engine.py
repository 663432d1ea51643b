"""Scoring engine: a masked language model behind a small batching window.

The engine owns the only thread that ever touches the model.  Incoming
requests are validated on the caller's thread, queued, and picked up by
the worker, which drains a short burst of queued jobs and runs their
forward passes back to back.  Running each forward separately (rather
than padding jobs into one tensor) keeps responses bit-identical no
matter which requests happen to share a window, which is what lets the
service promise that repeating a request repeats the response exactly.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

import torch

from .vocab import MASK_PIECE, SEPARATOR_PIECE, PieceInventory, ServiceConfigError


class ScoreRequestError(ValueError):
    """Client-side problem with a scoring request."""

    def __init__(self, status: int, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class _Job:
    input_ids: torch.Tensor
    token_type_ids: torch.Tensor
    mask_positions: list[int]
    top_k: int
    done: threading.Event = field(default_factory=threading.Event)
    result: list[list[tuple[str, float]]] | None = None
    error: BaseException | None = None


def segment_ids(pieces: list[str]) -> list[int]:
    """Infer sentence-pair segment ids from separator placement.

    Everything up to and including the first separator belongs to the
    first segment; the rest is the second.  Inputs without a separator
    are a single segment.
    """
    ids = []
    segment = 0
    for piece in pieces:
        ids.append(segment)
        if piece == SEPARATOR_PIECE and segment == 0:
            segment = 1
    return ids


class ScoringEngine:
    """Validates score requests and serves them from one worker thread."""

    def __init__(
        self,
        model,
        inventory: PieceInventory,
        model_name: str,
        max_sequence_length: int,
        window_seconds: float = 0.002,
        max_window_jobs: int = 16,
    ) -> None:
        vocab_size = int(model.config.vocab_size)
        if vocab_size != len(inventory):
            raise ServiceConfigError(
                f"model emits {vocab_size} pieces but the vocabulary file "
                f"lists {len(inventory)}"
            )
        model.eval()
        self.model = model
        self.inventory = inventory
        self.model_name = model_name
        self.max_sequence_length = int(max_sequence_length)
        self._mask_id = inventory.id_of(MASK_PIECE)
        self._window_seconds = window_seconds
        self._max_window_jobs = max_window_jobs
        self._jobs: list[_Job] = []
        self._wakeup = threading.Condition()
        self._closed = False
        self._worker = threading.Thread(
            target=self._run, name="scoring-engine", daemon=True
        )
        self._worker.start()

    # ------------------------------------------------------------------
    # request path

    def score(
        self, pieces: list[str], mask_positions: list[int], top_k: int
    ) -> list[list[tuple[str, float]]]:
        job = self._validate(pieces, mask_positions, top_k)
        with self._wakeup:
            if self._closed:
                raise RuntimeError("scoring engine is closed")
            self._jobs.append(job)
            self._wakeup.notify()
        job.done.wait()
        if job.error is not None:
            raise job.error
        assert job.result is not None
        return job.result

    def _validate(
        self, pieces: list[str], mask_positions: list[int], top_k: int
    ) -> _Job:
        if not pieces:
            raise ScoreRequestError(400, "pieces must be non-empty")
        if len(pieces) > self.max_sequence_length:
            raise ScoreRequestError(
                413,
                f"sequence of {len(pieces)} pieces exceeds the model limit "
                f"of {self.max_sequence_length}",
            )
        if top_k < 1:
            raise ScoreRequestError(400, "top_k must be at least 1")
        ids = []
        for piece in pieces:
            piece_id = self.inventory.id_of(piece)
            if piece_id is None:
                raise ScoreRequestError(400, f"unknown piece {piece!r}")
            ids.append(piece_id)
        if not mask_positions:
            raise ScoreRequestError(400, "mask_positions must be non-empty")
        previous = -1
        for position in mask_positions:
            if position <= previous:
                raise ScoreRequestError(
                    400, "mask_positions must be strictly increasing"
                )
            previous = position
            if not 0 <= position < len(pieces):
                raise ScoreRequestError(
                    400, f"mask position {position} is out of range"
                )
            if ids[position] != self._mask_id:
                raise ScoreRequestError(
                    400,
                    f"position {position} holds {pieces[position]!r}, "
                    f"not {MASK_PIECE}",
                )
        return _Job(
            input_ids=torch.tensor([ids], dtype=torch.long),
            token_type_ids=torch.tensor([segment_ids(pieces)], dtype=torch.long),
            mask_positions=list(mask_positions),
            top_k=min(top_k, len(self.inventory)),
        )

    # ------------------------------------------------------------------
    # worker

    def _run(self) -> None:
        while True:
            with self._wakeup:
                while not self._jobs and not self._closed:
                    self._wakeup.wait()
                if self._closed and not self._jobs:
                    return
            # Let a burst of concurrent requests accumulate before draining.
            if self._window_seconds > 0:
                time.sleep(self._window_seconds)
            with self._wakeup:
                batch = self._jobs[: self._max_window_jobs]
                del self._jobs[: self._max_window_jobs]
            for job in batch:
                try:
                    job.result = self._forward(job)
                except BaseException as exc:  # surfaced on the caller's thread
                    job.error = exc
                finally:
                    job.done.set()

    def _forward(self, job: _Job) -> list[list[tuple[str, float]]]:
        with torch.no_grad():
            logits = self.model(
                input_ids=job.input_ids, token_type_ids=job.token_type_ids
            ).logits[0]
            log_probs = torch.log_softmax(logits.double(), dim=-1)
        out = []
        for position in job.mask_positions:
            values, indices = torch.topk(log_probs[position], job.top_k)
            out.append(
                [
                    (self.inventory.pieces[int(i)], float(v))
                    for v, i in zip(values.tolist(), indices.tolist())
                ]
            )
        return out

    def close(self) -> None:
        with self._wakeup:
            self._closed = True
            self._wakeup.notify_all()
        self._worker.join(timeout=5.0)
