"""WordPiece vocabulary: loading, special tokens, and id bookkeeping.

The on-disk format is one piece per line, UTF-8, with the zero-based line
number as the piece id. The same file is the contract shared with any
remote scoring service, which is why the loader also records a SHA-256
digest of the raw bytes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError

CONTINUATION_PREFIX = "##"
MASK_TOKEN = "[MASK]"
SEQUENCE_START_TOKEN = "[CLS]"
SEPARATOR_TOKEN = "[SEP]"
UNKNOWN_TOKEN = "[UNK]"


@dataclass(frozen=True)
class SpecialTokens:
    """Surface strings of the four tokens every vocabulary must carry."""

    mask: str = MASK_TOKEN
    sequence_start: str = SEQUENCE_START_TOKEN
    separator: str = SEPARATOR_TOKEN
    unknown: str = UNKNOWN_TOKEN

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.mask, self.sequence_start, self.separator, self.unknown)


@dataclass(frozen=True)
class Vocab:
    """Immutable piece-to-id mapping with dense ids in [0, size).

    ``content_hash`` is the SHA-256 hex digest of the source file and is
    None for vocabularies assembled in memory.
    """

    pieces: dict[str, int]
    id_to_piece: tuple[str, ...]
    continuation_prefix: str
    mask_id: int
    sequence_start_id: int
    separator_id: int
    unknown_id: int
    content_hash: str | None = None
    special_ids: frozenset[int] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "special_ids",
            frozenset(
                (self.mask_id, self.sequence_start_id, self.separator_id, self.unknown_id)
            ),
        )

    @classmethod
    def from_pieces(
        cls,
        ordered_pieces: list[str],
        continuation_prefix: str = CONTINUATION_PREFIX,
        specials: SpecialTokens = SpecialTokens(),
        content_hash: str | None = None,
    ) -> "Vocab":
        mapping: dict[str, int] = {}
        for line_no, piece in enumerate(ordered_pieces):
            if not piece:
                raise ConfigurationError(f"empty piece at id {line_no}")
            if any(ch.isspace() for ch in piece):
                raise ConfigurationError(f"piece {piece!r} at id {line_no} contains whitespace")
            if piece in mapping:
                raise ConfigurationError(
                    f"duplicate piece {piece!r} (ids {mapping[piece]} and {line_no})"
                )
            mapping[piece] = line_no
        ids = {}
        for name, token in zip(
            ("mask", "sequence_start", "separator", "unknown"), specials.as_tuple()
        ):
            if token not in mapping:
                raise ConfigurationError(f"vocabulary is missing the {name} token {token!r}")
            ids[name] = mapping[token]
        return cls(
            pieces=mapping,
            id_to_piece=tuple(ordered_pieces),
            continuation_prefix=continuation_prefix,
            mask_id=ids["mask"],
            sequence_start_id=ids["sequence_start"],
            separator_id=ids["separator"],
            unknown_id=ids["unknown"],
            content_hash=content_hash,
        )

    def __len__(self) -> int:
        return len(self.id_to_piece)

    def __contains__(self, piece: str) -> bool:
        return piece in self.pieces

    def piece_id(self, piece: str) -> int:
        try:
            return self.pieces[piece]
        except KeyError:
            raise KeyError(f"piece {piece!r} not in vocabulary") from None

    def piece(self, piece_id: int) -> str:
        if not 0 <= piece_id < len(self.id_to_piece):
            raise KeyError(f"piece id {piece_id} out of range [0, {len(self.id_to_piece)})")
        return self.id_to_piece[piece_id]

    def is_continuation(self, piece: str) -> bool:
        return piece.startswith(self.continuation_prefix)

    def is_special_id(self, piece_id: int) -> bool:
        return piece_id in self.special_ids

    def render(self, piece_ids) -> list[str]:
        """Piece ids back to their strings, in order."""
        return [self.piece(i) for i in piece_ids]


def load_vocab(
    path: str | Path,
    continuation_prefix: str = CONTINUATION_PREFIX,
    specials: SpecialTokens = SpecialTokens(),
) -> Vocab:
    """Read a one-piece-per-line vocabulary file.

    Raises ConfigurationError for a missing file, a duplicate piece, an
    empty line, or a missing special token.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigurationError(f"cannot read vocabulary file {path}: {exc}") from exc
    text = raw.decode("utf-8")
    lines = text.splitlines()
    return Vocab.from_pieces(
        lines,
        continuation_prefix=continuation_prefix,
        specials=specials,
        content_hash=hashlib.sha256(raw).hexdigest(),
    )
