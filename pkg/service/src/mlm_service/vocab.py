"""Piece inventory loading for the scoring service.

The service speaks piece strings on the wire, so it needs the same one
piece per line vocabulary file that clients load.  The digest of that
file is the compatibility token clients compare against: it is computed
over the raw bytes, so any edit, reordering, or even a line-ending
change produces a different hash and a loud client-side failure instead
of silently misaligned ids.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

MASK_PIECE = "[MASK]"
SEPARATOR_PIECE = "[SEP]"


class ServiceConfigError(ValueError):
    """Raised when the service is assembled from inconsistent parts."""


@dataclass(frozen=True)
class PieceInventory:
    """Ordered piece list plus the digest of the file it came from."""

    pieces: tuple[str, ...]
    content_hash: str
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        lookup = {piece: i for i, piece in enumerate(self.pieces)}
        if len(lookup) != len(self.pieces):
            raise ServiceConfigError("vocabulary file contains duplicate pieces")
        object.__setattr__(self, "index", lookup)

    def __len__(self) -> int:
        return len(self.pieces)

    def id_of(self, piece: str) -> int | None:
        return self.index.get(piece)


def load_piece_inventory(path: str) -> PieceInventory:
    """Read a one-piece-per-line vocabulary file and fingerprint it."""
    with open(path, "rb") as handle:
        raw = handle.read()
    digest = hashlib.sha256(raw).hexdigest()
    pieces = []
    for line in raw.decode("utf-8").splitlines():
        piece = line.strip()
        if piece:
            pieces.append(piece)
    if not pieces:
        raise ServiceConfigError(f"vocabulary file {path!r} is empty")
    inventory = PieceInventory(pieces=tuple(pieces), content_hash=digest)
    if inventory.id_of(MASK_PIECE) is None:
        raise ServiceConfigError(f"vocabulary file {path!r} has no {MASK_PIECE} piece")
    return inventory
