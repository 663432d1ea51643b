"""HTTP inference sidecar for masked-position scoring."""

from .app import create_app
from .engine import ScoreRequestError, ScoringEngine, segment_ids
from .loading import load_engine
from .vocab import (
    MASK_PIECE,
    PieceInventory,
    ServiceConfigError,
    load_piece_inventory,
)

__version__ = "0.1.0"

__all__ = [
    "MASK_PIECE",
    "PieceInventory",
    "ScoreRequestError",
    "ScoringEngine",
    "ServiceConfigError",
    "create_app",
    "load_engine",
    "load_piece_inventory",
    "segment_ids",
    "__version__",
]
