"""Sentence segmentation and greedy WordPiece tokenization.

Words are whitespace-delimited and keep their original surfaces; a word is
skipped (never cleaned) iff it contains no alphabetic character, so plain
punctuation and numbers pass through while mixed tokens like "3rd" are
processed. Tokenization lowercases first (uncased-vocabulary convention).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .vocab import Vocab

# Greedy matching cost is bounded by refusing absurdly long words.
MAX_WORD_CHARS = 100

_WORD_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class Word:
    """One whitespace-delimited word and its [start, end) source offsets."""

    surface: str
    start: int
    end: int
    skip: bool

    @property
    def normalized(self) -> str:
        return self.surface.lower()


@dataclass(frozen=True)
class PieceSpan:
    """Half-open [start, end) range of piece indices belonging to one word."""

    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class TokenizedSentence:
    """Words plus the flat piece sequence and per-word piece spans.

    Spans are contiguous, ordered, and cover the piece list exactly, so
    replacing a word's pieces is pure index arithmetic.
    """

    words: tuple[Word, ...]
    pieces: tuple[int, ...]
    word_spans: tuple[PieceSpan, ...]


def _is_skip(surface: str) -> bool:
    return not any(ch.isalpha() for ch in surface)


def segment_sentence(text: str) -> list[Word]:
    """Split text on whitespace into Words, preserving order and surfaces.

    Empty or whitespace-only text yields an empty list.
    """
    return [
        Word(m.group(), m.start(), m.end(), skip=_is_skip(m.group()))
        for m in _WORD_RE.finditer(text)
    ]


def words_from_surfaces(surfaces: list[str]) -> list[Word]:
    """Build Words for a synthetic sentence, as if joined by single spaces."""
    words = []
    pos = 0
    for surface in surfaces:
        if not surface or any(ch.isspace() for ch in surface):
            raise ValueError(f"not a single word: {surface!r}")
        words.append(Word(surface, pos, pos + len(surface), skip=_is_skip(surface)))
        pos += len(surface) + 1
    return words


def wordpiece_tokenize(word: str, vocab: Vocab) -> list[int]:
    """Greedy longest-match-first segmentation of one word into piece ids.

    The word is lowercased first. At each step the longest vocabulary
    prefix wins, with non-initial pieces looked up in their
    continuation-prefixed form. If any step finds no match, or the word
    exceeds MAX_WORD_CHARS, the whole word becomes the unknown token.
    """
    if not word:
        raise ValueError("cannot tokenize an empty word")
    chars = word.lower()
    if len(chars) > MAX_WORD_CHARS:
        return [vocab.unknown_id]
    ids: list[int] = []
    start = 0
    while start < len(chars):
        end = len(chars)
        found = None
        while start < end:
            piece = chars[start:end]
            if start > 0:
                piece = vocab.continuation_prefix + piece
            piece_id = vocab.pieces.get(piece)
            if piece_id is not None:
                found = piece_id
                break
            end -= 1
        if found is None:
            return [vocab.unknown_id]
        ids.append(found)
        start = end
    return ids


def tokenize_words(words: list[Word], vocab: Vocab) -> TokenizedSentence:
    """Tokenize every word (skipped ones included; they are still context)."""
    pieces: list[int] = []
    spans: list[PieceSpan] = []
    for word in words:
        word_pieces = wordpiece_tokenize(word.surface, vocab)
        spans.append(PieceSpan(len(pieces), len(pieces) + len(word_pieces)))
        pieces.extend(word_pieces)
    return TokenizedSentence(tuple(words), tuple(pieces), tuple(spans))


def tokenize_sentence(text: str, vocab: Vocab) -> TokenizedSentence:
    """Segment text and map each word to a contiguous piece span."""
    return tokenize_words(segment_sentence(text), vocab)
