"""Reproducible corpus corruption.

Two modes: synthetic character edits (swap, delete, replace, insert)
that always leave the first and last character of a word alone, and
lookup-table substitution driven by a TSV of observed misspellings.
Every draw comes from the pinned generator in `rng`, seeded per
sentence, so a corpus corrupts identically across runs and machines.
"""

from __future__ import annotations

import json
import logging
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ConfigurationError
from .rng import Xoshiro256StarStar, derive_seed
from .tokenization import segment_sentence

logger = logging.getLogger(__name__)

NOISE_TYPES = ("swap", "delete", "replace", "insert")
_LETTERS = string.ascii_lowercase


@dataclass(frozen=True)
class NoiseSpec:
    """How much noise to inject and from which source."""

    word_prob: float = 0.2
    type_probs: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    mode: str = "artificial"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "type_probs", tuple(self.type_probs))
        if not 0.0 <= self.word_prob <= 1.0:
            raise ValueError(f"word_prob must be within [0, 1], got {self.word_prob}")
        if len(self.type_probs) != len(NOISE_TYPES):
            raise ValueError(f"type_probs needs {len(NOISE_TYPES)} entries, got {len(self.type_probs)}")
        if any(p < 0.0 for p in self.type_probs):
            raise ValueError(f"type_probs must be non-negative, got {self.type_probs}")
        if abs(sum(self.type_probs) - 1.0) > 1e-9:
            raise ValueError(f"type_probs must sum to 1, got {sum(self.type_probs)}")
        if self.mode not in ("artificial", "natural"):
            raise ValueError(f"mode must be 'artificial' or 'natural', got {self.mode!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit value, got {self.seed}")


@dataclass(frozen=True)
class NoiseRecord:
    """One corrupted word: where it sits and what happened to it."""

    sentence: int
    word: int
    original: str
    corrupted: str
    noise_type: str


def swap_noise(word: str, rng: Xoshiro256StarStar) -> str:
    """Exchange two adjacent interior characters."""
    if len(word) < 4:
        return word
    p = 1 + rng.below(len(word) - 3)
    return word[:p] + word[p + 1] + word[p] + word[p + 2 :]


def delete_noise(word: str, rng: Xoshiro256StarStar) -> str:
    """Drop one interior character."""
    if len(word) < 3:
        return word
    p = 1 + rng.below(len(word) - 2)
    return word[:p] + word[p + 1 :]


def replace_noise(word: str, rng: Xoshiro256StarStar) -> str:
    """Overwrite one interior character with a different letter."""
    if len(word) < 3:
        return word
    p = 1 + rng.below(len(word) - 2)
    alternatives = _LETTERS.replace(word[p].lower(), "")
    return word[:p] + rng.choice(alternatives) + word[p + 1 :]


def insert_noise(word: str, rng: Xoshiro256StarStar) -> str:
    """Slot a random letter between two existing characters."""
    if len(word) < 2:
        return word
    p = 1 + rng.below(len(word) - 1)
    return word[:p] + rng.choice(_LETTERS) + word[p:]


_NOISE_FUNCTIONS = {
    "swap": swap_noise,
    "delete": delete_noise,
    "replace": replace_noise,
    "insert": insert_noise,
}


def load_natural_table(path: str | Path) -> dict[str, list[str]]:
    """Read a word<TAB>variant table of observed misspellings.

    Keys and variants are lowercased; a variant equal to its key or
    containing whitespace is dropped (the second would change the word
    count of any sentence it lands in).
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read noise table {path}: {exc}") from exc
    table: dict[str, list[str]] = {}
    for number, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ConfigurationError(
                f"{path}:{number}: expected exactly two tab-separated fields, got {len(fields)}"
            )
        word, variant = fields[0].strip().lower(), fields[1].strip().lower()
        if not word or not variant:
            raise ConfigurationError(f"{path}:{number}: empty word or variant")
        if any(ch.isspace() for ch in variant):
            logger.warning("%s:%d: variant %r contains whitespace, dropped", path, number, variant)
            continue
        if variant == word:
            logger.warning("%s:%d: variant equals its key, dropped", path, number)
            continue
        variants = table.setdefault(word, [])
        if variant not in variants:
            variants.append(variant)
    return table


def perturb_sentence(
    text: str,
    spec: NoiseSpec,
    rng: Xoshiro256StarStar,
    sentence_index: int = 0,
    table: dict[str, list[str]] | None = None,
) -> tuple[str, list[NoiseRecord]]:
    """Corrupt one sentence in place, leaving spacing untouched."""
    words = segment_sentence(text)
    records: list[NoiseRecord] = []
    replacements: list[tuple[int, int, str]] = []
    for index, word in enumerate(words):
        if word.skip:
            continue
        if not rng.chance(spec.word_prob):
            continue
        if spec.mode == "artificial":
            noise_type = NOISE_TYPES[rng.categorical(spec.type_probs)]
            corrupted = _NOISE_FUNCTIONS[noise_type](word.surface, rng)
        else:
            variants = (table or {}).get(word.surface.lower())
            if not variants:
                continue
            noise_type = "natural"
            corrupted = variants[rng.below(len(variants))]
        if corrupted == word.surface:
            continue
        replacements.append((word.start, word.end, corrupted))
        records.append(
            NoiseRecord(
                sentence=sentence_index,
                word=index,
                original=word.surface,
                corrupted=corrupted,
                noise_type=noise_type,
            )
        )
    if not replacements:
        return text, records
    parts = []
    cursor = 0
    for start, end, corrupted in replacements:
        parts.append(text[cursor:start])
        parts.append(corrupted)
        cursor = end
    parts.append(text[cursor:])
    return "".join(parts), records


def perturb_corpus(
    sentences: Sequence[str],
    spec: NoiseSpec,
    table: dict[str, list[str]] | None = None,
) -> tuple[list[str], list[NoiseRecord]]:
    """Corrupt a corpus sentence by sentence.

    Each sentence gets its own generator derived from the spec seed and
    the sentence index, so corruption of sentence i never depends on
    how many draws earlier sentences consumed.
    """
    if spec.mode == "natural" and table is None:
        raise ConfigurationError("natural mode needs a misspelling table")
    noisy: list[str] = []
    records: list[NoiseRecord] = []
    for index, sentence in enumerate(sentences):
        rng = Xoshiro256StarStar(derive_seed(spec.seed, index))
        corrupted, sentence_records = perturb_sentence(sentence, spec, rng, index, table)
        noisy.append(corrupted)
        records.extend(sentence_records)
    return noisy, records


def write_alignment(path: str | Path, records: Sequence[NoiseRecord]) -> None:
    """Persist corruption records as one JSON object per line."""
    lines = [
        json.dumps(
            {
                "sentence": record.sentence,
                "word": record.word,
                "original": record.original,
                "corrupted": record.corrupted,
                "noise_type": record.noise_type,
            },
            ensure_ascii=False,
        )
        for record in records
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_alignment(path: str | Path) -> list[NoiseRecord]:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read alignment {path}: {exc}") from exc
    records = []
    for number, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            records.append(
                NoiseRecord(
                    sentence=int(data["sentence"]),
                    word=int(data["word"]),
                    original=data["original"],
                    corrupted=data["corrupted"],
                    noise_type=data["noise_type"],
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError(f"{path}:{number}: malformed alignment record: {exc}") from exc
    return records
