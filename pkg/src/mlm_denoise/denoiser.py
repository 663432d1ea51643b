"""Sequential word-by-word sentence cleaning.

Each word that carries at least one alphabetic character is visited
left to right. The word's piece span is replaced by one to `max_masks`
mask tokens, each masked copy is paired with the current state of the
sentence, and the backend's per-mask predictions are recombined into
candidate replacement words. The candidate closest to the observed word
by edit distance wins, and the sentence is updated in place so later
words are scored against already-cleaned left context.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .backend import MlmBackend, ScoreRequest
from .errors import BackendError, SentenceDenoiseError
from .tokenization import TokenizedSentence, tokenize_words, tokenize_sentence, words_from_surfaces
from .vocab import Vocab

DEFAULT_MAX_MASKS = 4
DEFAULT_PER_N_TOP_K = (3000, 5, 3, 2)
DEFAULT_CANDIDATE_CAP = 3068
DEFAULT_MAX_PIECES = 512


@dataclass(frozen=True)
class DenoiseConfig:
    max_masks: int = DEFAULT_MAX_MASKS
    per_n_top_k: tuple[int, ...] = DEFAULT_PER_N_TOP_K
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    max_pieces: int = DEFAULT_MAX_PIECES

    def __post_init__(self):
        object.__setattr__(self, "per_n_top_k", tuple(self.per_n_top_k))
        if self.max_masks < 1:
            raise ValueError(f"max_masks must be >= 1, got {self.max_masks}")
        if len(self.per_n_top_k) != self.max_masks:
            raise ValueError(
                f"per_n_top_k needs one entry per mask count: "
                f"{len(self.per_n_top_k)} entries for max_masks={self.max_masks}"
            )
        if any(k < 1 for k in self.per_n_top_k):
            raise ValueError(f"per_n_top_k entries must be >= 1, got {self.per_n_top_k}")
        if self.candidate_cap < 1:
            raise ValueError(f"candidate_cap must be >= 1, got {self.candidate_cap}")
        # [CLS] + one mask + [SEP] + [SEP] is the smallest useful pairing
        if self.max_pieces < 4:
            raise ValueError(f"max_pieces must be >= 4, got {self.max_pieces}")


@dataclass(frozen=True)
class MaskedVariant:
    """One masked copy of the sentence, before pairing."""

    mask_count: int
    pieces: tuple[int, ...]
    mask_positions: tuple[int, ...]


@dataclass(frozen=True)
class AugmentedVariant:
    """Masked copy paired with the unmasked sentence, ready to score."""

    mask_count: int
    pieces: tuple[int, ...]
    mask_positions: tuple[int, ...]


@dataclass
class Candidate:
    surface: str
    piece_count: int
    mlm_score: float
    edit_dist: int | None = None


@dataclass
class CandidateSet:
    """Ranked candidates plus the pre-filter pool size per mask count."""

    candidates: list[Candidate]
    raw_pool_sizes: list[int] = field(default_factory=list)


def build_masked_variants(
    sentence: TokenizedSentence, word_index: int, config: DenoiseConfig, vocab: Vocab
) -> tuple[MaskedVariant, ...]:
    """Replace one word's piece span with 1..max_masks mask tokens."""
    if not 0 <= word_index < len(sentence.words):
        raise ValueError(f"word index {word_index} outside sentence of {len(sentence.words)} words")
    if sentence.words[word_index].skip:
        raise ValueError(f"word {word_index} ({sentence.words[word_index].surface!r}) is not denoisable")
    span = sentence.word_spans[word_index]
    head = sentence.pieces[: span.start]
    tail = sentence.pieces[span.end :]
    variants = []
    for mask_count in range(1, config.max_masks + 1):
        masks = (vocab.mask_id,) * mask_count
        variants.append(
            MaskedVariant(
                mask_count=mask_count,
                pieces=head + masks + tail,
                mask_positions=tuple(range(span.start, span.start + mask_count)),
            )
        )
    return tuple(variants)


def augment_variant(
    variant: MaskedVariant, sentence: TokenizedSentence, vocab: Vocab, max_pieces: int
) -> AugmentedVariant:
    """Pair the masked copy with the unmasked sentence as a second segment.

    The combined sequence is capped at max_pieces by truncating the
    second segment from its end; the masked copy itself is never cut,
    so mask positions only shift by the leading sequence-start token.
    """
    budget = max_pieces - len(variant.pieces) - 3
    second = sentence.pieces[: max(budget, 0)]
    pieces = (
        (vocab.sequence_start_id,)
        + variant.pieces
        + (vocab.separator_id,)
        + second
        + (vocab.separator_id,)
    )
    return AugmentedVariant(
        mask_count=variant.mask_count,
        pieces=pieces,
        mask_positions=tuple(position + 1 for position in variant.mask_positions),
    )


def _combo_surface(piece_ids: tuple[int, ...], vocab: Vocab) -> str | None:
    """Join a piece combination into a word, or None if ill-formed.

    A well-formed word starts with a non-continuation piece and extends
    only through continuation pieces; special tokens never take part.
    """
    if any(vocab.is_special_id(piece_id) for piece_id in piece_ids):
        return None
    first = vocab.piece(piece_ids[0])
    if vocab.is_continuation(first):
        return None
    parts = [first]
    for piece_id in piece_ids[1:]:
        piece = vocab.piece(piece_id)
        if not vocab.is_continuation(piece):
            return None
        parts.append(piece[len(vocab.continuation_prefix) :])
    return "".join(parts)


def generate_candidates(
    variants: Sequence[AugmentedVariant],
    backend: MlmBackend,
    config: DenoiseConfig,
    vocab: Vocab,
) -> CandidateSet:
    """Score every masked variant and recombine predictions into words.

    Each variant contributes the Cartesian product of its per-mask
    top-k predictions; ill-formed piece sequences are dropped, repeated
    surfaces keep their best-scoring reading, and the final list is
    ranked by score and capped.
    """
    best: dict[str, Candidate] = {}
    raw_pool_sizes = []
    for variant in variants:
        top_k = config.per_n_top_k[variant.mask_count - 1]
        predictions = backend.score(
            ScoreRequest(
                pieces=variant.pieces,
                mask_positions=variant.mask_positions,
                top_k=top_k,
            )
        )
        pool = 1
        for entries in predictions:
            pool *= len(entries)
        raw_pool_sizes.append(pool)
        for combo in itertools.product(*predictions):
            piece_ids = tuple(entry.piece_id for entry in combo)
            surface = _combo_surface(piece_ids, vocab)
            if surface is None:
                continue
            score = sum(entry.log_prob for entry in combo)
            known = best.get(surface)
            if known is None or score > known.mlm_score:
                best[surface] = Candidate(
                    surface=surface, piece_count=variant.mask_count, mlm_score=score
                )
    ranked = sorted(best.values(), key=lambda c: (-c.mlm_score, c.piece_count, c.surface))
    return CandidateSet(candidates=ranked[: config.candidate_cap], raw_pool_sizes=raw_pool_sizes)


def edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance, ignoring case."""
    a, b = a.lower(), b.lower()
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, char_a in enumerate(a, start=1):
        current = [i]
        for j, char_b in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (char_a != char_b),
                )
            )
        previous = current
    return previous[-1]


def select_candidate(candidates: Iterable[Candidate], noisy_word: str) -> Candidate:
    """Pick the candidate nearest the observed word.

    Distance ties fall to the higher model score, then the shorter
    piece sequence, then alphabetical order so the outcome is stable.
    """
    pool = list(candidates)
    if not pool:
        raise ValueError("cannot select from an empty candidate list")
    for candidate in pool:
        candidate.edit_dist = edit_distance(candidate.surface, noisy_word)
    return min(pool, key=lambda c: (c.edit_dist, -c.mlm_score, c.piece_count, c.surface))


def denoise_sentence(
    text: str, backend: MlmBackend, vocab: Vocab, config: DenoiseConfig | None = None
) -> str:
    """Clean one sentence, visiting words left to right.

    Words without an alphabetic character pass through untouched but
    still appear in the context the backend sees. Replacements happen
    in place, so each visit scores against partly-cleaned text. The
    result joins words with single spaces.
    """
    config = config or DenoiseConfig()
    original = tokenize_sentence(text, vocab)
    if not original.words:
        return text
    surfaces = [word.surface for word in original.words]
    for index, word in enumerate(original.words):
        if word.skip:
            continue
        working = tokenize_words(words_from_surfaces(surfaces), vocab)
        variants = build_masked_variants(working, index, config, vocab)
        augmented = [
            augment_variant(variant, working, vocab, config.max_pieces) for variant in variants
        ]
        try:
            pool = generate_candidates(augmented, backend, config, vocab)
        except BackendError as exc:
            raise SentenceDenoiseError(index, str(exc)) from exc
        if not pool.candidates:
            continue
        chosen = select_candidate(pool.candidates, surfaces[index])
        if chosen.surface != surfaces[index].lower():
            surfaces[index] = chosen.surface
    return " ".join(surfaces)


def denoise_corpus(
    sentences: Sequence[str],
    backend: MlmBackend,
    vocab: Vocab,
    config: DenoiseConfig | None = None,
    workers: int = 1,
) -> list[str]:
    """Clean many sentences, preserving order regardless of worker count."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(sentences) < 2:
        return [denoise_sentence(line, backend, vocab, config) for line in sentences]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda line: denoise_sentence(line, backend, vocab, config), sentences))
