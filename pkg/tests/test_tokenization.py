import pytest
from hypothesis import given, strategies as st

from mlm_denoise import segment_sentence, tokenize_sentence
from mlm_denoise.tokenization import (
    MAX_WORD_CHARS,
    tokenize_words,
    wordpiece_tokenize,
    words_from_surfaces,
)

from helpers import build_vocab


def test_segmentation_offsets_and_skip():
    words = segment_sentence("The  cat, 42 ok!")
    surfaces = [(w.surface, w.start, w.end, w.skip) for w in words]
    assert surfaces == [
        ("The", 0, 3, False),
        ("cat,", 5, 9, False),
        ("42", 10, 12, True),
        ("ok!", 13, 16, False),
    ]


def test_segmentation_empty_and_whitespace():
    assert segment_sentence("") == []
    assert segment_sentence("   \t ") == []


def test_skip_requires_no_alphabetic_character():
    words = segment_sentence("... 12a ,,, a")
    assert [w.skip for w in words] == [True, False, True, False]


def test_greedy_prefers_longest_piece():
    vocab = build_vocab(["un", "##believ", "##able", "unbeliev", "##a", "##ble"])
    ids = wordpiece_tokenize("unbelievable", vocab)
    assert vocab.render(ids) == ["unbeliev", "##able"]


def test_longest_match_frozen_example():
    # worked by hand: "lea" is the longest prefix, then "##ke" covers "ke"
    vocab = build_vocab(["lea", "le", "##ake", "##ke", "##a"])
    assert vocab.render(wordpiece_tokenize("leake", vocab)) == ["lea", "##ke"]
    assert vocab.render(wordpiece_tokenize("LeAkE", vocab)) == ["lea", "##ke"]


def test_unmatchable_word_becomes_unknown():
    vocab = build_vocab(["aa"])
    assert wordpiece_tokenize("zz", vocab) == [vocab.unknown_id]


def test_partial_match_still_unknown():
    # "aab" starts with a known piece but "b" has no continuation
    vocab = build_vocab(["aa", "a"])
    assert wordpiece_tokenize("aab", vocab) == [vocab.unknown_id]


def test_overlong_word_is_unknown():
    vocab = build_vocab(["a", "##a"])
    assert wordpiece_tokenize("a" * (MAX_WORD_CHARS + 1), vocab) == [vocab.unknown_id]
    assert len(wordpiece_tokenize("a" * MAX_WORD_CHARS, vocab)) == MAX_WORD_CHARS


def test_sentence_spans_are_contiguous_and_cover():
    vocab = build_vocab(["the", "cat", "##s", "on", "mat"])
    sentence = tokenize_sentence("the cats sat on 42 mat", vocab)
    assert sentence.word_spans[0].start == 0
    assert sentence.word_spans[-1].end == len(sentence.pieces)
    for left, right in zip(sentence.word_spans, sentence.word_spans[1:]):
        assert left.end == right.start


def test_skipped_words_are_still_tokenized():
    vocab = build_vocab(["a"])
    sentence = tokenize_sentence("a 42 a", vocab)
    span = sentence.word_spans[1]
    assert sentence.words[1].skip
    assert sentence.pieces[span.start : span.end] == (vocab.unknown_id,)


def test_words_from_surfaces_round_trip():
    words = words_from_surfaces(["ab", "cd,", "42"])
    assert [w.surface for w in words] == ["ab", "cd,", "42"]
    assert [w.skip for w in words] == [False, False, True]
    with pytest.raises(ValueError):
        words_from_surfaces(["a b"])
    with pytest.raises(ValueError):
        words_from_surfaces([""])


@given(st.text(alphabet="ab", min_size=1, max_size=12))
def test_pieces_reassemble_to_lowercased_word(word):
    vocab = build_vocab(["a", "b", "aa", "ab", "##a", "##b", "##ba"])
    ids = wordpiece_tokenize(word, vocab)
    if ids == [vocab.unknown_id]:
        return
    rebuilt = vocab.piece(ids[0]) + "".join(vocab.piece(i)[2:] for i in ids[1:])
    assert rebuilt == word.lower()
    assert not vocab.is_continuation(vocab.piece(ids[0]))
    for piece_id in ids[1:]:
        assert vocab.is_continuation(vocab.piece(piece_id))


@given(st.lists(st.text(alphabet="ab1 ", min_size=0, max_size=6), min_size=0, max_size=6))
def test_tokenize_words_covers_every_word(fragments):
    vocab = build_vocab(["a", "b", "##a", "##b"])
    text = " ".join(fragments)
    sentence = tokenize_sentence(text, vocab)
    assert len(sentence.word_spans) == len(sentence.words)
    if sentence.words:
        assert sentence.word_spans[-1].end == len(sentence.pieces)
    for word, span in zip(sentence.words, sentence.word_spans):
        assert span.end > span.start
        assert len(sentence.pieces[span.start : span.end]) >= 1


def test_tokenize_words_matches_sentence_pipeline():
    vocab = build_vocab(["a", "b", "##a"])
    sentence = tokenize_sentence("ba  ab", vocab)
    rebuilt = tokenize_words(words_from_surfaces(["ba", "ab"]), vocab)
    assert rebuilt.pieces == sentence.pieces
    assert rebuilt.word_spans == sentence.word_spans
