"""Shared fixtures data for the service tests."""

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
LETTERS = [chr(c) for c in range(ord("a"), ord("z") + 1)]
WORDS = [f"w{i:02d}" for i in range(20)]
CONTINUATIONS = [f"##{c}" for c in "abcdefghijklm"]
# 64 rows; the tiny model config must agree on this count exactly
ALL_PIECES = SPECIALS + LETTERS + WORDS + CONTINUATIONS
