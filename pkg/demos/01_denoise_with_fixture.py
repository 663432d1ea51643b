"""Clean one damaged sentence with a lookup-table scorer.

No model and no network: the scorer is a table keyed by the exact
masked sequences the denoiser asks about.  The demo builds those keys
with the same machinery the denoiser uses, then watches it repair
"milc" while leaving the healthy words alone.

Run:  python3 demos/01_denoise_with_fixture.py
"""

from mlm_denoise import (
    DenoiseConfig,
    TableOracle,
    Vocab,
    denoise_sentence,
    edit_distance,
    tokenize_sentence,
)
from mlm_denoise.denoiser import (
    augment_variant,
    build_masked_variants,
    generate_candidates,
)

PIECES = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "cat", "drinks", "milk", "milc", "water", "##s",
]

SENTENCE = "the cat drinks milc"
INTENDED = ["the", "cat", "drinks", "milk"]


def visit_keys(vocab, config, surfaces, word_index):
    """Fingerprints of every masked variant for one word visit."""
    sentence = tokenize_sentence(" ".join(surfaces), vocab)
    keys = []
    for variant in build_masked_variants(sentence, word_index, config, vocab):
        augmented = augment_variant(variant, sentence, vocab, config.max_pieces)
        keys.append((variant.mask_count, " ".join(vocab.render(augmented.pieces))))
    return keys


def build_oracle(vocab, config):
    # Visits happen left to right, and each correction becomes context
    # for the words after it, so the working sentence evolves exactly
    # the way it will during denoising.
    contexts = {}
    working = SENTENCE.split()
    for index, wanted in enumerate(INTENDED):
        for mask_count, key in visit_keys(vocab, config, working, index):
            if mask_count == 1:
                contexts[key] = [[(wanted, -0.1), ("water", -4.0)]]
            else:
                # continuation-only answers can never start a word, so
                # multi-piece readings contribute no candidates here
                contexts[key] = [[("##s", -9.0)]] * mask_count
        working[index] = wanted
    return TableOracle(vocab=vocab, contexts=contexts, default_pieces=["the"])


def main():
    vocab = Vocab.from_pieces(PIECES)
    config = DenoiseConfig()
    oracle = build_oracle(vocab, config)

    print(f"input:  {SENTENCE!r}")
    print()

    # Peek inside the visit for the damaged word (index 3).
    sentence = tokenize_sentence(SENTENCE, vocab)
    variants = build_masked_variants(sentence, 3, config, vocab)
    print("masked variants for 'milc':")
    augmented = []
    for variant in variants:
        item = augment_variant(variant, sentence, vocab, config.max_pieces)
        augmented.append(item)
        print(f"  {variant.mask_count} mask(s): {' '.join(vocab.render(item.pieces))}")
    print()

    pool = generate_candidates(augmented, oracle, config, vocab)
    print("candidates for 'milc' (surface, summed log prob, edit distance):")
    for candidate in pool.candidates:
        distance = edit_distance(candidate.surface, "milc")
        print(f"  {candidate.surface:8s} {candidate.mlm_score:6.1f} {distance}")
    print()

    cleaned = denoise_sentence(SENTENCE, oracle, vocab, config)
    print(f"output: {cleaned!r}")
    assert cleaned == " ".join(INTENDED)


if __name__ == "__main__":
    main()
