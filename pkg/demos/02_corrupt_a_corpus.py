"""Damage a clean corpus reproducibly and inspect the damage records.

Corruption is driven entirely by the seed in the spec: the same spec
applied to the same sentences always produces the same noisy corpus,
and each sentence draws from its own random stream, so reordering or
slicing the corpus never changes what happens to a given line.

Run:  python3 demos/02_corrupt_a_corpus.py
"""

from mlm_denoise import NoiseSpec, perturb_corpus

CLEAN = [
    "the cat drinks milk",
    "a dog sleeps on the mat",
    "rain falls on the quiet street",
    "she reads by the window at night, page 42",
    "fresh bread smells like morning",
]


def main():
    spec = NoiseSpec(
        word_prob=0.5,
        type_probs=(0.25, 0.25, 0.25, 0.25),
        mode="artificial",
        seed=7,
    )

    noisy, records = perturb_corpus(CLEAN, spec)

    print("clean -> noisy")
    for clean, dirty in zip(CLEAN, noisy):
        marker = "  " if clean == dirty else "* "
        print(f"{marker}{clean}")
        if clean != dirty:
            print(f"  {dirty}")
    print()

    print(f"{len(records)} damage records:")
    for record in records:
        print(
            f"  sentence {record.sentence} word {record.word}: "
            f"{record.original!r} -> {record.corrupted!r} ({record.noise_type})"
        )
    print()

    # words without letters are never touched, and the run repeats exactly
    again, _ = perturb_corpus(CLEAN, spec)
    assert again == noisy
    assert all("42" in line for line in (CLEAN[3], noisy[3]))
    print("second run identical; the number stayed put")

    # a different seed is a different corpus
    other, _ = perturb_corpus(CLEAN, NoiseSpec(
        word_prob=0.5,
        type_probs=(0.25, 0.25, 0.25, 0.25),
        mode="artificial",
        seed=8,
    ))
    print(f"seed 8 differs from seed 7: {other != noisy}")


if __name__ == "__main__":
    main()
