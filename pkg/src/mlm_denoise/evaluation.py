"""Scoring a denoising run against its clean source.

The alignment produced during corruption says exactly which words were
touched, so scoring is positional: corrupted words either return to
their clean form (corrected) or not (missed), and untouched words
either survive (preserved) or get clobbered (false correction).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .backend import MlmBackend
from .denoiser import DenoiseConfig, denoise_corpus
from .errors import CorpusMismatchError
from .noise import NoiseRecord, NoiseSpec, perturb_corpus, write_alignment
from .vocab import Vocab


@dataclass(frozen=True)
class EvalReport:
    corrupted_total: int
    corrected: int
    missed: int
    clean_total: int
    false_corrections: int

    @property
    def correction_recall(self) -> float:
        # nothing corrupted means nothing to miss
        if self.corrupted_total == 0:
            return 1.0
        return self.corrected / self.corrupted_total

    @property
    def clean_preservation(self) -> float:
        if self.clean_total == 0:
            return 1.0
        return (self.clean_total - self.false_corrections) / self.clean_total

    def to_dict(self) -> dict:
        return {
            "corrupted_total": self.corrupted_total,
            "corrected": self.corrected,
            "missed": self.missed,
            "clean_total": self.clean_total,
            "false_corrections": self.false_corrections,
            "correction_recall": self.correction_recall,
            "clean_preservation": self.clean_preservation,
        }


def score_corrections(
    clean: Sequence[str],
    noisy: Sequence[str],
    denoised: Sequence[str],
    alignment: Sequence[NoiseRecord],
) -> EvalReport:
    """Compare three parallel corpora word by word, case-insensitively."""
    if not (len(clean) == len(noisy) == len(denoised)):
        raise CorpusMismatchError(
            min(len(clean), len(noisy), len(denoised)),
            f"corpora differ in length: clean={len(clean)} noisy={len(noisy)} denoised={len(denoised)}",
        )
    split_clean = [line.split() for line in clean]
    split_noisy = [line.split() for line in noisy]
    split_denoised = [line.split() for line in denoised]
    for index, (a, b, c) in enumerate(zip(split_clean, split_noisy, split_denoised)):
        if not (len(a) == len(b) == len(c)):
            raise CorpusMismatchError(
                index,
                f"sentence {index} word counts differ: clean={len(a)} noisy={len(b)} denoised={len(c)}",
            )
    corrupted: set[tuple[int, int]] = set()
    for record in alignment:
        if not 0 <= record.sentence < len(clean):
            raise CorpusMismatchError(record.sentence, f"alignment sentence {record.sentence} out of range")
        if not 0 <= record.word < len(split_noisy[record.sentence]):
            raise CorpusMismatchError(
                record.sentence,
                f"alignment word {record.word} out of range in sentence {record.sentence}",
            )
        observed = split_noisy[record.sentence][record.word]
        if observed.lower() != record.corrupted.lower():
            raise CorpusMismatchError(
                record.sentence,
                f"alignment says word {record.word} of sentence {record.sentence} is "
                f"{record.corrupted!r} but the noisy corpus has {observed!r}",
            )
        corrupted.add((record.sentence, record.word))
    corrected = missed = clean_total = false_corrections = 0
    for s, words in enumerate(split_clean):
        for w, clean_word in enumerate(words):
            restored = split_denoised[s][w].lower() == clean_word.lower()
            if (s, w) in corrupted:
                if restored:
                    corrected += 1
                else:
                    missed += 1
            else:
                clean_total += 1
                if not restored:
                    false_corrections += 1
    return EvalReport(
        corrupted_total=len(corrupted),
        corrected=corrected,
        missed=missed,
        clean_total=clean_total,
        false_corrections=false_corrections,
    )


def run_experiment(
    corpus_path: str | Path,
    noise_spec: NoiseSpec,
    denoise_config: DenoiseConfig,
    backend: MlmBackend,
    vocab: Vocab,
    outdir: str | Path,
    natural_table: dict[str, list[str]] | None = None,
    workers: int = 1,
) -> EvalReport:
    """Corrupt a clean corpus, denoise it, score it, and leave artifacts.

    The output directory receives clean.txt, noisy.txt, denoised.txt,
    alignment.jsonl and report.json.
    """
    clean = Path(corpus_path).read_text(encoding="utf-8").splitlines()
    noisy, records = perturb_corpus(clean, noise_spec, natural_table)
    denoised = denoise_corpus(noisy, backend, vocab, denoise_config, workers=workers)
    report = score_corrections(clean, noisy, denoised, records)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, lines in (("clean.txt", clean), ("noisy.txt", noisy), ("denoised.txt", denoised)):
        (outdir / name).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    write_alignment(outdir / "alignment.jsonl", records)
    (outdir / "report.json").write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    return report
