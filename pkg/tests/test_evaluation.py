import json

import pytest

from mlm_denoise import (
    CorpusMismatchError,
    DenoiseConfig,
    EvalReport,
    NoiseRecord,
    NoiseSpec,
    run_experiment,
    score_corrections,
)

from helpers import UniformOracle, build_vocab

ALIGNMENT = [
    NoiseRecord(0, 3, "milk", "milc", "replace"),
    NoiseRecord(1, 1, "dog", "dgo", "swap"),
]
CLEAN = ["the cat drinks milk", "a dog"]
NOISY = ["the cat drinks milc", "a dgo"]


class TestEvalReport:
    def test_rates(self):
        report = EvalReport(
            corrupted_total=4, corrected=3, missed=1, clean_total=10, false_corrections=2
        )
        assert report.correction_recall == pytest.approx(0.75)
        assert report.clean_preservation == pytest.approx(0.8)

    def test_degenerate_conventions(self):
        nothing = EvalReport(0, 0, 0, 0, 0)
        assert nothing.correction_recall == 1.0
        assert nothing.clean_preservation == 1.0

    def test_to_dict_round_trips_through_json(self):
        report = EvalReport(2, 1, 1, 5, 0)
        data = json.loads(json.dumps(report.to_dict()))
        assert data["corrected"] == 1
        assert data["correction_recall"] == 0.5
        assert data["clean_preservation"] == 1.0


class TestScoreCorrections:
    def test_full_recovery(self):
        report = score_corrections(CLEAN, NOISY, CLEAN, ALIGNMENT)
        assert report.corrupted_total == 2
        assert report.corrected == 2
        assert report.missed == 0
        assert report.clean_total == 4
        assert report.false_corrections == 0

    def test_missed_corruption(self):
        denoised = ["the cat drinks milc", "a dog"]
        report = score_corrections(CLEAN, NOISY, denoised, ALIGNMENT)
        assert report.corrected == 1
        assert report.missed == 1

    def test_false_correction(self):
        denoised = ["thy cat drinks milk", "a dog"]
        report = score_corrections(CLEAN, NOISY, denoised, ALIGNMENT)
        assert report.false_corrections == 1
        assert report.clean_total == 4

    def test_comparisons_ignore_case(self):
        denoised = ["The cat drinks MILK", "a dog"]
        report = score_corrections(CLEAN, NOISY, denoised, ALIGNMENT)
        assert report.corrected == 2
        assert report.false_corrections == 0

    def test_corpus_length_mismatch(self):
        with pytest.raises(CorpusMismatchError):
            score_corrections(CLEAN, NOISY, CLEAN[:1], ALIGNMENT)

    def test_word_count_mismatch_names_the_sentence(self):
        with pytest.raises(CorpusMismatchError) as info:
            score_corrections(CLEAN, NOISY, ["the cat drinks milk", "a dog extra"], ALIGNMENT)
        assert info.value.sentence_index == 1

    def test_alignment_out_of_range(self):
        with pytest.raises(CorpusMismatchError):
            score_corrections(CLEAN, NOISY, CLEAN, [NoiseRecord(5, 0, "a", "b", "swap")])
        with pytest.raises(CorpusMismatchError):
            score_corrections(CLEAN, NOISY, CLEAN, [NoiseRecord(0, 9, "a", "b", "swap")])

    def test_alignment_must_match_the_noisy_corpus(self):
        wrong = [NoiseRecord(0, 3, "milk", "mxlk", "replace")]
        with pytest.raises(CorpusMismatchError, match="noisy corpus"):
            score_corrections(CLEAN, NOISY, CLEAN, wrong)

    def test_empty_everything(self):
        report = score_corrections([], [], [], [])
        assert report.correction_recall == 1.0


WORDS = ["abcdef", "ghijkl", "mnopqr", "stuvwx"]


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "clean.txt"
    path.write_text("abcdef ghijkl\nmnopqr stuvwx\nabcdef stuvwx\n")
    return path


class TestRunExperiment:
    def config(self):
        return DenoiseConfig(max_masks=2, per_n_top_k=(10, 3), candidate_cap=50)

    def test_full_loop_writes_artifacts(self, corpus_file, tmp_path):
        vocab = build_vocab(WORDS)
        backend = UniformOracle(vocab, WORDS)
        outdir = tmp_path / "out"
        report = run_experiment(
            corpus_file,
            NoiseSpec(word_prob=1.0, seed=8),
            self.config(),
            backend,
            vocab,
            outdir,
        )
        assert report.corrupted_total > 0
        # every corruption lands within edit distance two of its source,
        # far from every other vocabulary word, so recall is total
        assert report.correction_recall == 1.0
        assert report.false_corrections == 0
        for name in ("clean.txt", "noisy.txt", "denoised.txt", "alignment.jsonl", "report.json"):
            assert (outdir / name).exists()
        assert (outdir / "denoised.txt").read_text().splitlines() == [
            line.lower() for line in corpus_file.read_text().splitlines()
        ]
        stored = json.loads((outdir / "report.json").read_text())
        assert stored == report.to_dict()

    def test_noise_free_run_scores_perfect(self, corpus_file, tmp_path):
        vocab = build_vocab(WORDS)
        backend = UniformOracle(vocab, WORDS)
        report = run_experiment(
            corpus_file,
            NoiseSpec(word_prob=0.0),
            self.config(),
            backend,
            vocab,
            tmp_path / "out",
        )
        assert report.corrupted_total == 0
        assert report.correction_recall == 1.0
        assert report.clean_preservation == 1.0

    def test_worker_count_changes_nothing(self, corpus_file, tmp_path):
        vocab = build_vocab(WORDS)
        spec = NoiseSpec(word_prob=1.0, seed=8)
        serial = run_experiment(
            corpus_file, spec, self.config(), UniformOracle(vocab, WORDS), vocab,
            tmp_path / "serial",
        )
        threaded = run_experiment(
            corpus_file, spec, self.config(), UniformOracle(vocab, WORDS), vocab,
            tmp_path / "threaded", workers=4,
        )
        assert serial == threaded
        assert (tmp_path / "serial" / "denoised.txt").read_text() == (
            tmp_path / "threaded" / "denoised.txt"
        ).read_text()
