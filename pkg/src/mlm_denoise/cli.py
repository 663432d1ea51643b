"""Command line front end.

Three subcommands: `denoise` cleans a corpus, `corrupt` injects noise,
`eval` runs the corrupt-denoise-score loop end to end. Configuration
lives in JSON files; the scoring endpoint can be overridden by flag or
by the MLM_DENOISE_ENDPOINT environment variable, with flags winning.

Exit codes: 0 success, 1 usage or configuration problem, 2 backend
failure, 3 file I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path

from .backend import MlmBackend, RemoteBackend, RemoteConfig, load_table_oracle
from .denoiser import DenoiseConfig, denoise_sentence
from .errors import (
    BackendError,
    BackendUnavailableError,
    ConfigurationError,
    CorpusMismatchError,
    SentenceDenoiseError,
)
from .evaluation import run_experiment
from .noise import NoiseSpec, load_natural_table, perturb_corpus, write_alignment
from .vocab import Vocab, load_vocab

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BACKEND = 2
EXIT_IO = 3

ENDPOINT_ENV_VAR = "MLM_DENOISE_ENDPOINT"

_APP_KEYS = {"vocab", "oracle_fixture", "endpoint", "denoise", "workers", "remote"}
_DENOISE_KEYS = {"max_masks", "per_n_top_k", "candidate_cap", "max_pieces"}
_REMOTE_KEYS = {"timeout", "attempts", "backoff", "max_in_flight"}
_SPEC_KEYS = {"word_prob", "type_probs", "mode", "seed"}


@dataclass(frozen=True)
class AppConfig:
    vocab_path: Path
    oracle_fixture: Path | None
    endpoint: str | None
    denoise: DenoiseConfig
    workers: int
    remote_options: dict


def _read_json(path: Path) -> dict:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must hold a JSON object")
    return data


def _reject_unknown(data: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown key {unknown[0]!r} in {where}")


def load_app_config(
    path: str | Path,
    endpoint_override: str | None = None,
    workers_override: int | None = None,
) -> AppConfig:
    """Parse the app config, applying endpoint and worker overrides.

    Relative paths inside the file resolve against the file's folder.
    """
    path = Path(path)
    data = _read_json(path)
    _reject_unknown(data, _APP_KEYS, str(path))
    base = path.parent

    if "vocab" not in data:
        raise ConfigurationError(f"{path} is missing the 'vocab' path")
    vocab_path = base / data["vocab"]

    denoise_data = data.get("denoise", {})
    if not isinstance(denoise_data, dict):
        raise ConfigurationError(f"'denoise' in {path} must be an object")
    _reject_unknown(denoise_data, _DENOISE_KEYS, f"'denoise' of {path}")
    try:
        denoise = DenoiseConfig(**denoise_data)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad 'denoise' settings in {path}: {exc}") from exc

    remote_options = data.get("remote", {})
    if not isinstance(remote_options, dict):
        raise ConfigurationError(f"'remote' in {path} must be an object")
    _reject_unknown(remote_options, _REMOTE_KEYS, f"'remote' of {path}")

    workers = workers_override if workers_override is not None else data.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigurationError(f"workers must be a positive integer, got {workers!r}")

    endpoint = endpoint_override or os.environ.get(ENDPOINT_ENV_VAR) or data.get("endpoint")
    fixture = data.get("oracle_fixture")
    if endpoint_override or os.environ.get(ENDPOINT_ENV_VAR):
        fixture = None  # an explicit endpoint takes over completely
    if "endpoint" in data and data.get("oracle_fixture"):
        raise ConfigurationError(f"{path} names both 'endpoint' and 'oracle_fixture'; pick one")
    if not endpoint and not fixture:
        raise ConfigurationError(f"{path} must name either 'endpoint' or 'oracle_fixture'")

    return AppConfig(
        vocab_path=vocab_path,
        oracle_fixture=(base / fixture) if fixture else None,
        endpoint=endpoint,
        denoise=denoise,
        workers=workers,
        remote_options=dict(remote_options),
    )


def load_noise_spec(path: str | Path, seed_override: int | None = None) -> NoiseSpec:
    path = Path(path)
    data = _read_json(path)
    _reject_unknown(data, _SPEC_KEYS, str(path))
    if seed_override is not None:
        data["seed"] = seed_override
    if "type_probs" in data:
        data["type_probs"] = tuple(data["type_probs"])
    try:
        return NoiseSpec(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad noise settings in {path}: {exc}") from exc


def build_backend(app: AppConfig, vocab: Vocab) -> MlmBackend:
    if app.endpoint:
        try:
            remote = RemoteConfig(endpoint=app.endpoint, **app.remote_options)
        except TypeError as exc:
            raise ConfigurationError(f"bad 'remote' settings: {exc}") from exc
        return RemoteBackend(remote, vocab)
    assert app.oracle_fixture is not None
    return load_table_oracle(app.oracle_fixture, vocab)


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _write_lines(path: str, lines: list[str]) -> None:
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _denoise_lines(
    lines: list[str], backend: MlmBackend, vocab: Vocab, config: DenoiseConfig, workers: int
) -> tuple[list[str], list[tuple[int, SentenceDenoiseError]]]:
    """Denoise keeping input order; failed lines pass through unchanged."""
    results = list(lines)
    failures: list[tuple[int, SentenceDenoiseError]] = []

    def work(index: int) -> str:
        return denoise_sentence(lines[index], backend, vocab, config)

    if workers == 1:
        for index in range(len(lines)):
            try:
                results[index] = work(index)
            except SentenceDenoiseError as exc:
                failures.append((index, exc))
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(work, index): index for index in range(len(lines))}
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except SentenceDenoiseError as exc:
                    failures.append((index, exc))
    failures.sort(key=lambda item: item[0])
    for _, exc in failures:
        if isinstance(exc.__cause__, BackendUnavailableError):
            raise exc.__cause__
    return results, failures


def cmd_denoise(args: argparse.Namespace) -> int:
    app = load_app_config(args.config, endpoint_override=args.endpoint, workers_override=args.workers)
    vocab = load_vocab(app.vocab_path)
    backend = build_backend(app, vocab)
    lines = _read_lines(args.input)
    results, failures = _denoise_lines(lines, backend, vocab, app.denoise, app.workers)
    _write_lines(args.output, results)
    for index, exc in failures:
        print(f"line {index + 1}: word {exc.word_index}: {exc}", file=sys.stderr)
    if failures:
        print(f"{len(failures)} of {len(lines)} lines failed and were passed through", file=sys.stderr)
        return EXIT_BACKEND
    return EXIT_OK


def cmd_corrupt(args: argparse.Namespace) -> int:
    spec = load_noise_spec(args.spec, seed_override=args.seed)
    table = None
    if args.table:
        table = load_natural_table(args.table)
    elif spec.mode == "natural":
        raise ConfigurationError("natural mode needs --table")
    lines = _read_lines(args.input)
    noisy, records = perturb_corpus(lines, spec, table)
    _write_lines(args.output, noisy)
    alignment_path = args.alignment or f"{args.output}.alignment.jsonl"
    write_alignment(alignment_path, records)
    print(f"corrupted {len(records)} words across {len(lines)} sentences", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    app = load_app_config(args.config, endpoint_override=args.endpoint, workers_override=args.workers)
    spec = load_noise_spec(args.spec, seed_override=args.seed)
    table = load_natural_table(args.table) if args.table else None
    vocab = load_vocab(app.vocab_path)
    backend = build_backend(app, vocab)
    report = run_experiment(
        args.clean, spec, app.denoise, backend, vocab, args.outdir,
        natural_table=table, workers=app.workers,
    )
    print(f"corrupted words:    {report.corrupted_total}")
    print(f"corrected:          {report.corrected}")
    print(f"missed:             {report.missed}")
    print(f"clean words kept:   {report.clean_total - report.false_corrections}/{report.clean_total}")
    print(f"correction recall:  {report.correction_recall:.4f}")
    print(f"clean preservation: {report.clean_preservation:.4f}")
    print(f"artifacts in {args.outdir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlm-denoise",
        description="Clean noisy text with a masked-language-model backend.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    denoise = commands.add_parser("denoise", help="denoise a corpus, one sentence per line")
    denoise.add_argument("--input", required=True, help="noisy corpus, one sentence per line")
    denoise.add_argument("--output", required=True, help="where to write the cleaned corpus")
    denoise.add_argument("--config", required=True, help="app config JSON")
    denoise.add_argument("--workers", type=int, default=None, help="parallel sentences (default from config)")
    denoise.add_argument("--endpoint", default=None, help="scoring service URL (overrides config and env)")
    denoise.set_defaults(handler=cmd_denoise)

    corrupt = commands.add_parser("corrupt", help="inject reproducible noise into a clean corpus")
    corrupt.add_argument("--input", required=True, help="clean corpus, one sentence per line")
    corrupt.add_argument("--output", required=True, help="where to write the corrupted corpus")
    corrupt.add_argument("--spec", required=True, help="noise spec JSON")
    corrupt.add_argument("--table", default=None, help="misspelling TSV for natural mode")
    corrupt.add_argument("--alignment", default=None, help="where to write corruption records (JSONL)")
    corrupt.add_argument("--seed", type=int, default=None, help="override the spec seed")
    corrupt.set_defaults(handler=cmd_corrupt)

    evaluate = commands.add_parser("eval", help="corrupt, denoise and score a clean corpus")
    evaluate.add_argument("--clean", required=True, help="clean corpus, one sentence per line")
    evaluate.add_argument("--spec", required=True, help="noise spec JSON")
    evaluate.add_argument("--config", required=True, help="app config JSON")
    evaluate.add_argument("--outdir", required=True, help="artifact directory")
    evaluate.add_argument("--table", default=None, help="misspelling TSV for natural mode")
    evaluate.add_argument("--workers", type=int, default=None, help="parallel sentences (default from config)")
    evaluate.add_argument("--seed", type=int, default=None, help="override the spec seed")
    evaluate.add_argument("--endpoint", default=None, help="scoring service URL (overrides config and env)")
    evaluate.set_defaults(handler=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.handler(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BackendUnavailableError, BackendError, SentenceDenoiseError) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except CorpusMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
