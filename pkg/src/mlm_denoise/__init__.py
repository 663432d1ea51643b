"""Contextual text denoising driven by a masked-language-model backend."""

from .backend import (
    MlmBackend,
    PiecePrediction,
    RemoteBackend,
    RemoteConfig,
    ScoreRequest,
    TableOracle,
    load_table_oracle,
)
from .denoiser import (
    Candidate,
    DenoiseConfig,
    denoise_corpus,
    denoise_sentence,
    edit_distance,
    select_candidate,
)
from .errors import (
    BackendError,
    BackendUnavailableError,
    ConfigurationError,
    CorpusMismatchError,
    MlmDenoiseError,
    SentenceDenoiseError,
)
from .evaluation import EvalReport, run_experiment, score_corrections
from .noise import NoiseRecord, NoiseSpec, load_natural_table, perturb_corpus, perturb_sentence
from .rng import Xoshiro256StarStar, derive_seed
from .tokenization import TokenizedSentence, Word, segment_sentence, tokenize_sentence
from .vocab import Vocab, load_vocab

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "BackendUnavailableError",
    "Candidate",
    "ConfigurationError",
    "CorpusMismatchError",
    "DenoiseConfig",
    "EvalReport",
    "MlmBackend",
    "MlmDenoiseError",
    "NoiseRecord",
    "NoiseSpec",
    "PiecePrediction",
    "RemoteBackend",
    "RemoteConfig",
    "ScoreRequest",
    "SentenceDenoiseError",
    "TableOracle",
    "TokenizedSentence",
    "Vocab",
    "Word",
    "Xoshiro256StarStar",
    "denoise_corpus",
    "denoise_sentence",
    "derive_seed",
    "edit_distance",
    "load_natural_table",
    "load_table_oracle",
    "load_vocab",
    "perturb_corpus",
    "perturb_sentence",
    "run_experiment",
    "score_corrections",
    "segment_sentence",
    "select_candidate",
    "tokenize_sentence",
    "__version__",
]
