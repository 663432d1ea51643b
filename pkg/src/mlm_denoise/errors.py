"""Exception hierarchy shared across the package."""


class MlmDenoiseError(Exception):
    """Base class for every error this package raises on purpose."""


class ConfigurationError(MlmDenoiseError):
    """A vocabulary, fixture, table, or application config is unusable."""


class BackendError(MlmDenoiseError):
    """A scoring request was malformed or a response violated the contract."""


class BackendUnavailableError(BackendError):
    """The scoring backend could not be reached after the retry budget."""


class SentenceDenoiseError(MlmDenoiseError):
    """Denoising a sentence aborted; records how far the sweep got."""

    def __init__(self, word_index: int, message: str):
        super().__init__(message)
        self.word_index = word_index


class CorpusMismatchError(MlmDenoiseError):
    """Corpora that must be word-aligned are not; records the sentence."""

    def __init__(self, sentence_index: int, message: str):
        super().__init__(message)
        self.sentence_index = sentence_index
