"""Exception hierarchy shared across the package.

The CLI maps RiskspanError (and OSError) to exit code 1; argparse handles
usage errors with exit code 2.
"""


class RiskspanError(Exception):
    """Base class for all package errors."""


class CorpusFormatError(RiskspanError):
    """A corpus JSONL file violates the schema; message carries the line number."""


class UnknownRiskLevel(CorpusFormatError):
    """Risk value outside {a, b, c, d}."""


class SpanOutOfBounds(CorpusFormatError):
    """A gold span does not satisfy 0 <= start < end <= len(text)."""


class DuplicateDocumentId(CorpusFormatError):
    """Two documents in one corpus share an id."""


class GeneratorConfigError(RiskspanError):
    """Synthetic generator configuration cannot produce the requested corpus."""


class ModelFormatError(RiskspanError):
    """A model file cannot be loaded."""


class UnsupportedVersion(ModelFormatError):
    """Model file format_version is not one this build reads."""


class MalformedModel(ModelFormatError):
    """Model file is truncated, not JSON, or shape-inconsistent."""


class TrainingDiverged(RiskspanError):
    """A non-finite loss was encountered; message names epoch and batch."""


class EvaluationInputError(RiskspanError):
    """Prediction/gold inputs cannot be aligned (missing or extra ids)."""
