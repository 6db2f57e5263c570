"""Exception types shared across the pipeline.

Every error raised by this package derives from PiaError so callers can
catch pipeline failures with a single except clause; the CLI maps the
class name into its exit message.
"""


class PiaError(Exception):
    """Base class for all pipeline errors."""


class InvalidInput(PiaError):
    """Caller-supplied data violates a precondition (empty audio, bad intervals, ...)."""


class AdapterError(PiaError):
    """An external-model adapter is unavailable or misconfigured."""


class DecodeError(PiaError):
    """A frame or media payload could not be decoded."""


class NoFaceError(PiaError):
    """No face was detected where one is required."""


class CacheError(PiaError):
    """Feature cache file is corrupt, truncated, or of an unsupported version."""


class ShapeError(PiaError):
    """Tensor or array shape does not match the contract."""


class EmptySequence(PiaError):
    """An operation that needs at least one valid entry received none."""


class EmptySeries(PiaError):
    """Statistics requested over a series with zero valid pairs."""


class NumericalError(PiaError):
    """Non-finite values where finite ones are required."""


class MetricError(PiaError):
    """Evaluation metric is undefined for the given data (e.g. single-class test set)."""


class InvalidDataset(PiaError):
    """Dataset fails a structural requirement (e.g. only one class present)."""


class InvalidConfig(PiaError):
    """Unknown configuration name or invalid configuration value."""


class ZeroNormWarning(UserWarning):
    """A zero-norm identity embedding made cosine similarity undefined for a pair."""
