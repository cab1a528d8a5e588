"""Exception types raised across the package."""


class FreqlensError(Exception):
    """Base class for all errors raised by freqlens."""


class DimensionError(FreqlensError, ValueError):
    """Input shape violates a contract (non-square image, size mismatch, ...)."""


class ParameterError(FreqlensError, ValueError):
    """A parameter is outside its valid range."""


class SymmetryError(FreqlensError, ValueError):
    """A spectrum lost conjugate symmetry and would reconstruct to complex pixels."""


class DegenerateEmbeddingError(FreqlensError, ValueError):
    """An embedding backend produced a zero vector; similarity is undefined."""


class DegenerateProfileError(FreqlensError, ValueError):
    """An influence profile carries no signal (all deltas ~ 0)."""


class MetricError(FreqlensError, ValueError):
    """A verification metric cannot be computed from the given scores."""


class ManifestError(FreqlensError, ValueError):
    """A pair-manifest file is malformed."""


class ModelFileError(FreqlensError, ValueError):
    """A model file or its sidecar is missing, unreadable, or inconsistent."""
