"""Shared exception types; the CLI maps these onto exit codes."""


class ResourceLimitError(ValueError):
    """A requested computation exceeds a hard resource bound."""


class EvaluationError(RuntimeError):
    """A kernel or integrand produced non-finite samples."""


class AccuracyError(RuntimeError):
    """Adaptive refinement stopped before reaching the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NotPositiveDefiniteError(RuntimeError):
    """Cholesky factorization failed; `pivot` is the 1-based failing minor."""

    def __init__(self, message, pivot):
        super().__init__(message)
        self.pivot = pivot


class DegenerateCapError(ValueError):
    """Cap self-convolution normalizer a = (g * g)(1) is not positive."""
