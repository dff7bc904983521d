"""Exception types shared across the library."""


class SrlError(Exception):
    """Base class for all library-specific failures."""


class InvalidParameterError(SrlError, ValueError):
    """An argument violates a documented precondition."""


class DimensionMismatchError(SrlError, ValueError):
    """Shapes of interacting objects do not agree."""


class NotSymmetricError(SrlError, ValueError):
    """A matrix expected to be symmetric is not, beyond tolerance."""


class SingularSystemError(SrlError, RuntimeError):
    """A linear system is rank-deficient or too ill-conditioned to solve."""


class GenerationFailureError(SrlError, RuntimeError):
    """A randomized constructor exhausted its retry budget."""
