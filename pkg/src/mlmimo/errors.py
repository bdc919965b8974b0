"""Exception types shared across the package."""


class MlmimoError(Exception):
    """Base class for all package errors."""


class SingularMatrix(MlmimoError):
    """A pivot fell below the singularity tolerance."""


class DimensionMismatch(MlmimoError):
    """Operand shapes are inconsistent."""


class DimensionTooLarge(MlmimoError):
    """The operation is restricted to small dimensions (n <= 16)."""


class SearchSpaceTooLarge(MlmimoError):
    """Exhaustive search guard: M**n exceeds the enumeration budget."""


class RejectionBudgetExceeded(MlmimoError):
    """Channel rejection sampling did not hit the target condition range."""


class CalibrationDiverged(MlmimoError):
    """Training-SNR bisection found no bracket inside the search interval."""


class NonFiniteLoss(MlmimoError):
    """Training aborted on a NaN/inf loss value."""

    def __init__(self, step, value):
        super().__init__(f"non-finite loss {value!r} at step {step}")
        self.step = step
        self.value = value


class FormatVersionMismatch(MlmimoError):
    """Checkpoint declares a format version this code does not understand."""


class CorruptCheckpoint(MlmimoError):
    """Checkpoint file is truncated, malformed, or internally inconsistent."""


class UnknownDetector(MlmimoError):
    """Detector specification string was not recognized."""


class MissingChannelFile(MlmimoError):
    """Experiment preset needs an externally supplied channel matrix."""


class NoTransitionFound(MlmimoError):
    """Boundary bisection saw no 0->1 coefficient flip inside the bracket."""
