"""Exception hierarchy shared by all crossalign subsystems.

Validation errors mean the input data or arguments are malformed; numerical
errors mean an otherwise well-formed computation left its stable regime.
The CLI maps these onto distinct exit codes (2 and 3 respectively).
"""


class CrossAlignError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CrossAlignError):
    """Malformed input data, file, or argument combination."""


class NumericalError(CrossAlignError):
    """A computation became numerically degenerate."""


class BadMagicError(ValidationError):
    """File does not start with the expected magic bytes."""


class TruncatedFileError(ValidationError):
    """File ended before the header-declared payload was complete."""


class DimensionMismatchError(ValidationError):
    """Rows of a matrix (or paired matrices) disagree on dimensionality."""


class NonFiniteValueError(ValidationError):
    """A matrix contains NaN or infinity."""


class ShapeMismatchError(ValidationError):
    """Operand shapes are incompatible for the requested operation."""


class ZeroRowError(ValidationError):
    """A row with (near-)zero Euclidean norm where a direction is required."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"row {index} has zero norm")


class EmptyPairingError(ValidationError):
    """A row pairing was supplied but contains no pairs."""


class MissingCrossCovarianceError(ValidationError):
    """Operation needs the cross-covariance but the bundle has none."""


class ZeroVarianceDimensionError(ValidationError):
    """A feature dimension has zero variance where standardization is needed."""


class EmptyRelevantSetError(ValidationError):
    """A retrieval query has an empty relevant set."""


class InvalidDistributionError(ValidationError):
    """Source distribution parameters are outside the supported range."""


class DegenerateDirectionError(ValidationError):
    """A projection direction has zero within-view variance."""


class SingularMapError(NumericalError):
    """A linear map lost invertibility (|det| below threshold)."""

    def __init__(self, message: str = "linear map is singular", pair=None):
        # `pair` carries the partial training state so history survives aborts.
        self.pair = pair
        super().__init__(message)


class NotPositiveDefiniteError(NumericalError):
    """A covariance that must be positive definite is not."""
