"""Exception hierarchy shared by all involsvd modules."""


class InvolSvdError(Exception):
    """Base class for all library errors."""


class DimensionError(InvolSvdError, ValueError):
    """Input has the wrong shape (non-square, empty, mismatched)."""


class InvalidInputError(InvolSvdError, ValueError):
    """Input entries are unusable (NaN/Inf, complex where real is required)."""


class InvalidSpecError(InvolSvdError, ValueError):
    """Generator specification violates its invariants."""


class StructureViolationError(InvolSvdError):
    """A required matrix structure does not hold within tolerance.

    Carries the offending residual when one was measured.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PairingError(InvolSvdError):
    """A singular value has no reciprocal partner and is not close to 1."""

    def __init__(self, message, orphan=None):
        super().__init__(message)
        self.orphan = orphan


class CouplingError(InvolSvdError):
    """The coupling matrix deviates from its expected sparsity pattern."""

    def __init__(self, message, entry=None, value=None):
        super().__init__(message)
        self.entry = entry
        self.value = value


class WrongClassError(InvolSvdError):
    """Operation applied to a structure class it does not support."""


class NumericalError(InvolSvdError):
    """Numerical breakdown: no convergence, rank mismatch, lost definiteness."""


class MatrixFormatError(InvolSvdError, ValueError):
    """Matrix file cannot be parsed; carries the 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
