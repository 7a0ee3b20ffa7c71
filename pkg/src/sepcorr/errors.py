"""Exception types shared across the package."""


class SepcorrError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitianError(SepcorrError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""


class NegativeEigenvalueError(SepcorrError):
    """An eigenvalue sits below the clamp window where a probability was expected."""


class DimensionMismatchError(SepcorrError):
    """Operands act on spaces of different dimension."""


class UnsupportedDimsError(SepcorrError):
    """Operation is restricted to two-qubit (2, 2) systems."""


class InvalidSpecError(SepcorrError):
    """A mixture or sampler specification violates its constraints."""


class ParseError(SepcorrError):
    """A state file is malformed; the message carries line/field context."""


class InvariantViolationError(SepcorrError):
    """A constructed matrix fails the density-matrix invariants."""


class NumericalError(SepcorrError):
    """An internal numerical guarantee was violated."""
