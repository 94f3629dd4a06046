"""Exception types shared across the package."""


class NotPrime(ValueError):
    """Raised when a field characteristic is not prime."""


class NotPrimePower(ValueError):
    """Raised when an order q cannot be written as p^k."""


class CapExceeded(RuntimeError):
    """A requested enumeration is larger than the configured cap."""

    def __init__(self, size, cap, what="state space"):
        super().__init__(f"{what} of size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class DimensionMismatch(ValueError):
    """Matrices of incompatible size or over different fields."""


class MembershipViolation(ValueError):
    """An argument is not in the group or Lie algebra it must belong to."""


class InternalInconsistency(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class VerificationFailed(RuntimeError):
    """A structural claim failed on concrete data."""


class NotAssociated(ValueError):
    """Dimension vectors whose block multisets differ."""


class DuplicateAbscissa(ValueError):
    """Interpolation points with a repeated x value."""


class NoFit(RuntimeError):
    """No (multiset, exponent) pair reproduces the observed orders."""
