"""Exception types shared across the package."""


class QTamperError(Exception):
    """Base class for all package errors."""


class ModulusMismatch(QTamperError):
    """Operands live in different prime fields."""


class DivisionByZero(QTamperError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class ZeroPolynomial(QTamperError):
    """Root counting on the zero polynomial: every point is a root."""


class DimMismatch(QTamperError):
    """Incompatible vector/matrix shapes."""


class RankDeficient(QTamperError):
    """QR pivot fell below the rank tolerance."""


class OutOfRange(QTamperError):
    """Parameter outside the supported range."""


class BudgetExceeded(QTamperError):
    """Exhaustive enumeration request beyond the fixed budget."""


class SingularGram(QTamperError):
    """Weingarten Gram matrix is singular (dimension below moment order)."""


class NonScalarMismatch(QTamperError):
    """Two matrices expected to be proportional are not."""


class IdentityTampering(QTamperError):
    """Tampering word is the identity; the experiment is undefined."""


class InvalidParams(QTamperError):
    """Code parameters violate a construction precondition."""


class NotUnitary(QTamperError):
    """Matrix fails the unitarity tolerance."""


class NotNormalized(QTamperError):
    """State vector fails the normalization tolerance."""


class ConsistencyError(QTamperError):
    """Internal cross-check failed (two computation routes disagree)."""


class InputError(QTamperError):
    """Malformed input file or CLI value."""
