"""Exception hierarchy shared by every layer of the package."""


class LiouvilleError(Exception):
    """Base class for all errors raised by this package."""


class FieldError(LiouvilleError, ValueError):
    pass


class NonSquarefreeRadicand(FieldError):
    pass


class DependentRadicands(FieldError):
    """Some product of radicands is a perfect square."""


class DuplicateSymbol(FieldError):
    pass


class BadEnclosure(FieldError):
    pass


class ScalarSyntaxError(LiouvilleError, ValueError):
    pass


class UnknownToken(ScalarSyntaxError):
    pass


class DivisionByZeroScalar(LiouvilleError, ZeroDivisionError):
    pass


class FieldMismatch(LiouvilleError, TypeError):
    pass


class InsufficientPrecision(LiouvilleError, ArithmeticError):
    pass


class OperatorError(LiouvilleError, ValueError):
    """Malformed operator data (bad weights, wrong dimensions, ...)."""


class UnsupportedComponent(LiouvilleError):
    pass


class QuadratureFailure(LiouvilleError, ArithmeticError):
    pass


class CostGuardExceeded(LiouvilleError):
    pass


class UsageError(LiouvilleError):
    pass


class DocumentError(LiouvilleError, ValueError):
    """Structurally invalid operator or generator document."""
