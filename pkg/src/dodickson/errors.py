"""Exception types raised across the package."""


class DoDicksonError(Exception):
    """Base class for all package errors."""


class NotPrime(DoDicksonError, ValueError):
    pass


class EvenCharacteristic(DoDicksonError, ValueError):
    pass


class UnsupportedCharacteristic(DoDicksonError, ValueError):
    pass


class ReducibleModulus(DoDicksonError, ValueError):
    pass


class NotPrimitive(DoDicksonError, ValueError):
    """The modulus was declared primitive but its root has smaller order."""


class FieldMismatch(DoDicksonError, TypeError):
    pass


class DivisionByZero(DoDicksonError, ZeroDivisionError):
    pass


class ZeroInput(DoDicksonError, ValueError):
    pass


class InvalidK(DoDicksonError, ValueError):
    pass


class NotDOShaped(DoDicksonError, ValueError):
    pass


class FieldTooLarge(DoDicksonError, ValueError):
    pass


class PolynomialSyntaxError(DoDicksonError, ValueError):
    pass


class UnboundParameter(DoDicksonError, ValueError):
    """A polynomial string mentions ``a`` but no value was supplied."""
