"""Exception hierarchy shared by all modules."""


class SecureNCError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SecureNCError, ValueError):
    pass


class LengthMismatchError(DimensionError):
    pass


class NonInvertibleError(SecureNCError, ArithmeticError):
    pass


class SingularMatrixError(NonInvertibleError):
    pass


class SingularKernelError(SingularMatrixError):
    """The received coding kernels do not span the full source space."""


class InvalidParityError(SecureNCError, ValueError):
    """Recovered parity symbols cannot form a valid Vandermonde key."""


class SearchExhaustedError(SecureNCError, RuntimeError):
    pass


class UnknownEdgeError(SecureNCError, KeyError):
    pass


class CyclicTopologyError(SecureNCError, ValueError):
    pass


class CapacityError(SecureNCError, ValueError):
    pass


class InstanceTooLargeError(SecureNCError, ValueError):
    pass


class MissingSecretError(SecureNCError, ValueError):
    pass


class FormatError(SecureNCError, ValueError):
    """A serialized artifact could not be parsed."""
