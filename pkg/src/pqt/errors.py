"""Exception types raised across the package."""


class PQTError(Exception):
    """Base class for all package errors."""


class NotNormalized(PQTError, ValueError):
    pass


class OutOfRange(PQTError, ValueError):
    pass


class CapacityExceeded(PQTError, ValueError):
    pass


class BasisNotOrthonormal(PQTError, ValueError):
    pass


class UnknownQubitLabel(PQTError, KeyError):
    pass


class NoMatchedBasis(PQTError, RuntimeError):
    """No exponent pair up to the search ceiling yields two correctable outcomes."""


class UnsupportedDepth(PQTError, ValueError):
    pass


class InvalidSpec(PQTError, ValueError):
    pass
