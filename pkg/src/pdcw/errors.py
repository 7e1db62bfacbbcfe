"""Exception hierarchy shared by all pdcw modules."""


class PdcwError(Exception):
    """Base class for every error raised by pdcw."""


class InvalidConfig(PdcwError, ValueError):
    """A physical parameter is missing, non-finite or non-positive."""


class DegenerateGroupVelocity(PdcwError, ValueError):
    """Signal and idler group indices coincide; the first-order model breaks down."""


class WindowTooSmall(PdcwError, ValueError):
    """A sampling window truncates or aliases the function being sampled."""


class SingularBlock(PdcwError, ArithmeticError):
    """A quadratic-form block is too ill-conditioned to invert."""


class QuadratureNotConverged(PdcwError, ArithmeticError):
    """Node doubling changed a quadrature result beyond tolerance."""


class NotConverged(PdcwError, ArithmeticError):
    """Grid refinement changed a derived quantity beyond tolerance."""


class NegativeIntensity(PdcwError, ValueError):
    """An intensity grid contains samples below the numerical floor."""
