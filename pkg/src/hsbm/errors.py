"""Exception types raised across the package."""


class HSBMError(Exception):
    """Base class for all errors raised by :mod:`hsbm`."""


class InvalidParams(HSBMError, ValueError):
    pass


class OutOfRange(HSBMError, ValueError):
    """A derived probability fell outside [0, 1]."""


class TooLarge(HSBMError, ValueError):
    """Input exceeds an enumeration or support cap."""


class DegenerateModel(HSBMError, ValueError):
    """p == q (or p, q in {0, 1} where a log-likelihood is needed)."""


class EigFailure(HSBMError, RuntimeError):
    pass


class Asymmetric(HSBMError, ValueError):
    pass


class InvalidSpec(HSBMError, ValueError):
    """A tail specification violates the large-deviation hypotheses."""
