"""Exception types shared across the package."""


class RichlinesError(Exception):
    """Base class for all package-specific errors."""


class InvalidPolynomialError(RichlinesError, ValueError):
    """Minimal polynomial input is empty or not monic with integer coefficients."""


class InvalidParameterError(RichlinesError, ValueError):
    """A numeric parameter is outside its documented range."""


class BasisMismatchError(RichlinesError, ValueError):
    """Two elements from different bases were combined."""


class ZeroDivisorError(RichlinesError, ArithmeticError):
    """Division hit a nonzero zero divisor: the presented ring is not a domain
    (typically a reducible minimal polynomial). This is a basis-validity failure."""


class DegeneratePairError(RichlinesError, ValueError):
    """A line was requested through two equal points."""


class RTooLargeError(RichlinesError, ValueError):
    """The cell of the translate construction collapsed to a single element per
    axis; use a smaller r, a larger cell constant, or a larger n."""


class ConfigError(RichlinesError, ValueError):
    """Harness configuration failed validation."""
