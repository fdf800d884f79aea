"""Exception hierarchy shared across the package."""


class LatticeWalkError(Exception):
    """Base class for all package errors."""


class ValidationError(LatticeWalkError, ValueError):
    """Parameters fall outside the regime where an object is defined."""


class ConfigurationError(LatticeWalkError, ValueError):
    """Incompatible combination of lattice family and measure."""


class CapacityError(LatticeWalkError):
    """Requested level or degree exceeds the enumeration bounds."""


class SpectrumMismatchError(LatticeWalkError):
    """A predicted eigenvalue failed exact verification against a kernel."""

    def __init__(self, value, message):
        super().__init__(message)
        self.value = value


class NotApplicableError(LatticeWalkError):
    """A theorem's hypotheses do not hold for the requested case."""


class FormulaInapplicableError(LatticeWalkError, ValueError):
    """A closed formula would divide by zero (e.g. repeated eigenvalues)."""
