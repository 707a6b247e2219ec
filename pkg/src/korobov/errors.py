"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInput(ValueError):
    """Input data cannot determine the requested quantity (e.g. all x equal)."""


class InsufficientData(ValueError):
    """Not enough usable data points for a fit."""


class CapExceeded(Exception):
    """An enumeration hit its configured cap.

    ``lower_bound`` is a certified lower bound for the quantity that was
    being computed (for counts: the true count is at least this value).
    """

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class Unsupported(Exception):
    """Base class for requests the underlying theory does not answer."""


class UnsupportedFamily(Unsupported):
    pass


class UnsupportedClass(Unsupported):
    pass


class UnsupportedCriterion(Unsupported):
    pass
