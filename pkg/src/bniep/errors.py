"""Exception hierarchy shared by every module."""


class BniepError(Exception):
    """Base class for all errors raised by :mod:`bniep`."""


class StructuralError(BniepError, ValueError):
    """A matrix or block violates a structural invariant (symmetry, persymmetry, sign)."""


class ParameterError(BniepError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class InfeasibleError(BniepError):
    """No construction applies to the requested data.

    ``verdicts`` carries every sufficient-condition verdict evaluated on the
    way; ``reference`` holds verdicts of conditions that are reported for
    comparison only (they guarantee a symmetric, not a bisymmetric, matrix).
    """

    def __init__(self, message, verdicts=(), reference=()):
        super().__init__(message)
        self.verdicts = list(verdicts)
        self.reference = list(reference)


class CapacityError(BniepError):
    """A search would exceed its configured size cap."""


class CapabilityError(BniepError):
    """The request needs input this library cannot synthesise on its own."""


class ConvergenceError(BniepError, ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class NumericalError(BniepError, ArithmeticError):
    """A defensive post-condition failed; signals an upstream bug or bad conditioning."""
