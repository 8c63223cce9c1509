"""Exception types raised by the solvers.

The CLI maps :class:`ConfigurationError` to exit code 1 and
:class:`NumericalError` subclasses to exit code 2.
"""


class CSReduceError(Exception):
    pass


class ConfigurationError(CSReduceError, ValueError):
    """A grid, parameter block or config file violates a guard."""


class DimensionError(CSReduceError, ValueError):
    """Fields live on incompatible grids."""


class InputError(CSReduceError, ValueError):
    """Physically invalid input, e.g. a negative density."""


class NumericalError(CSReduceError, RuntimeError):
    pass


class DomainOverflowError(NumericalError):
    """Too much mass reached the edge of the computational box."""


class InstabilityError(NumericalError):
    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"non-finite values at t = {t:.6g}")


class ConvergenceError(NumericalError):
    def __init__(self, message, energies=()):
        self.energies = list(energies)
        super().__init__(message)
