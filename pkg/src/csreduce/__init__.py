"""Quasi-1D reduction of the trapped Chern-Simons-Schrodinger equation to a
cubic-quintic NLS: 2D and 1D solvers, gauge fields, projector and ground states."""
from .errors import (ConfigurationError, ConvergenceError, CSReduceError, DimensionError,
                     DomainOverflowError, InputError, InstabilityError, NumericalError)
from .fields import Field1D, Field2D, Grid1D, Grid2D, VectorField2D, load_snapshot, save_snapshot
from .params import Params1D, Params2D, strip_grid

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "ConvergenceError", "CSReduceError", "DimensionError", "DomainOverflowError",
    "InputError", "InstabilityError", "NumericalError",
    "Field1D", "Field2D", "Grid1D", "Grid2D", "VectorField2D", "load_snapshot", "save_snapshot",
    "Params1D", "Params2D", "strip_grid",
]
