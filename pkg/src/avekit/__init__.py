"""Dynamical-system solvers for absolute value equations ``A x - |x| - b = 0``."""
from .dynamics import (
    MODEL_NAMES,
    DynamicalModel,
    FixedTimeParams,
    MeeParams,
    make_model,
)
from .estimator import AVESolver, simulate
from .exceptions import (
    AvekitError,
    ConfigError,
    ConvergenceError,
    DimensionMismatch,
    PreconditionViolation,
    SingularMatrix,
)
from .ode import IntegratorOptions, Trajectory, integrate, integrate_fixed_step
from .problem import AveProblem, make_random_problem, make_tridiag_problem, residual
from .settling import SettlingReport, settling_bound, settling_table

__version__ = "0.1.0"

__all__ = [
    "AVESolver", "AveProblem", "AvekitError", "ConfigError", "ConvergenceError",
    "DimensionMismatch", "DynamicalModel", "FixedTimeParams", "IntegratorOptions",
    "MODEL_NAMES", "MeeParams", "PreconditionViolation", "SettlingReport", "SingularMatrix",
    "Trajectory", "integrate", "integrate_fixed_step", "make_model", "make_random_problem",
    "make_tridiag_problem", "residual", "settling_bound", "settling_table", "simulate",
]
