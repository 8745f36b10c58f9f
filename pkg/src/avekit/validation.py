"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array, column_or_1d

from .exceptions import DimensionMismatch


def check_square_system(A, b):
    """Validate an AVE system and return ``(A, b)`` as float64 arrays.

    ``A`` must be a finite square 2-D array and ``b`` a finite vector of
    matching length.
    """
    A = check_array(A, dtype=np.float64, ensure_2d=True, ensure_all_finite=True)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A must be square, got shape {A.shape}")
    b = column_or_1d(check_array(np.atleast_1d(b), dtype=np.float64, ensure_2d=False,
                                 ensure_all_finite=True))
    if b.shape[0] != A.shape[0]:
        raise DimensionMismatch(f"b has length {b.shape[0]}, A has {A.shape[0]} rows")
    return A, b


def check_initial_state(x0, n: int) -> np.ndarray:
    if x0 is None:
        return np.zeros(n)
    x0 = column_or_1d(check_array(np.atleast_1d(x0), dtype=np.float64, ensure_2d=False))
    if x0.shape[0] != n:
        raise DimensionMismatch(f"x0 has length {x0.shape[0]}, expected {n}")
    return x0


def check_positive(value, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value
