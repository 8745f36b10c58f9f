"""Dense real linear-algebra kernels.

Factorizations and triangular solves are backed by LAPACK through
:mod:`scipy.linalg`; the extremal singular values are available both by
power / inverse-power iteration on ``A.T @ A`` and by a full LAPACK SVD.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import ConvergenceError, DimensionMismatch, SingularMatrix

SINGULAR_RTOL = 1e-12
POWER_TOL = 1e-12
POWER_MAX_ITER = 10_000
POWER_SEED = 20230101


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Return ``A`` as a finite, nonempty 2-D float64 array."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.size == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf")
    return A


def as_vector(x, n: int | None = None, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {x.shape[0]}, expected {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains NaN or Inf")
    return x


def _square(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {A.shape}")
    return A


def matvec(A, x) -> np.ndarray:
    A = as_matrix(A)
    x = as_vector(x, A.shape[1])
    return A @ x


@dataclass(frozen=True)
class LuFactorization:
    """Packed ``P A = L U`` factors with LAPACK pivot indices."""

    lu: np.ndarray
    piv: np.ndarray
    n: int

    def __post_init__(self):
        self.lu.setflags(write=False)
        self.piv.setflags(write=False)

    @property
    def L(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    @property
    def U(self) -> np.ndarray:
        return np.triu(self.lu)

    @property
    def perm(self) -> np.ndarray:
        """Row permutation ``p`` such that ``A[p] == L @ U``."""
        p = np.arange(self.n)
        for i, j in enumerate(self.piv):
            p[i], p[j] = p[j], p[i]
        return p


def lu_factor(A) -> LuFactorization:
    """Partial-pivoting LU factorization.

    Raises :class:`SingularMatrix` when any ``|U[i, i]|`` is below
    ``1e-12`` times the largest row 1-norm of ``A``.
    """
    A = _square(A)
    n = A.shape[0]
    scale = np.abs(A).sum(axis=1).max()
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    k = int(np.argmin(pivots))
    if pivots[k] < SINGULAR_RTOL * scale:
        raise SingularMatrix(
            f"pivot {k} has magnitude {pivots[k]:.3e} below threshold {SINGULAR_RTOL * scale:.3e}"
        )
    return LuFactorization(lu=lu, piv=piv, n=n)


def solve(F: LuFactorization, rhs) -> np.ndarray:
    rhs = as_vector(rhs, F.n, name="rhs")
    return scipy.linalg.lu_solve((F.lu, F.piv), rhs, check_finite=False)


def _power(op, n: int, tol: float, max_iter: int) -> float:
    v = np.random.default_rng(POWER_SEED).standard_normal(n)
    v /= np.linalg.norm(v)
    prev = None
    for _ in range(max_iter):
        w = op(v)
        rq = float(v @ w)
        if prev is not None and abs(rq - prev) <= tol * abs(rq):
            return rq
        prev = rq
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
    raise ConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def spectral_norm(A, method: str = "svd", tol: float = POWER_TOL,
                  max_iter: int = POWER_MAX_ITER) -> float:
    """Largest singular value of ``A``.

    ``method="power"`` runs power iteration on ``A.T @ A`` from a seeded
    start vector and stops when successive Rayleigh quotients agree to
    ``tol`` (relative). It converges slowly when the top singular values
    are clustered, in which case :class:`ConvergenceError` is raised.
    ``method="svd"`` uses LAPACK and is exact to rounding.
    """
    A = as_matrix(A)
    if method == "svd":
        return float(scipy.linalg.svdvals(A, check_finite=False)[0])
    if method == "power":
        return float(np.sqrt(_power(lambda v: A.T @ (A @ v), A.shape[1], tol, max_iter)))
    raise ValueError(f"unknown method {method!r}")


def sigma_min(A, method: str = "svd", tol: float = POWER_TOL,
              max_iter: int = POWER_MAX_ITER) -> float:
    """Smallest singular value of a square nonsingular ``A``.

    ``method="power"`` applies inverse power iteration to ``A.T @ A``
    using a single LU factorization of ``A.T @ A``.
    """
    A = _square(A)
    if method == "svd":
        # Factor first so singular input raises SingularMatrix consistently.
        lu_factor(A)
        return float(scipy.linalg.svdvals(A, check_finite=False)[-1])
    if method == "power":
        F = lu_factor(A.T @ A)
        inv = _power(lambda v: solve(F, v), A.shape[0], tol, max_iter)
        return float(1.0 / np.sqrt(inv))
    raise ValueError(f"unknown method {method!r}")
