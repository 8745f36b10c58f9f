"""Absolute value equations ``A x - |x| - b = 0``: residuals, reformulations,
error bounds and problem generators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import linalg
from .exceptions import DimensionMismatch, PreconditionViolation

KNOWN_SOLUTION_TOL = 1e-12


@dataclass(frozen=True)
class AveProblem:
    """A square AVE instance, optionally carrying its known solution."""

    A: np.ndarray
    b: np.ndarray
    known_solution: np.ndarray | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        A = linalg.as_matrix(self.A)
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got shape {A.shape}")
        n = A.shape[0]
        b = linalg.as_vector(self.b, n, name="b")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        A.setflags(write=False)
        b.setflags(write=False)
        if self.known_solution is not None:
            xs = linalg.as_vector(self.known_solution, n, name="known_solution")
            xs.setflags(write=False)
            object.__setattr__(self, "known_solution", xs)
            r = A @ xs - np.abs(xs) - b
            scale = 1.0 + np.abs(b).max() + np.abs(A @ xs).max()
            if np.abs(r).max() > KNOWN_SOLUTION_TOL * scale:
                raise ValueError(
                    f"known_solution is inconsistent with b: |r|_inf = {np.abs(r).max():.3e}"
                )

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __eq__(self, other):
        if not isinstance(other, AveProblem):
            return NotImplemented
        if (self.known_solution is None) != (other.known_solution is None):
            return False
        same = np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b)
        if self.known_solution is not None:
            same = same and np.array_equal(self.known_solution, other.known_solution)
        return bool(same)

    __hash__ = None


def residual(p: AveProblem, x) -> np.ndarray:
    """``r(x) = A x - |x| - b``."""
    x = linalg.as_vector(x, p.n)
    return p.A @ x - np.abs(x) - p.b


def glcp_parts(p: AveProblem, x):
    """Return ``(Q, F, <Q, F>)`` with ``Q = Ax + x - b`` and ``F = Ax - x - b``.

    ``x`` solves the AVE exactly when ``Q >= 0``, ``F >= 0`` and the
    inner product vanishes.
    """
    x = linalg.as_vector(x, p.n)
    Ax = p.A @ x
    Q = Ax + x - p.b
    F = Ax - x - p.b
    return Q, F, float(Q @ F)


@dataclass(frozen=True)
class LcpTransform:
    """Change of variables ``u = (A - I) x - b`` to the LCP ``(M, q)`` with
    ``M = (A + I)(A - I)^{-1}`` and ``q = (M - I) b``."""

    M: np.ndarray
    q: np.ndarray
    b: np.ndarray
    A_minus_I: np.ndarray
    factor: linalg.LuFactorization

    @property
    def n(self) -> int:
        return self.factor.n

    def to_u(self, x) -> np.ndarray:
        return self.A_minus_I @ linalg.as_vector(x, self.n) - self.b

    def to_x(self, u) -> np.ndarray:
        return linalg.solve(self.factor, linalg.as_vector(u, self.n, name="u") + self.b)


def lcp_transform(p: AveProblem) -> LcpTransform:
    eye = np.eye(p.n)
    A_minus_I = p.A - eye
    F = linalg.lu_factor(A_minus_I)
    # M^T solves (A - I)^T M^T = (A + I)^T, reusing the same factors.
    Mt = scipy.linalg.lu_solve((F.lu, F.piv), (p.A + eye).T, trans=1, check_finite=False)
    M = np.ascontiguousarray(Mt.T)
    q = M @ p.b - p.b
    for arr in (M, q, A_minus_I):
        arr.setflags(write=False)
    return LcpTransform(M=M, q=q, b=p.b, A_minus_I=A_minus_I, factor=F)


@dataclass(frozen=True)
class ErrorBoundConstants:
    """``L1 = ||A + I||``, ``L2 = ||A - I||`` and both strong-monotonicity
    constants ``mu_lemma = sigma_min^2 - 1`` and ``mu_table = sigma_min - 1``."""

    L1: float
    L2: float
    sigma_min: float
    mu_lemma: float
    mu_table: float

    def mu(self, convention: str) -> float:
        if convention == "lemma":
            return self.mu_lemma
        if convention == "table":
            return self.mu_table
        raise ValueError(f"unknown mu convention {convention!r}; expected 'table' or 'lemma'")


def error_bound_constants(A, method: str = "svd") -> ErrorBoundConstants:
    A = linalg.as_matrix(A)
    eye = np.eye(A.shape[0])
    s = linalg.sigma_min(A, method=method)
    return ErrorBoundConstants(
        L1=linalg.spectral_norm(A + eye, method=method),
        L2=linalg.spectral_norm(A - eye, method=method),
        sigma_min=s,
        mu_lemma=s * s - 1.0,
        mu_table=s - 1.0,
    )


def _require_unique_solvability(consts: ErrorBoundConstants):
    if consts.sigma_min <= 1.0:
        raise PreconditionViolation(
            f"sigma_min(A) = {consts.sigma_min:.6g} <= 1; unique solvability not certified"
        )


def error_bounds(p: AveProblem, consts: ErrorBoundConstants, x) -> tuple[float, float]:
    """Two-sided bound on ``||x - x*||`` from the residual norm.

    Returns ``(||r|| / (L1 + L2), (L1 + L2) / mu_lemma * ||r||)``.
    """
    _require_unique_solvability(consts)
    rn = float(np.linalg.norm(residual(p, x)))
    s = consts.L1 + consts.L2
    return rn / s, s / consts.mu_lemma * rn


def contraction_lhs_rhs(p: AveProblem, x) -> tuple[float, float]:
    """Both sides of ``(x - x*)^T A^T r(x) >= ||r(x)||^2 / 2``."""
    if p.known_solution is None:
        raise PreconditionViolation("contraction check needs a known solution")
    r = residual(p, x)
    d = linalg.as_vector(x, p.n) - p.known_solution
    return float((p.A @ d) @ r), 0.5 * float(r @ r)


def tridiag(n: int, sub: float, diag: float, sup: float) -> np.ndarray:
    return diag * np.eye(n) + sub * np.eye(n, k=-1) + sup * np.eye(n, k=1)


def make_tridiag_problem(n: int) -> AveProblem:
    """``A = tridiag(-1, 8, -1)``, ``x* = (-1, 1, ..., -1, 1)``, ``b = A x* - |x*|``."""
    if not isinstance(n, (int, np.integer)) or n < 2 or n % 2:
        raise ValueError(f"tridiag problem needs an even n >= 2, got {n!r}")
    n = int(n)
    A = tridiag(n, -1.0, 8.0, -1.0)
    xs = np.tile([-1.0, 1.0], n // 2)
    b = A @ xs - np.abs(xs)
    return AveProblem(A, b, xs, metadata={"generator": "tridiag", "n": n})


def make_random_problem(n: int, sigma_floor: float = 1.5, seed: int = 0) -> AveProblem:
    """Random problem with every singular value of ``A`` in
    ``[sigma_floor, 10 * sigma_floor]``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not sigma_floor > 1.0:
        raise ValueError(f"sigma_floor must exceed 1, got {sigma_floor}")
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = rng.uniform(sigma_floor, 10.0 * sigma_floor, size=n)
    s[0] = sigma_floor
    if n > 1:
        s[-1] = 10.0 * sigma_floor
    A = (U * s) @ V.T
    xs = rng.choice([-1.0, 1.0], size=n) * rng.uniform(0.5, 2.0, size=n)
    b = A @ xs - np.abs(xs)
    return AveProblem(A, b, xs, metadata={"generator": "random", "n": n,
                                          "seed": seed, "sigma_floor": sigma_floor})


def solvability_margin(p: AveProblem, method: str = "svd") -> float:
    """``sigma_min(A) - 1``; positive values certify a unique solution."""
    return linalg.sigma_min(p.A, method=method) - 1.0
