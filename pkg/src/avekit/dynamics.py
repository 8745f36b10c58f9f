"""Continuous-time dynamical systems whose equilibria solve the AVE.

Every model exposes ``rhs(state)``, ``output(state)`` (internal state to
the AVE variable ``x``) and ``initial_state(x0)``. Internal states are
``x`` for the inverse-free models, ``u = (A - I) x - b`` for the LCP-based
models and ``z = A x - b`` for the Gao model.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import PreconditionViolation
from .problem import AveProblem, LcpTransform, lcp_transform, residual

MODEL_NAMES = ("fixed-time", "inverse-free", "mee", "huang-cui", "mansoori-erfanian", "gao")


def project_nonneg(v) -> np.ndarray:
    """Projection onto the nonnegative orthant."""
    return np.maximum(np.asarray(v, dtype=np.float64), 0.0)


def natural_residual(t: LcpTransform, u, beta: float) -> np.ndarray:
    """``e(u, beta) = u - P[u - beta (M u + q)]``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    u = linalg.as_vector(u, t.n, name="u")
    return u - project_nonneg(u - beta * (t.M @ u + t.q))


def default_fix_threshold(p: AveProblem) -> float:
    return 1e-14 * (1.0 + float(np.linalg.norm(p.b)))


@dataclass(frozen=True)
class FixedTimeParams:
    gamma: float = 6.0
    rho1: float = 100.0
    rho2: float = 100.0
    lambda1: float = 0.5
    lambda2: float = 1.5
    fix_threshold: float | None = None

    def __post_init__(self):
        for name in ("gamma", "rho1", "rho2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.lambda1 < 1:
            raise ValueError(f"lambda1 must lie in (0, 1), got {self.lambda1}")
        if not self.lambda2 > 1:
            raise ValueError(f"lambda2 must exceed 1, got {self.lambda2}")
        if self.fix_threshold is not None and not self.fix_threshold >= 0:
            raise ValueError(f"fix_threshold must be nonnegative, got {self.fix_threshold}")


@dataclass(frozen=True)
class MeeParams:
    """Step parameters of the projection model; ``beta < 1 / (5 L)``, ``L = ||M||``."""

    lambda_: float
    beta: float
    L: float

    def __post_init__(self):
        if not 0 < self.lambda_ <= 1:
            raise ValueError(f"lambda must lie in (0, 1], got {self.lambda_}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if not 0 < self.beta < 1.0 / (5.0 * self.L):
            raise ValueError(f"beta must lie in (0, 1/(5L)) = (0, {1 / (5 * self.L):.6g}), got {self.beta}")

    @classmethod
    def for_transform(cls, t: LcpTransform, lambda_: float = 1.0, beta: float | None = None):
        L = linalg.spectral_norm(t.M)
        return cls(lambda_=lambda_, beta=0.19 / L if beta is None else beta, L=L)


def fixed_time_rhs(p: AveProblem, params: FixedTimeParams, x) -> np.ndarray:
    """Fixed-time inverse-free vector field.

    Evaluated as ``-gamma (rho1 ||r||^l1 + rho2 ||r||^l2) A^T (r / ||r||)``
    so the divergent gain ``rho(x)`` is never formed; returns zero once
    ``||r(x)||`` drops to the fix threshold.
    """
    r = residual(p, x)
    nr = float(np.linalg.norm(r))
    thr = default_fix_threshold(p) if params.fix_threshold is None else params.fix_threshold
    if nr <= thr:
        return np.zeros(p.n)
    gain = params.gamma * (params.rho1 * nr ** params.lambda1 + params.rho2 * nr ** params.lambda2)
    return -gain * (p.A.T @ (r / nr))


def inverse_free_rhs(p: AveProblem, gamma: float, x) -> np.ndarray:
    """``gamma A^T (b + |x| - A x)``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return -gamma * (p.A.T @ residual(p, x))


def mee_rhs(t: LcpTransform, params: MeeParams, u) -> np.ndarray:
    u = linalg.as_vector(u, t.n, name="u")
    e = natural_residual(t, u, params.beta)
    g = e - params.beta * (t.M @ e)
    return project_nonneg(u - params.lambda_ * g) - u


def huang_cui_rhs(t: LcpTransform, gamma: float, u) -> np.ndarray:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return -gamma * natural_residual(t, u, 1.0)


def mansoori_erfanian_rhs(t: LcpTransform, gamma: float, u) -> np.ndarray:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    e = natural_residual(t, u, 1.0)
    return -gamma * (e + t.M.T @ e)


def gao_rhs(p: AveProblem, rho: float, z, factor: linalg.LuFactorization | None = None) -> np.ndarray:
    """``(rho / 2)(|x| - z)`` with ``x = A^{-1}(z + b)``."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if factor is None:
        factor = linalg.lu_factor(p.A)
    z = linalg.as_vector(z, p.n, name="z")
    x = linalg.solve(factor, z + p.b)
    return 0.5 * rho * (np.abs(x) - z)


class DynamicalModel:
    """A named vector field over an internal state plus its output map."""

    name: str = ""

    def __init__(self, problem: AveProblem):
        self.problem = problem

    @property
    def n(self) -> int:
        return self.problem.n

    @property
    def params(self) -> dict:
        return {}

    def rhs(self, state) -> np.ndarray:
        raise NotImplementedError

    def output(self, state) -> np.ndarray:
        return np.asarray(state, dtype=np.float64)

    def initial_state(self, x0) -> np.ndarray:
        return linalg.as_vector(x0, self.n, name="x0").copy()

    def __call__(self, state):
        return self.rhs(state)

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}(n={self.n}, {args})"


class FixedTimeModel(DynamicalModel):
    name = "fixed-time"

    def __init__(self, problem: AveProblem, params: FixedTimeParams | None = None):
        super().__init__(problem)
        params = params or FixedTimeParams()
        if params.fix_threshold is None:
            params = FixedTimeParams(params.gamma, params.rho1, params.rho2, params.lambda1,
                                     params.lambda2, default_fix_threshold(problem))
        self.fixed_time_params = params

    @property
    def params(self):
        p = self.fixed_time_params
        return {"gamma": p.gamma, "rho1": p.rho1, "rho2": p.rho2, "lambda1": p.lambda1,
                "lambda2": p.lambda2, "fix_threshold": p.fix_threshold}

    def rhs(self, state):
        return fixed_time_rhs(self.problem, self.fixed_time_params, state)


class InverseFreeModel(DynamicalModel):
    name = "inverse-free"

    def __init__(self, problem: AveProblem, gamma: float = 6.0):
        super().__init__(problem)
        if not gamma > 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        self.gamma = float(gamma)

    @property
    def params(self):
        return {"gamma": self.gamma}

    def rhs(self, state):
        return inverse_free_rhs(self.problem, self.gamma, state)


class _LcpModel(DynamicalModel):
    def __init__(self, problem: AveProblem):
        super().__init__(problem)
        smin = linalg.sigma_min(problem.A)
        if smin <= 1.0:
            raise PreconditionViolation(
                f"{self.name} model needs sigma_min(A) > 1, got {smin:.6g}")
        self.transform = lcp_transform(problem)

    def output(self, state):
        return self.transform.to_x(state)

    def initial_state(self, x0):
        return self.transform.to_u(x0)


class MeeModel(_LcpModel):
    name = "mee"

    def __init__(self, problem: AveProblem, lambda_: float = 1.0, beta: float | None = None):
        super().__init__(problem)
        self.mee_params = MeeParams.for_transform(self.transform, lambda_, beta)

    @property
    def params(self):
        return {"lambda": self.mee_params.lambda_, "beta": self.mee_params.beta}

    def rhs(self, state):
        return mee_rhs(self.transform, self.mee_params, state)


class HuangCuiModel(_LcpModel):
    name = "huang-cui"

    def __init__(self, problem: AveProblem, gamma: float = 6.0):
        super().__init__(problem)
        if not gamma > 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        self.gamma = float(gamma)

    @property
    def params(self):
        return {"gamma": self.gamma}

    def rhs(self, state):
        return huang_cui_rhs(self.transform, self.gamma, state)


class MansooriErfanianModel(HuangCuiModel):
    name = "mansoori-erfanian"

    def rhs(self, state):
        return mansoori_erfanian_rhs(self.transform, self.gamma, state)


class GaoModel(DynamicalModel):
    name = "gao"

    def __init__(self, problem: AveProblem, rho: float = 2.0):
        super().__init__(problem)
        if not rho > 0:
            raise ValueError(f"rho must be positive, got {rho}")
        self.rho = float(rho)
        self.factor = linalg.lu_factor(problem.A)

    @property
    def params(self):
        return {"rho": self.rho}

    def rhs(self, state):
        return gao_rhs(self.problem, self.rho, state, self.factor)

    def output(self, state):
        return linalg.solve(self.factor, np.asarray(state, dtype=np.float64) + self.problem.b)

    def initial_state(self, x0):
        return self.problem.A @ linalg.as_vector(x0, self.n, name="x0") - self.problem.b


def make_model(name: str, problem: AveProblem, **params) -> DynamicalModel:
    """Build a model by its registered name.

    Recognized keyword parameters: ``gamma``, ``rho1``, ``rho2``,
    ``lambda1``, ``lambda2``, ``fix_threshold`` (fixed-time); ``gamma``
    (inverse-free, huang-cui, mansoori-erfanian); ``lambda_``, ``beta``
    (mee); ``rho`` (gao). Unused parameters are ignored.
    """
    if name == "fixed-time":
        keys = ("gamma", "rho1", "rho2", "lambda1", "lambda2", "fix_threshold")
        return FixedTimeModel(problem, FixedTimeParams(**{k: params[k] for k in keys if k in params}))
    if name == "inverse-free":
        return InverseFreeModel(problem, params.get("gamma", 6.0))
    if name == "mee":
        return MeeModel(problem, params.get("lambda_", 1.0), params.get("beta"))
    if name == "huang-cui":
        return HuangCuiModel(problem, params.get("gamma", 6.0))
    if name == "mansoori-erfanian":
        return MansooriErfanianModel(problem, params.get("gamma", 6.0))
    if name == "gao":
        return GaoModel(problem, params.get("rho", 2.0))
    raise ValueError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")
