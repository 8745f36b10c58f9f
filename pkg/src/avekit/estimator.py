"""scikit-learn style front end: ``AVESolver(model=...).fit(A, b)``."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .dynamics import MODEL_NAMES, DynamicalModel, make_model
from .ode import IntegratorOptions, Trajectory, integrate
from .problem import AveProblem, residual
from .settling import settling_bound
from .validation import check_initial_state, check_square_system


def default_event_tol(problem: AveProblem) -> float:
    return 1e-6 * (1.0 + float(np.linalg.norm(problem.b)))


def simulate(model: DynamicalModel, x0=None, options: IntegratorOptions | None = None) -> Trajectory:
    """Integrate ``model`` from the AVE variable ``x0`` (zero by default).

    The returned trajectory records ``||r(x)||`` and, when the problem's
    solution is known, the energy ``||x - x*||^2 / 2`` at every accepted
    step; ``outputs`` holds the mapped AVE variable per step.
    """
    p = model.problem
    options = options or IntegratorOptions()
    x0 = check_initial_state(x0, p.n)

    def probe(state):
        return float(np.linalg.norm(residual(p, model.output(state))))

    energy = None
    if p.known_solution is not None:
        xs = p.known_solution

        def energy(state):
            d = model.output(state) - xs
            return 0.5 * float(d @ d)

    traj = integrate(model.rhs, model.initial_state(x0), options, probe, energy)
    traj.outputs = np.array([model.output(s) for s in traj.states])
    return traj


class AVESolver(BaseEstimator):
    """Solve ``A x - |x| - b = 0`` by simulating a dynamical system.

    Parameters
    ----------
    model : str
        One of ``fixed-time``, ``inverse-free``, ``mee``, ``huang-cui``,
        ``mansoori-erfanian``, ``gao``.
    gamma, rho1, rho2, lambda1, lambda2, fix_threshold : float
        Fixed-time model parameters (``gamma`` is shared with the
        inverse-free, Huang-Cui and Mansoori-Erfanian models).
    mee_lambda, mee_beta : float
        Projection-model step parameters; ``mee_beta=None`` picks ``0.19 / ||M||``.
    gao_rho : float
        Gao model scaling constant.
    rtol, atol, t_final, event_residual_tol, initial_step, max_step, min_step, max_accepted_steps
        Integrator settings. ``event_residual_tol=None`` stops at
        ``||r|| <= 1e-6 (1 + ||b||)``.
    x0 : array-like or None
        Initial AVE variable; zero when omitted.

    Attributes
    ----------
    solution_ : ndarray of shape (n,)
    trajectory_ : Trajectory
    termination_ : str
    event_time_ : float or None
    residual_norm_ : float
    n_iter_ : int
        Number of accepted integration steps.
    """

    def __init__(self, model="fixed-time", gamma=6.0, rho1=100.0, rho2=100.0, lambda1=0.5,
                 lambda2=1.5, fix_threshold=None, mee_lambda=1.0, mee_beta=None, gao_rho=2.0,
                 rtol=1e-9, atol=1e-12, t_final=200.0, event_residual_tol=None,
                 initial_step=None, max_step=math.inf, min_step=1e-14,
                 max_accepted_steps=200_000, x0=None):
        self.model = model
        self.gamma = gamma
        self.rho1 = rho1
        self.rho2 = rho2
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.fix_threshold = fix_threshold
        self.mee_lambda = mee_lambda
        self.mee_beta = mee_beta
        self.gao_rho = gao_rho
        self.rtol = rtol
        self.atol = atol
        self.t_final = t_final
        self.event_residual_tol = event_residual_tol
        self.initial_step = initial_step
        self.max_step = max_step
        self.min_step = min_step
        self.max_accepted_steps = max_accepted_steps
        self.x0 = x0

    def _build_model(self, problem: AveProblem) -> DynamicalModel:
        if self.model not in MODEL_NAMES:
            raise ValueError(f"unknown model {self.model!r}; expected one of {', '.join(MODEL_NAMES)}")
        return make_model(self.model, problem, gamma=self.gamma, rho1=self.rho1, rho2=self.rho2,
                          lambda1=self.lambda1, lambda2=self.lambda2,
                          fix_threshold=self.fix_threshold, lambda_=self.mee_lambda,
                          beta=self.mee_beta, rho=self.gao_rho)

    def _options(self, problem: AveProblem) -> IntegratorOptions:
        tol = default_event_tol(problem) if self.event_residual_tol is None else self.event_residual_tol
        return IntegratorOptions(rtol=self.rtol, atol=self.atol, initial_step=self.initial_step,
                                 max_step=self.max_step, min_step=self.min_step,
                                 max_accepted_steps=self.max_accepted_steps,
                                 event_residual_tol=tol, t_final=self.t_final)

    def fit(self, A, b, x_star=None):
        """Integrate the selected model on the system ``(A, b)``.

        ``x_star``, when given, enables energy tracking.
        """
        A, b = check_square_system(A, b)
        problem = AveProblem(A, b, x_star)
        self.problem_ = problem
        self.model_ = self._build_model(problem)
        self.trajectory_ = simulate(self.model_, self.x0, self._options(problem))
        self.solution_ = self.trajectory_.outputs[-1].copy()
        self.termination_ = self.trajectory_.termination
        self.event_time_ = self.trajectory_.event_time
        self.residual_norm_ = float(self.trajectory_.residual_norms[-1])
        self.n_iter_ = self.trajectory_.n_accepted
        return self

    def residual(self, A, b) -> np.ndarray:
        """Residual of the fitted solution against another system."""
        check_is_fitted(self, "solution_")
        A, b = check_square_system(A, b)
        return A @ self.solution_ - np.abs(self.solution_) - b

    def settling_bound(self, convention: str = "table"):
        """Settling-time bound of the fixed-time model on the fitted ``A``."""
        check_is_fitted(self, "problem_")
        return settling_bound(self.problem_.A, self.gamma, self.rho1, self.rho2,
                              self.lambda1, self.lambda2, convention)
