"""Seeded property checks on an AVE instance: contraction, error-bound
sandwich and equilibrium characterization of every model."""
from __future__ import annotations

import numpy as np

from .dynamics import MODEL_NAMES, make_model
from .exceptions import PreconditionViolation
from .problem import AveProblem, contraction_lhs_rhs, error_bound_constants, error_bounds, residual

REL_SLACK = 1e-12
EQUILIBRIUM_TOL = 1e-10


def sample_points(p: AveProblem, count: int, seed: int) -> np.ndarray:
    """Points ``x* + s * z`` with ``z`` Gaussian and ``s`` log-uniform in
    ``[1e-3, 1e2]``."""
    rng = np.random.default_rng(seed)
    scales = 10.0 ** rng.uniform(-3, 2, size=count)
    return p.known_solution + scales[:, None] * rng.standard_normal((count, p.n))


def check_contraction(p: AveProblem, points) -> dict:
    worst = np.inf
    failures = 0
    for x in points:
        lhs, rhs = contraction_lhs_rhs(p, x)
        margin = lhs - rhs
        if margin < -REL_SLACK * (1.0 + abs(lhs) + abs(rhs)):
            failures += 1
        worst = min(worst, margin / max(rhs, np.finfo(float).tiny))
    return {"samples": len(points), "failures": failures, "worst_relative_margin": float(worst)}


def check_sandwich(p: AveProblem, points, consts=None) -> dict:
    consts = consts or error_bound_constants(p.A)
    failures = 0
    worst_lo = worst_hi = np.inf
    for x in points:
        lo, hi = error_bounds(p, consts, x)
        d = float(np.linalg.norm(x - p.known_solution))
        if lo > d * (1 + REL_SLACK) or d > hi * (1 + REL_SLACK):
            failures += 1
        worst_lo = min(worst_lo, (d - lo) / d)
        worst_hi = min(worst_hi, (hi - d) / d)
    return {"samples": len(points), "failures": failures,
            "worst_lower_margin": float(worst_lo), "worst_upper_margin": float(worst_hi)}


def check_equilibria(p: AveProblem, perturbations: int, seed: int, models=MODEL_NAMES,
                     min_residual: float = 1e-3) -> dict:
    """``rhs`` vanishes at the state mapping to ``x*`` and is nonzero at
    perturbed states with ``||r|| >= min_residual``."""
    rng = np.random.default_rng(seed)
    out = {}
    for name in models:
        m = make_model(name, p)
        s_star = m.initial_state(p.known_solution)
        at_star = float(np.abs(m.rhs(s_star)).max())
        nonzero = checked = 0
        while checked < perturbations:
            x = p.known_solution + 10.0 ** rng.uniform(-2, 1) * rng.standard_normal(p.n)
            if np.linalg.norm(residual(p, x)) < min_residual:
                continue
            checked += 1
            nonzero += bool(np.linalg.norm(m.rhs(m.initial_state(x))) > 0)
        failures = int(at_star > EQUILIBRIUM_TOL) + (checked - nonzero)
        out[name] = {"rhs_at_solution": at_star, "perturbed": checked,
                     "perturbed_nonzero": nonzero, "failures": failures}
    return out


def run_property_suite(p: AveProblem, samples: int = 1000, seed: int = 0,
                       perturbations: int = 100) -> dict:
    """Run every check; raises :class:`PreconditionViolation` unless
    ``sigma_min(A) > 1`` and the solution is known."""
    if p.known_solution is None:
        raise PreconditionViolation("property suite needs a problem with a known solution")
    consts = error_bound_constants(p.A)
    if consts.sigma_min <= 1.0:
        raise PreconditionViolation(f"sigma_min(A) = {consts.sigma_min:.6g} <= 1")
    pts = sample_points(p, samples, seed)
    report = {
        "n": p.n,
        "sigma_min": consts.sigma_min,
        "contraction": check_contraction(p, pts),
        "sandwich": check_sandwich(p, pts, consts),
        "equilibrium": check_equilibria(p, perturbations, seed + 1),
    }
    report["total_failures"] = (
        report["contraction"]["failures"]
        + report["sandwich"]["failures"]
        + sum(v["failures"] for v in report["equilibrium"].values())
    )
    report["passed"] = report["total_failures"] == 0
    return report
