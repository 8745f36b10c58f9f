"""Adaptive Bogacki-Shampine 3(2) integrator with residual-triggered stop.

The pair is the one behind MATLAB's ``ode23``: four stages, third-order
propagation, second-order embedded estimate, first-same-as-last so each
accepted step costs three fresh right-hand-side evaluations.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .linalg import as_vector

TERMINATIONS = ("event", "t_final", "step_limit", "step_underflow")

# Butcher tableau
_A21 = 1 / 2
_A32 = 3 / 4
_B1, _B2, _B3 = 2 / 9, 1 / 3, 4 / 9
# third-order minus second-order weights
_E1, _E2, _E3, _E4 = -5 / 72, 1 / 12, 1 / 9, -1 / 8

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = 1e-6
    atol: float = 1e-9
    initial_step: float | None = None
    max_step: float = math.inf
    min_step: float = 1e-14
    max_accepted_steps: int = 200_000
    event_residual_tol: float | None = None
    t_final: float = 10.0
    t0: float = 0.0

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("rtol and atol must be positive")
        if not 0 < self.min_step < self.max_step:
            raise ValueError(f"need 0 < min_step < max_step, got {self.min_step}, {self.max_step}")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if not self.t_final > self.t0:
            raise ValueError(f"t_final must exceed t0, got {self.t_final} <= {self.t0}")
        if self.max_accepted_steps < 1:
            raise ValueError("max_accepted_steps must be positive")
        if self.event_residual_tol is not None and not self.event_residual_tol >= 0:
            raise ValueError("event_residual_tol must be nonnegative")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trajectory:
    """Accepted integration steps, including the initial point."""

    times: np.ndarray
    states: np.ndarray
    residual_norms: np.ndarray | None = None
    energies: np.ndarray | None = None
    nfev: int = 0
    n_accepted: int = 0
    n_rejected: int = 0
    termination: str = "t_final"
    outputs: np.ndarray | None = field(default=None, repr=False)

    @property
    def t_final(self) -> float:
        return float(self.times[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def event_time(self) -> float | None:
        return self.t_final if self.termination == "event" else None

    def stats(self) -> dict:
        return {"nfev": self.nfev, "n_accepted": self.n_accepted, "n_rejected": self.n_rejected}


def _bs_stages(rhs, y, h, k1):
    k2 = rhs(y + h * _A21 * k1)
    k3 = rhs(y + h * _A32 * k2)
    y_new = y + h * (_B1 * k1 + _B2 * k2 + _B3 * k3)
    return k2, k3, y_new


def _initial_step(opts: IntegratorOptions, x0, f0) -> float:
    if opts.initial_step is not None:
        h = opts.initial_step
    else:
        scale = (opts.atol + opts.rtol * np.linalg.norm(x0)) ** (1 / 3)
        h = 0.01 * scale / max(float(np.linalg.norm(f0)), 1e-12)
    return min(max(h, opts.min_step), opts.max_step)


def _collect(times, states, probes, energy, **kw) -> Trajectory:
    return Trajectory(
        times=np.asarray(times),
        states=np.asarray(states),
        residual_norms=None if probes is None else np.asarray(probes),
        energies=None if energy is None else np.asarray(energy),
        **kw,
    )


def integrate(
    rhs: Callable[[np.ndarray], np.ndarray],
    x0,
    opts: IntegratorOptions | None = None,
    residual_probe: Callable[[np.ndarray], float] | None = None,
    energy_probe: Callable[[np.ndarray], float] | None = None,
) -> Trajectory:
    """Integrate the autonomous system ``dx/dt = rhs(x)`` from ``opts.t0``.

    Steps are controlled by the weighted RMS of the embedded error
    estimate with weights ``atol + rtol * max(|y|, |y_new|)``. When
    ``opts.event_residual_tol`` is set, integration stops at the first
    accepted step whose ``residual_probe`` value is at or below it.
    ``energy_probe`` values are recorded per accepted step if given.
    """
    opts = opts or IntegratorOptions()
    if opts.event_residual_tol is not None and residual_probe is None:
        raise ValueError("event_residual_tol requires a residual_probe")
    y = as_vector(x0, name="x0").copy()
    t = opts.t0
    times, states = [t], [y.copy()]
    probes = None if residual_probe is None else [float(residual_probe(y))]
    energy = None if energy_probe is None else [float(energy_probe(y))]

    def done(termination, nfev, n_acc, n_rej):
        return _collect(times, states, probes, energy, nfev=nfev, n_accepted=n_acc,
                        n_rejected=n_rej, termination=termination)

    if opts.event_residual_tol is not None and probes[0] <= opts.event_residual_tol:
        return done("event", 0, 0, 0)

    k1 = rhs(y)
    nfev = 1
    h = _initial_step(opts, y, k1)
    n_acc = n_rej = 0
    while True:
        remaining = opts.t_final - t
        last = h >= remaining
        h_try = remaining if last else h
        k2, k3, y_new = _bs_stages(rhs, y, h_try, k1)
        k4 = rhs(y_new)
        nfev += 3
        err = h_try * (_E1 * k1 + _E2 * k2 + _E3 * k3 + _E4 * k4)
        w = opts.atol + opts.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.sqrt(np.mean((err / w) ** 2)))
        if err_norm <= 1.0:
            factor = MAX_FACTOR if err_norm == 0.0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err_norm ** (-1 / 3)))
            t = opts.t_final if last else t + h_try
            y, k1 = y_new, k4
            n_acc += 1
            times.append(t)
            states.append(y.copy())
            if probes is not None:
                probes.append(float(residual_probe(y)))
            if energy is not None:
                energy.append(float(energy_probe(y)))
            if opts.event_residual_tol is not None and probes[-1] <= opts.event_residual_tol:
                return done("event", nfev, n_acc, n_rej)
            if last:
                return done("t_final", nfev, n_acc, n_rej)
            if n_acc >= opts.max_accepted_steps:
                return done("step_limit", nfev, n_acc, n_rej)
            h = min(opts.max_step, h_try * factor)
        else:
            n_rej += 1
            factor = max(MIN_FACTOR, SAFETY * err_norm ** (-1 / 3))
            h = h_try * factor
            if h < opts.min_step:
                return done("step_underflow", nfev, n_acc, n_rej)


def integrate_fixed_step(rhs, x0, h: float, n_steps: int, t0: float = 0.0) -> Trajectory:
    """Apply ``n_steps`` third-order Bogacki-Shampine steps of size ``h``."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    y = as_vector(x0, name="x0").copy()
    times, states = [t0], [y.copy()]
    k1 = rhs(y)
    nfev = 1
    for i in range(1, n_steps + 1):
        _, _, y = _bs_stages(rhs, y, h, k1)
        k1 = rhs(y)
        nfev += 3
        times.append(t0 + i * h)
        states.append(y.copy())
    return Trajectory(times=np.asarray(times), states=np.asarray(states), nfev=nfev,
                      n_accepted=n_steps, termination="t_final")
