"""Conservative settling-time bound of the fixed-time model.

With ``V = ||x - x*||^2 / 2`` the model satisfies
``dV/dt <= -c1 V^k1 - c2 V^k2`` and therefore settles before

    T_max = 1 / (c1 (1 - k1)) + 1 / (c2 (k2 - 1)).

Two conventions for the monotonicity constant ``mu`` are supported:
``"table"`` (``sigma_min(A) - 1``, which reproduces the published
numbers) and ``"lemma"`` (``sigma_min(A)^2 - 1``).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .dynamics import FixedTimeParams
from .exceptions import PreconditionViolation
from .problem import ErrorBoundConstants, error_bound_constants

CONVENTIONS = ("table", "lemma")
SWEEP_PARAMETERS = ("lambda1", "lambda2", "gamma", "rho")


@dataclass(frozen=True)
class SettlingReport:
    mu: float
    mu_convention: str
    L1: float
    L2: float
    c1: float
    c2: float
    kappa1: float
    kappa2: float
    T_max: float
    gamma: float
    rho1: float
    rho2: float
    lambda1: float
    lambda2: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        """``key = value`` lines, floats at 17 significant digits."""
        lines = []
        for k, v in self.to_dict().items():
            lines.append(f"{k} = {v:.17g}" if isinstance(v, float) else f"{k} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SettlingReport":
        kv = {}
        for line in text.splitlines():
            if line.strip():
                k, v = (s.strip() for s in line.split("=", 1))
                kv[k] = v
        fields = cls.__dataclass_fields__
        out = {}
        for k, f in fields.items():
            out[k] = kv[k] if f.type == "str" else int(kv[k]) if f.type == "int" else float(kv[k])
        return cls(**out)


def settling_constants(L1: float, L2: float, mu: float, params: FixedTimeParams):
    """Return ``(c1, c2, kappa1, kappa2, T_max)``."""
    if not mu > 0:
        raise PreconditionViolation(f"mu must be positive, got {mu}")
    g, r1, r2, l1, l2 = params.gamma, params.rho1, params.rho2, params.lambda1, params.lambda2
    S = L1 + L2
    c1 = 2.0 ** ((l1 - 1) / 2) * g * r1 * mu**2 / S ** (3 - l1)
    c2 = 2.0 ** ((l2 - 1) / 2) * g * r2 * mu ** (1 + l2) / S ** (1 + l2)
    k1 = (l1 + 1) / 2
    k2 = (l2 + 1) / 2
    return c1, c2, k1, k2, 1.0 / (c1 * (1 - k1)) + 1.0 / (c2 * (k2 - 1))


def settling_bound(
    A,
    gamma: float = 6.0,
    rho1: float = 100.0,
    rho2: float = 100.0,
    lambda1: float = 0.5,
    lambda2: float = 1.5,
    convention: str = "table",
    consts: ErrorBoundConstants | None = None,
) -> SettlingReport:
    """Closed-form settling-time bound for the fixed-time model on ``A``.

    Pass precomputed ``consts`` to avoid recomputing the singular values
    when sweeping parameters over the same matrix.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected 'table' or 'lemma'")
    params = FixedTimeParams(gamma, rho1, rho2, lambda1, lambda2)
    if consts is None:
        consts = error_bound_constants(A)
    if consts.sigma_min <= 1.0:
        raise PreconditionViolation(f"sigma_min(A) = {consts.sigma_min:.6g} <= 1")
    mu = consts.mu(convention)
    c1, c2, k1, k2, T = settling_constants(consts.L1, consts.L2, mu, params)
    return SettlingReport(mu=mu, mu_convention=convention, L1=consts.L1, L2=consts.L2,
                          c1=c1, c2=c2, kappa1=k1, kappa2=k2, T_max=T,
                          gamma=float(gamma), rho1=float(rho1), rho2=float(rho2),
                          lambda1=float(lambda1), lambda2=float(lambda2),
                          n=int(np.shape(A)[0]))


def settling_table(A, base_params: FixedTimeParams, parameter: str, values,
                   convention: str = "table") -> list[tuple[float, SettlingReport]]:
    """One :func:`settling_bound` row per sweep value.

    ``parameter`` is one of ``lambda1``, ``lambda2``, ``gamma`` or ``rho``
    (the last sets ``rho1 = rho2``).
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"cannot sweep {parameter!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")
    consts = error_bound_constants(A)
    rows = []
    for v in values:
        v = float(v)
        p = replace(base_params, rho1=v, rho2=v) if parameter == "rho" else replace(base_params, **{parameter: v})
        rep = settling_bound(A, p.gamma, p.rho1, p.rho2, p.lambda1, p.lambda2, convention, consts)
        rows.append((v, rep))
    return rows
