"""Experiment configuration: sectioned ``key = value`` text.

Example::

    [problem]
    generator = tridiag
    n = 20

    [model]
    name = fixed-time
    gamma = 6

    [integrator]
    rtol = 1e-9
    atol = 1e-12
    event_residual_tol = 1e-6

    [sweep]
    parameter = gamma
    values = 0.5, 1, 2, 4

Only keys present in the file are stored, so parse -> serialize -> parse
is the identity. Unknown sections and keys are rejected.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .dynamics import MODEL_NAMES, FixedTimeParams
from .exceptions import ConfigError
from .ode import IntegratorOptions
from .problem import AveProblem, make_random_problem, make_tridiag_problem
from .settling import SWEEP_PARAMETERS

GENERATORS = ("tridiag", "random", "file")
FORMATS = ("csv", "json", "txt")


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.replace(",", " ").split()]


def _strs(s: str) -> list[str]:
    return [v for v in s.replace(",", " ").split()]


SCHEMA: dict[str, dict[str, Callable]] = {
    "problem": {"generator": str, "n": int, "seed": int, "sigma_floor": float, "path": str},
    "model": {
        "name": str, "models": _strs, "gamma": float, "rho1": float, "rho2": float,
        "lambda1": float, "lambda2": float, "fix_threshold": float, "mee_lambda": float,
        "mee_beta": float, "gao_rho": float, "x0": _floats,
    },
    "integrator": {
        "rtol": float, "atol": float, "initial_step": float, "max_step": float,
        "min_step": float, "max_accepted_steps": int, "event_residual_tol": float,
        "t_final": float,
    },
    "output": {"directory": str, "formats": _strs},
    "sweep": {"parameter": str, "values": _floats},
    "verify": {"samples": int, "perturbations": int},
}

# Experiment defaults: tolerances tight enough for the residual event to be reachable.
INTEGRATOR_DEFAULTS = {"rtol": 1e-9, "atol": 1e-12, "t_final": 200.0, "max_accepted_steps": 200_000}


def _render(v) -> str:
    if isinstance(v, list):
        return ", ".join(_render(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class ExperimentConfig:
    sections: dict[str, dict] = field(default_factory=dict)

    # parsing ---------------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from None
        sections: dict[str, dict] = {}
        for sec in cp.sections():
            if sec not in SCHEMA:
                raise ConfigError(f"unknown section [{sec}]; expected one of {', '.join(SCHEMA)}")
            sections[sec] = {}
            for key, raw in cp.items(sec):
                if key not in SCHEMA[sec]:
                    raise ConfigError(f"unknown key {key!r} in [{sec}]")
                try:
                    sections[sec][key] = SCHEMA[sec][key](raw)
                except ValueError as exc:
                    raise ConfigError(f"[{sec}] {key}: cannot parse {raw!r} ({exc})") from None
        cfg = cls(sections)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.parse(text)

    def to_text(self) -> str:
        out = []
        for sec in SCHEMA:
            if sec not in self.sections:
                continue
            out.append(f"[{sec}]")
            for key in SCHEMA[sec]:
                if key in self.sections[sec]:
                    out.append(f"{key} = {_render(self.sections[sec][key])}")
            out.append("")
        return "\n".join(out)

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def set(self, section: str, key: str, value) -> None:
        self.sections.setdefault(section, {})[key] = value

    # validation ------------------------------------------------------------

    def validate(self) -> None:
        gen = self.get("problem", "generator", "tridiag")
        if gen not in GENERATORS:
            raise ConfigError(f"[problem] generator must be one of {', '.join(GENERATORS)}, got {gen!r}")
        if gen == "tridiag":
            n = self.get("problem", "n", 20)
            if n < 2 or n % 2:
                raise ConfigError(f"[problem] n must be even and >= 2 for the tridiag generator, got {n}")
        if gen == "random":
            if self.get("problem", "n", 20) < 1:
                raise ConfigError("[problem] n must be positive")
            if not self.get("problem", "sigma_floor", 1.5) > 1:
                raise ConfigError("[problem] sigma_floor must exceed 1")
        if gen == "file" and self.get("problem", "path") is None:
            raise ConfigError("[problem] generator = file requires path")
        for name in self.model_names():
            if name not in MODEL_NAMES:
                raise ConfigError(f"[model] unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")
        try:
            self.fixed_time_params()
            self.integrator_options(event_tol_default=None)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for key in ("mee_lambda", "mee_beta", "gao_rho", "gamma"):
            v = self.get("model", key)
            if v is not None and not v > 0:
                raise ConfigError(f"[model] {key} must be positive, got {v}")
        mee_lambda = self.get("model", "mee_lambda")
        if mee_lambda is not None and mee_lambda > 1:
            raise ConfigError(f"[model] mee_lambda must lie in (0, 1], got {mee_lambda}")
        param = self.get("sweep", "parameter")
        if param is not None and param not in SWEEP_PARAMETERS:
            raise ConfigError(f"[sweep] parameter must be one of {', '.join(SWEEP_PARAMETERS)}, got {param!r}")
        if "sweep" in self.sections and not self.get("sweep", "values"):
            raise ConfigError("[sweep] values must list at least one value")
        for fmt in self.get("output", "formats", []):
            if fmt not in FORMATS:
                raise ConfigError(f"[output] unknown format {fmt!r}")
        for key in ("samples", "perturbations"):
            v = self.get("verify", key)
            if v is not None and v < 1:
                raise ConfigError(f"[verify] {key} must be positive")

    # builders --------------------------------------------------------------

    def model_names(self) -> list[str]:
        names = self.get("model", "models")
        return list(names) if names is not None else [self.get("model", "name", "fixed-time")]

    def fixed_time_params(self) -> FixedTimeParams:
        keys = ("gamma", "rho1", "rho2", "lambda1", "lambda2", "fix_threshold")
        return FixedTimeParams(**{k: self.get("model", k) for k in keys if self.get("model", k) is not None})

    def model_kwargs(self) -> dict:
        m = self.sections.get("model", {})
        kw = {k: m[k] for k in ("gamma", "rho1", "rho2", "lambda1", "lambda2", "fix_threshold") if k in m}
        if "mee_lambda" in m:
            kw["lambda_"] = m["mee_lambda"]
        if "mee_beta" in m:
            kw["beta"] = m["mee_beta"]
        if "gao_rho" in m:
            kw["rho"] = m["gao_rho"]
        return kw

    def integrator_options(self, event_tol_default: float | None) -> IntegratorOptions:
        sec = {**INTEGRATOR_DEFAULTS, **self.sections.get("integrator", {})}
        sec.setdefault("event_residual_tol", event_tol_default)
        sec.setdefault("max_step", math.inf)
        return IntegratorOptions(**sec)

    def build_problem(self) -> AveProblem:
        gen = self.get("problem", "generator", "tridiag")
        if gen == "tridiag":
            return make_tridiag_problem(self.get("problem", "n", 20))
        if gen == "random":
            return make_random_problem(self.get("problem", "n", 20),
                                       self.get("problem", "sigma_floor", 1.5),
                                       self.get("problem", "seed", 0))
        from .io import read_problem

        return read_problem(self.get("problem", "path"))

    def initial_x(self, n: int) -> np.ndarray:
        x0 = self.get("model", "x0")
        if x0 is None:
            return np.zeros(n)
        if len(x0) != n:
            raise ConfigError(f"[model] x0 has {len(x0)} entries, problem has n = {n}")
        return np.asarray(x0, dtype=np.float64)
