"""``avekit`` command line: solve, tmax, compare, verify.

Exit codes: 0 success, 2 config or precondition error, 3 numerical
failure (singular matrix, step underflow, step limit), 4 property
violation.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import io
from .config import ExperimentConfig
from .dynamics import make_model
from .estimator import default_event_tol, simulate
from .exceptions import ConfigError, ConvergenceError, PreconditionViolation, SingularMatrix
from .problem import residual
from .settling import settling_bound, settling_table
from .verify import run_property_suite

log = logging.getLogger("avekit")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_PROPERTY = 0, 2, 3, 4
ENERGY_TARGET = 1e-10


class NumericalFailure(Exception):
    pass


def max_threads() -> int:
    raw = os.environ.get("AVEKIT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"AVEKIT_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"AVEKIT_THREADS must be >= 1, got {n}")
    return n


@dataclass
class RunReport:
    config: str
    model: str
    termination: str
    event_time: float | None
    t_end: float
    final_residual_norm: float
    final_residual_inf: float
    final_error_inf: float | None
    nfev: int
    n_accepted: int
    n_rejected: int
    wall_time: float

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("wall_time")
        return d


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg.set("problem", "seed", args.seed)
    cfg.validate()
    return cfg


def _out_dir(args, cfg) -> Path:
    out = Path(args.out or cfg.get("output", "directory", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_model(cfg: ExperimentConfig, problem, name: str):
    """Simulate one model; returns ``(trajectory, RunReport)``."""
    model = make_model(name, problem, **cfg.model_kwargs())
    opts = cfg.integrator_options(default_event_tol(problem))
    start = time.perf_counter()
    traj = simulate(model, cfg.initial_x(problem.n), opts)
    wall = time.perf_counter() - start
    x = traj.outputs[-1]
    err = None if problem.known_solution is None else float(np.abs(x - problem.known_solution).max())
    report = RunReport(
        config=cfg.to_text(), model=name, termination=traj.termination,
        event_time=traj.event_time, t_end=traj.t_final,
        final_residual_norm=float(traj.residual_norms[-1]),
        final_residual_inf=float(np.abs(residual(problem, x)).max()),
        final_error_inf=err, wall_time=wall, **traj.stats(),
    )
    return traj, report


def _check_termination(report: RunReport):
    if report.termination in ("step_underflow", "step_limit"):
        raise NumericalFailure(
            f"{report.model}: integration ended by {report.termination} at t = {report.t_end:.6g} "
            f"with ||r|| = {report.final_residual_norm:.3e}")


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    problem = cfg.build_problem()
    name = cfg.model_names()[0]
    traj, report = run_model(cfg, problem, name)
    io.write_problem(problem, out / "problem.json")
    io.write_trajectory_csv(traj, out / "trajectory.csv")
    io.write_json(report.to_dict(timing=False), out / "report.json")
    io.write_json({"wall_time": report.wall_time}, out / "timing.json")
    print(f"{name}: {report.termination} at t = {report.t_end:.6g}, "
          f"||r||_inf = {report.final_residual_inf:.3e}"
          + ("" if report.final_error_inf is None else f", ||x - x*||_inf = {report.final_error_inf:.3e}"))
    _check_termination(report)
    return EXIT_OK


def cmd_tmax(args) -> int:
    cfg = _load_config(args)
    if cfg.model_names() != ["fixed-time"]:
        raise ConfigError("tmax needs [model] name = fixed-time")
    out = _out_dir(args, cfg)
    problem = cfg.build_problem()
    base = cfg.fixed_time_params()
    parameter = cfg.get("sweep", "parameter")
    if parameter is None:
        rows = [(None, settling_bound(problem.A, base.gamma, base.rho1, base.rho2, base.lambda1,
                                      base.lambda2, args.convention))]
    else:
        rows = settling_table(problem.A, base, parameter, cfg.get("sweep", "values"), args.convention)
    label = parameter or "none"
    with open(out / "tmax.csv", "w") as fh:
        fh.write("parameter,value,T_max_4dp,T_max\n")
        for v, rep in rows:
            value = "" if v is None else io.fmt(v)
            fh.write(f"{label},{value},{rep.T_max:.4f},{io.fmt(rep.T_max)}\n")
    (out / "tmax_report.txt").write_text("\n".join(rep.to_text() for _, rep in rows))
    for v, rep in rows:
        prefix = "" if v is None else f"{parameter} = {v:<8g} "
        print(f"{prefix}T_max = {rep.T_max:.4f}  (mu convention: {rep.mu_convention})")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    names = cfg.model_names()
    if len(names) < 2:
        raise ConfigError("compare needs at least two models in [model] models")
    if len(set(names)) != len(names):
        raise ConfigError("compare: duplicate model names")
    out = _out_dir(args, cfg)
    problem = cfg.build_problem()
    if problem.known_solution is None:
        raise ConfigError("compare needs a problem with a known solution")
    with ThreadPoolExecutor(max_workers=min(max_threads(), len(names))) as pool:
        results = list(pool.map(lambda nm: run_model(cfg, problem, nm), names))
    columns = {}
    summary = {}
    for name, (traj, rep) in zip(names, results):
        columns[f"t_{name}"] = traj.times
        columns[f"V_{name}"] = traj.energies
        hit = np.nonzero(traj.energies <= ENERGY_TARGET)[0]
        summary[name] = {**rep.to_dict(timing=False),
                         "time_to_energy_target": float(traj.times[hit[0]]) if hit.size else None}
        summary[name].pop("config")
    finals = [traj.outputs[-1] for traj, _ in results]
    spread = max(float(np.abs(a - b).max()) for i, a in enumerate(finals) for b in finals[i + 1:])
    io.write_columns_csv(columns, out / "energies.csv")
    io.write_json({"config": cfg.to_text(), "energy_target": ENERGY_TARGET,
                   "models": summary, "max_pairwise_output_gap": spread},
                  out / "compare_report.json")
    for name in names:
        s = summary[name]
        print(f"{name:>18}: {s['termination']:<14} t_end = {s['t_end']:<12.6g} "
              f"||x - x*||_inf = {s['final_error_inf']:.3e}")
    print(f"max pairwise output gap: {spread:.3e}")
    for _, rep in results:
        _check_termination(rep)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, cfg)
    problem = cfg.build_problem()
    seed = args.seed if args.seed is not None else cfg.get("problem", "seed", 0)
    report = run_property_suite(problem, samples=cfg.get("verify", "samples", 1000), seed=seed,
                                perturbations=cfg.get("verify", "perturbations", 100))
    io.write_json(report, out / "verify_report.json")
    c, s = report["contraction"], report["sandwich"]
    print(f"contraction: {c['samples'] - c['failures']}/{c['samples']} pass, "
          f"worst relative margin {c['worst_relative_margin']:.3e}")
    print(f"sandwich:    {s['samples'] - s['failures']}/{s['samples']} pass, "
          f"worst margins {s['worst_lower_margin']:.3e} / {s['worst_upper_margin']:.3e}")
    for name, e in report["equilibrium"].items():
        print(f"equilibrium {name:>18}: |rhs(x*)|_inf = {e['rhs_at_solution']:.1e}, "
              f"{e['perturbed_nonzero']}/{e['perturbed']} perturbed states nonzero")
    if not report["passed"]:
        print(f"{report['total_failures']} property violations", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="avekit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config file")
    common.add_argument("--out", help="output directory (overrides [output] directory)")
    common.add_argument("--seed", type=int, help="problem / sampling seed")
    common.add_argument("--convention", choices=("table", "lemma"), default="table",
                        help="mu convention for settling bounds")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_ in (
        ("solve", cmd_solve, "integrate one model and write its trajectory"),
        ("tmax", cmd_tmax, "settling-time bound, optionally swept over a parameter"),
        ("compare", cmd_compare, "integrate several models and write energy curves"),
        ("verify", cmd_verify, "run the seeded property suite"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, PreconditionViolation, ValueError) as exc:
        print(f"avekit {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularMatrix, ConvergenceError, NumericalFailure) as exc:
        print(f"avekit {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
