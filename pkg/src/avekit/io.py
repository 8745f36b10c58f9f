"""File formats: problem documents (JSON), trajectory and table CSVs.

Floats are written with 17 significant digits so every double survives a
write/read round trip bit-for-bit.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .ode import Trajectory
from .problem import AveProblem

FLOAT_FMT = "{:.17g}"


def fmt(v) -> str:
    return FLOAT_FMT.format(float(v))


def problem_to_dict(p: AveProblem) -> dict:
    return {
        "n": p.n,
        "A": [float(v) for v in p.A.ravel()],
        "b": [float(v) for v in p.b],
        "x_star": None if p.known_solution is None else [float(v) for v in p.known_solution],
        "metadata": dict(p.metadata),
    }


def problem_from_dict(d: dict) -> AveProblem:
    try:
        n = int(d["n"])
        A = np.asarray(d["A"], dtype=np.float64)
        b = d["b"]
    except KeyError as exc:
        raise ValueError(f"problem document is missing field {exc}") from None
    if A.size != n * n:
        raise ValueError(f"problem document: A has {A.size} entries, expected n*n = {n * n}")
    return AveProblem(A.reshape(n, n), b, d.get("x_star"), metadata=dict(d.get("metadata") or {}))


def write_problem(p: AveProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(p), indent=1) + "\n")


def read_problem(path) -> AveProblem:
    return problem_from_dict(json.loads(Path(path).read_text()))


def trajectory_rows(traj: Trajectory):
    """Header and rows ``t, [V], r_norm, x_1..x_n`` for a simulated trajectory."""
    outputs = traj.outputs if traj.outputs is not None else traj.states
    n = outputs.shape[1]
    header = ["t"] + (["V"] if traj.energies is not None else []) + ["r_norm"]
    header += [f"x_{i + 1}" for i in range(n)]
    rows = []
    for i, t in enumerate(traj.times):
        row = [fmt(t)]
        if traj.energies is not None:
            row.append(fmt(traj.energies[i]))
        row.append(fmt(traj.residual_norms[i]))
        row.extend(fmt(v) for v in outputs[i])
        rows.append(row)
    return header, rows


def write_trajectory_csv(traj: Trajectory, path) -> None:
    header, rows = trajectory_rows(traj)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def read_trajectory_csv(path) -> dict[str, np.ndarray]:
    """Return ``{"t", "V" (if present), "r_norm", "x"}`` arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader], dtype=np.float64)
    data = data.reshape(-1, len(header))
    cols = {name: data[:, i] for i, name in enumerate(header) if not name.startswith("x_")}
    cols["x"] = data[:, [i for i, name in enumerate(header) if name.startswith("x_")]]
    return cols


def write_columns_csv(columns: dict[str, np.ndarray], path) -> None:
    """Write ragged named columns side by side; short columns are padded
    with empty cells."""
    names = list(columns)
    length = max(len(c) for c in columns.values())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(length):
            w.writerow([fmt(columns[k][i]) if i < len(columns[k]) else "" for k in names])


def read_columns_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        cols: dict[str, list] = {k: [] for k in names}
        for row in reader:
            for k, v in zip(names, row):
                if v != "":
                    cols[k].append(float(v))
    return {k: np.asarray(v) for k, v in cols.items()}


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
