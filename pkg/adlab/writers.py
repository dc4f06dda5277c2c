"""Deterministic table output.

Every table is a list of column names plus a 2-D real array; numbers are
written with a fixed count of significant digits so identical runs give
byte-identical files.
"""
import csv
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from adlab.diagnostics import EpsilonBoundReport, MSReport
from adlab.phases import PhaseReport
from adlab.propagation import PropagatorDecomposition, Trajectory

Table = Tuple[List[str], np.ndarray]


def format_number(value: float, precision: int) -> str:
    if np.isnan(value):
        return "nan"
    text = f"{value:.{precision}g}"
    return "0" if text == "-0" else text


def _columns(*arrays: np.ndarray) -> np.ndarray:
    return np.column_stack([np.asarray(a, dtype=float) for a in arrays])


def _optional(values: Optional[np.ndarray], length: int) -> np.ndarray:
    return np.full(length, np.nan) if values is None else values


# ──────────────────────────────────────────────────────────────────────────────
# TABLES
# ──────────────────────────────────────────────────────────────────────────────
def trajectory_table(trajectory: Trajectory) -> Table:
    n = trajectory.U.shape[1]
    columns = ["t"]
    data = [trajectory.times]
    for i in range(n):
        for j in range(n):
            columns += [f"re_U{i}{j}", f"im_U{i}{j}"]
            data += [trajectory.U[:, i, j].real, trajectory.U[:, i, j].imag]
    return columns, _columns(*data)


def decomposition_table(decomposition: PropagatorDecomposition) -> Table:
    n = decomposition.Unm.shape[1]
    columns = ["t"] + [f"abs_U{i}{i}" for i in range(n)] + [f"phi_{i}" for i in range(n)] + ["offdiag_norm"]
    diag = decomposition.diagonal
    data = [decomposition.times] + [np.abs(diag[:, i]) for i in range(n)]
    data += [decomposition.phi[:, i] for i in range(n)] + [decomposition.offdiag_norm]
    return columns, _columns(*data)


def phases_table(report: PhaseReport) -> Table:
    k = len(report.times)
    columns = ["t", "delta_n", "gamma_n", "pancharatnam", "geom_noncyclic", "geom_openpath",
               "re_S_n", "im_S_n", "re_Q_n", "im_Q_n", "phi_corrected"]
    return columns, _columns(
        report.times, report.delta, report.gamma,
        _optional(report.pancharatnam, k), _optional(report.geom_noncyclic, k), report.geom_openpath,
        report.S.real, report.S.imag, report.Q.real, report.Q.imag, report.phi_corrected,
    )


def ms_report_table(report: MSReport) -> Table:
    columns = ["t", "abs_norm_naive", "arg_norm_naive", "abs_norm_corrected", "abs_norm_true", "norm_diagonal"]
    return columns, _columns(
        report.times, np.abs(report.norm_naive), np.angle(report.norm_naive),
        np.abs(report.norm_corrected), np.abs(report.norm_true), report.norm_diagonal,
    )


def epsilon_table(report: EpsilonBoundReport) -> Table:
    columns = ["t", "D_eig", "D_state", "denom", "eps_lower", "eps_hat", "eps_lower_linear", "indeterminate"]
    return columns, _columns(
        report.times, report.D_eig, report.D_state, report.denom, report.eps_lower,
        np.full(len(report.times), report.eps_hat), report.eps_lower_linear, report.indeterminate,
    )


def fidelity_table(times: np.ndarray, fidelity: np.ndarray) -> Table:
    return ["t", "F"], _columns(times, fidelity)


# ──────────────────────────────────────────────────────────────────────────────
# WRITERS
# ──────────────────────────────────────────────────────────────────────────────
def write_table(directory: Path, stem: str, table: Table, fmt: str = "csv", precision: int = 12) -> Path:
    """Write `table` as <stem>.csv or <stem>.json under `directory`."""
    columns, data = table
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = [[format_number(v, precision) for v in row] for row in data]

    if fmt == "csv":
        path = directory / f"{stem}.csv"
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
    elif fmt == "json":
        path = directory / f"{stem}.json"
        payload = {"columns": columns, "rows": [[None if v == "nan" else float(v) for v in row] for row in rows]}
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2)
    else:
        raise ValueError(f"Unsupported output format: {fmt}")
    return path


def write_manifest(directory: Path, manifest: Dict) -> Path:
    path = Path(directory) / "manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    return path


def read_table(path: Path) -> Table:
    """Inverse of `write_table` for CSV files."""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        columns = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
    return columns, data
