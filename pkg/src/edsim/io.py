"""File formats and atomic writes.

All floats are serialized with 17 significant digits, enough to round-trip
binary64 exactly, and every writer goes through a temp-file rename so
readers never see partial output. No writer embeds timestamps or absolute
paths: identical inputs give byte-identical files.
"""

import json
import os
import tempfile

import numpy as np

from .errors import ConfigError
from .measurement import DiscreteDevice, build_device
from .state import Grid1D, HydroState


def _f(v) -> str:
    return format(float(v), ".17g")


def atomic_write(path, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_snapshots(path, trace):
    """NDJSON, one record per snapshot: t, x, rho, phi."""
    ts, rhos, phis = trace.field_arrays()
    x = trace.grid.cells
    lines = []
    for t, rho, phi in zip(ts, rhos, phis):
        lines.append(
            '{"t": %s, "x": [%s], "rho": [%s], "phi": [%s]}'
            % (
                _f(t),
                ", ".join(_f(v) for v in x),
                ", ".join(_f(v) for v in rho),
                ", ".join(_f(v) for v in phi),
            )
        )
    atomic_write(path, "\n".join(lines) + "\n")


def read_snapshots(path):
    """Inverse of write_snapshots: list of (t, x, rho, phi) arrays."""
    out = []
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out.append(
                (
                    float(rec["t"]),
                    np.array(rec["x"], dtype=float),
                    np.array(rec["rho"], dtype=float),
                    np.array(rec["phi"], dtype=float),
                )
            )
    return out


def snapshots_to_states(path):
    """Rebuild (t, HydroState) pairs from a snapshot file."""
    out = []
    for t, x, rho, phi in read_snapshots(path):
        dx = x[1] - x[0]
        grid = Grid1D(float(x[0] - dx / 2), float(x[-1] + dx / 2), len(x))
        rho = rho / (rho.sum() * dx)
        out.append((t, HydroState(grid, rho, phi)))
    return out


def write_diagnostics(path, rows):
    lines = ["t,norm,energy,renorm_correction"]
    for r in rows:
        lines.append(",".join((_f(r.t), _f(r.norm), _f(r.energy), _f(r.renorm_correction))))
    atomic_write(path, "\n".join(lines) + "\n")


def write_ensemble_csv(path, rows):
    """rows of (particle_id, t, x)."""
    lines = ["particle_id,t,x"]
    for pid, t, x in rows:
        lines.append("%d,%s,%s" % (pid, _f(t), _f(x)))
    atomic_write(path, "\n".join(lines) + "\n")


def write_test_record(path, record: dict):
    atomic_write(path, json.dumps(record, sort_keys=True) + "\n")


def write_outcomes_csv(path, trials, dev: DiscreteDevice):
    lines = ["trial,index,eigenvalue_re,eigenvalue_im,cell"]
    for k, i in enumerate(trials):
        lam = dev.eigenvalues[i]
        lines.append(
            "%d,%d,%s,%s,%d" % (k, i, _f(lam.real), _f(lam.imag), dev.target_cells[i])
        )
    atomic_write(path, "\n".join(lines) + "\n")


def write_device(path, dev: DiscreteDevice):
    rec = {
        "dim": dev.dim,
        "basis": [[_c(v) for v in row] for row in dev.basis],
        "target_cells": [int(c) for c in dev.target_cells],
        "eigenvalues": [_c(v) for v in dev.eigenvalues],
    }
    atomic_write(path, json.dumps(rec) + "\n")


def _c(z):
    return [float(np.real(z)), float(np.imag(z))]


def read_device(path) -> DiscreteDevice:
    """Load and re-validate a device; raises BasisError/CellError on bad files."""
    with open(path) as fh:
        rec = json.load(fh)
    try:
        basis = np.array(
            [[complex(re, im) for re, im in row] for row in rec["basis"]]
        )
        cells = np.array(rec["target_cells"], dtype=int)
        eig = np.array([complex(re, im) for re, im in rec["eigenvalues"]])
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed device file {path}: {e}") from None
    return build_device(basis, cells, eig)


def write_likelihood_csv(path, like):
    """Matrix with a header row of pointer labels; data row i holds
    P(r | cell i) across the columns."""
    m = like.matrix
    lines = [",".join("alpha_%d" % r for r in range(m.shape[0]))]
    for i in range(m.shape[1]):
        lines.append(",".join(_f(v) for v in m[:, i]))
    atomic_write(path, "\n".join(lines) + "\n")


def read_likelihood_csv(path):
    from .amplification import LikelihoodModel

    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ConfigError(f"empty likelihood file {path}")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
    return LikelihoodModel(np.array(rows, dtype=float).T)


def write_experiment_log(path, log):
    lines = [json.dumps(rec, sort_keys=True) for rec in log.records()]
    atomic_write(path, "\n".join(lines) + "\n")


def write_compare_csv(path, times, l1s):
    lines = ["t,l1"]
    for t, v in zip(times, l1s):
        lines.append("%s,%s" % (_f(t), _f(v)))
    atomic_write(path, "\n".join(lines) + "\n")
