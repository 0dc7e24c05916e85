"""Unitary measurement devices: observable eigenstates mapped to position cells.

A device holds an orthonormal basis {a_i} of an N-dimensional outcome
space, arbitrary scalar eigenvalues, and N distinct target position
cells. Its unitary sends a_i to the indicator of cell x_i, so measuring
any observable reduces to detecting a position. The probability of
outcome i after the device acts equals |<a_i|psi>|^2 before it; that
identity is what the tests assert.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import BasisError, CellError, MonotonicityError
from .seeding import stream_rng
from .state import WaveFunction
from .trajectories import inverse_cdf_sample

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class DiscreteDevice:
    dim: int
    basis: np.ndarray  # rows are the eigenvectors a_i
    eigenvalues: np.ndarray
    target_cells: np.ndarray
    unitary: np.ndarray


@dataclass(frozen=True)
class OutcomeRecord:
    index: int
    eigenvalue: complex
    detected_cell: int
    count: int


def build_device(basis, target_cells, eigenvalues=None) -> DiscreteDevice:
    """Validate the basis and assemble the device unitary.

    basis rows must be orthonormal and complete; target cells pairwise
    distinct. Eigenvalues are arbitrary scalars (default 0..N-1): labels,
    not dynamics.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
        raise BasisError("basis must be a square matrix of row vectors")
    dim = basis.shape[0]
    eye = np.eye(dim)
    gram = basis @ basis.conj().T
    if np.max(np.abs(gram - eye)) > ORTHO_TOL:
        raise BasisError(
            f"basis not orthonormal: max Gram deviation {np.max(np.abs(gram - eye)):.2e}"
        )
    comp = basis.conj().T @ basis  # sum_i |a_i><a_i|
    if np.max(np.abs(comp - eye)) > ORTHO_TOL:
        raise BasisError("basis not complete")
    cells = np.asarray(target_cells, dtype=int)
    if cells.shape != (dim,):
        raise CellError("need one target cell per basis vector")
    if len(set(cells.tolist())) != dim:
        raise CellError("target cells must be pairwise distinct")
    eigenvalues = (
        np.arange(dim, dtype=complex)
        if eigenvalues is None
        else np.asarray(eigenvalues, dtype=complex)
    )
    if eigenvalues.shape != (dim,):
        raise ValueError("need one eigenvalue per basis vector")
    # U = sum_i |x_i><a_i| in slot order: row i of U is conj(a_i)
    unitary = basis.conj()
    if np.max(np.abs(unitary.conj().T @ unitary - eye)) > ORTHO_TOL:
        raise BasisError("assembled matrix is not unitary")
    # explicit action check: U a_i = e_i
    action = unitary @ basis.T
    if np.max(np.abs(action - eye)) > ORTHO_TOL:
        raise BasisError("unitary does not map each a_i to its target indicator")
    return DiscreteDevice(dim, basis, eigenvalues, cells, unitary)


def identity_device(dim: int) -> DiscreteDevice:
    """Position measured directly: the basis is the cell indicators."""
    return build_device(np.eye(dim, dtype=complex), np.arange(dim))


def fourier_device(dim: int, target_cells=None) -> DiscreteDevice:
    """Momentum-like device: discrete Fourier vectors as the basis."""
    j = np.arange(dim)
    basis = np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
    cells = np.arange(dim) if target_cells is None else target_cells
    return build_device(basis, cells, j.astype(complex))


def observable_matrix(dev: DiscreteDevice) -> np.ndarray:
    """A = sum_i lambda_i |a_i><a_i|."""
    return (dev.basis.T * dev.eigenvalues) @ dev.basis.conj()


def check_normal(a, tol=ORTHO_TOL) -> bool:
    """True iff A commutes with its adjoint entrywise within tol."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    return bool(np.max(np.abs(a @ a.conj().T - a.conj().T @ a)) < tol)


def device_state(psi: WaveFunction) -> np.ndarray:
    """Embed a grid wavefunction into device space: unit vector of cell
    amplitudes, |component|^2 = cell probability."""
    return psi.amplitudes * np.sqrt(psi.grid.dx)


def born_probabilities(dev: DiscreteDevice, psi) -> np.ndarray:
    """p_i = |<a_i|psi>|^2; sums to 1 by completeness."""
    psi = np.asarray(psi, dtype=complex)
    return np.abs(dev.basis.conj() @ psi) ** 2


def apply_device(dev: DiscreteDevice, psi) -> np.ndarray:
    """psi' = U psi; component i of psi' lives at target cell x_i."""
    return dev.unitary @ np.asarray(psi, dtype=complex)


def draw_outcomes(dev, psi, n_trials, seed, method="categorical") -> np.ndarray:
    """Sample n_trials outcome indices from the post-device position density.

    'categorical' draws cells directly from |psi'|^2. 'positions' runs the
    same inverse-CDF position sampler the trajectory module uses over the
    device's cells and floors each position back to a cell: detection is
    literally a position reading.
    """
    probs = born_probabilities(dev, psi)
    rng = stream_rng(seed, "measurement")
    if method == "categorical":
        cdf = np.cumsum(probs)
        u = rng.random(int(n_trials)) * cdf[-1]
        return np.minimum(np.searchsorted(cdf, u, side="left"), dev.dim - 1)
    if method == "positions":
        pos = inverse_cdf_sample(probs, 0.0, 1.0, int(n_trials), rng)
        return np.clip(np.floor(pos).astype(int), 0, dev.dim - 1)
    raise ValueError("method must be 'categorical' or 'positions'")


def simulate_measurement(dev, psi, n_trials, seed, method="categorical"):
    """Aggregate draw_outcomes into one OutcomeRecord per outcome index."""
    trials = draw_outcomes(dev, psi, n_trials, seed, method)
    counts = np.bincount(trials, minlength=dev.dim)
    return [
        OutcomeRecord(i, complex(dev.eigenvalues[i]), int(dev.target_cells[i]), int(c))
        for i, c in enumerate(counts)
    ]


def collapse_update(dev: DiscreteDevice, observed_cell: int):
    """Condition on a detection: returns (index i, posterior state a_i).

    With an ideal position detector the posterior over outcomes is a point
    mass at the index whose target cell was hit."""
    hits = np.flatnonzero(dev.target_cells == int(observed_cell))
    if len(hits) == 0:
        raise CellError(f"cell {observed_cell} is not a target of this device")
    i = int(hits[0])
    return i, dev.basis[i].copy()


@dataclass(frozen=True)
class ContinuumDevice:
    """Smooth observable a = g(x) with supplied derivative, strictly monotone."""

    g: Callable
    g_prime: Callable


def continuum_pdf(cdev: ContinuumDevice, psi: WaveFunction, deriv_tol=1e-12):
    """Push the position density through a = g(x).

    Returns (a_grid, rho_a) with rho_a = rho(x)/|g'(x)| on the image grid
    a_j = g(x_j). Raises MonotonicityError if g' changes sign or falls
    below deriv_tol in magnitude anywhere on the grid.
    """
    x = psi.grid.cells
    gp = np.asarray(cdev.g_prime(x), dtype=float)
    if np.min(np.abs(gp)) < deriv_tol or (np.min(gp) < 0 < np.max(gp)):
        raise MonotonicityError("g' must be bounded away from zero with one sign")
    rho = psi.density()
    rho = rho / (rho.sum() * psi.grid.dx)
    a = np.asarray(cdev.g(x), dtype=float)
    return a, rho / np.abs(gp)
