"""Pointer-variable amplification: inferring the detection cell from a
macroscopic reading.

The amplifier is characterized entirely by a likelihood matrix
P(pointer = r | cell = i); inference back to the cell is a standard Bayes
update. Nothing in this module reads wavefunction amplitudes: the only
quantum input is the cell index the measurement stage produced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ZeroEvidenceError
from .measurement import DiscreteDevice, born_probabilities, draw_outcomes
from .seeding import stream_rng

_COLUMN_TOL = 1e-12


@dataclass(frozen=True)
class LikelihoodModel:
    """matrix[r, i] = P(pointer r | cell i); columns sum to 1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise RangeError("likelihood must be a matrix")
        if np.any(m < 0) or np.any(m > 1):
            raise RangeError("likelihood entries must lie in [0, 1]")
        colsums = m.sum(axis=0)
        if np.max(np.abs(colsums - 1.0)) > _COLUMN_TOL:
            raise RangeError("likelihood columns must each sum to 1")
        object.__setattr__(self, "matrix", m)

    @property
    def n_pointers(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_cells(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class Posterior:
    probabilities: np.ndarray
    observed_r: int


def ideal_likelihood(n: int) -> LikelihoodModel:
    """Perfect amplifier: the pointer reading determines the cell, P = identity."""
    if n < 1:
        raise RangeError("n must be >= 1")
    return LikelihoodModel(np.eye(n))


def noisy_likelihood(n: int, epsilon: float) -> LikelihoodModel:
    """Symmetric confusion: correct reading with probability 1 - epsilon,
    error mass spread uniformly over the other pointer values."""
    if not 0.0 <= epsilon < 1.0:
        raise RangeError("epsilon must lie in [0, 1)")
    if n < 2:
        raise RangeError("need n >= 2 pointer values")
    m = np.full((n, n), epsilon / (n - 1))
    np.fill_diagonal(m, 1.0 - epsilon)
    return LikelihoodModel(m)


def bayes_update(prior, like: LikelihoodModel, observed_r: int) -> Posterior:
    """posterior[i] = prior[i] L[r, i] / sum_i prior[i] L[r, i]."""
    prior = np.asarray(prior, dtype=float)
    if abs(prior.sum() - 1.0) > 1e-9:
        raise ValueError("prior must be normalized")
    row = like.matrix[int(observed_r)]
    evidence = float(row @ prior)
    if evidence <= 0.0:
        raise ZeroEvidenceError(
            f"pointer value {observed_r} has zero probability under the model"
        )
    return Posterior(prior * row / evidence, int(observed_r))


def simulate_pointer(true_cell: int, like: LikelihoodModel, seed, count: int = 1):
    """Categorical draw(s) from column true_cell of the likelihood."""
    rng = seed if isinstance(seed, np.random.Generator) else stream_rng(seed, "pointer")
    cdf = np.cumsum(like.matrix[:, int(true_cell)])
    u = rng.random(int(count)) * cdf[-1]
    r = np.minimum(np.searchsorted(cdf, u, side="left"), like.n_pointers - 1)
    return int(r[0]) if count == 1 else r


@dataclass
class ExperimentLog:
    born: np.ndarray        # Born vector of the prepared state
    prior: np.ndarray       # prior used in every update
    true_i: np.ndarray      # per-trial detection cells
    observed_r: np.ndarray  # per-trial pointer readings
    posterior: np.ndarray   # per-trial posteriors, one row per trial
    map_i: np.ndarray       # per-trial MAP estimates

    @property
    def error_rate(self) -> float:
        return float(np.mean(self.map_i != self.true_i))

    def pointer_marginal(self, n_pointers) -> np.ndarray:
        return np.bincount(self.observed_r, minlength=n_pointers) / len(self.observed_r)

    def records(self):
        for k in range(len(self.true_i)):
            yield {
                "trial": int(k),
                "true_i": int(self.true_i[k]),
                "observed_r": int(self.observed_r[k]),
                "posterior": [float(v) for v in self.posterior[k]],
                "map_i": int(self.map_i[k]),
            }


def end_to_end(
    psi, dev: DiscreteDevice, like: LikelihoodModel, n_trials, seed, prior=None
) -> ExperimentLog:
    """Full chain per trial: Born-sample the detection cell, push it through
    the amplifier, infer it back.

    The default prior is the Born vector of the prepared state: absent other
    information, the experimenter's expectation IS the predicted outcome
    distribution. Pass an explicit prior to override.
    """
    if like.n_cells != dev.dim:
        raise ValueError("likelihood is not dimensioned to the device")
    p = born_probabilities(dev, psi)
    prior = p.copy() if prior is None else np.asarray(prior, dtype=float)
    if abs(prior.sum() - 1.0) > 1e-9:
        raise ValueError("prior must be normalized")

    true_i = draw_outcomes(dev, psi, n_trials, seed)
    rng = stream_rng(seed, "pointer")
    cum = np.cumsum(like.matrix, axis=0)
    u = rng.random(len(true_i))
    observed_r = (u[None, :] > cum[:, true_i]).sum(axis=0)
    observed_r = np.minimum(observed_r, like.n_pointers - 1)

    weights = prior[None, :] * like.matrix[observed_r, :]
    evidence = weights.sum(axis=1)
    if np.any(evidence <= 0.0):
        raise ZeroEvidenceError("a drawn pointer value is impossible under the model")
    posterior = weights / evidence[:, None]
    map_i = np.argmax(posterior, axis=1)
    return ExperimentLog(p, prior, true_i, observed_r, posterior, map_i)
