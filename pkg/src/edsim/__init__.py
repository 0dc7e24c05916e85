"""1D quantum dynamics with interchangeable wavefunction and density-phase
engines, definite-position trajectory sampling, unitary measurement devices,
and Bayesian pointer amplification."""

from .amplification import (
    ExperimentLog,
    LikelihoodModel,
    Posterior,
    bayes_update,
    end_to_end,
    ideal_likelihood,
    noisy_likelihood,
    simulate_pointer,
)
from .analytic import (
    box_eigenstate,
    coherent_state,
    discrete_ground_state,
    free_gaussian,
    free_gaussian_phase,
    free_gaussian_variance,
    harmonic_eigenstate,
    plane_wave,
)
from .config import RunConfig
from .dynamics import (
    DiagnosticsRow,
    EvolutionConfig,
    EvolutionTrace,
    MadelungOptions,
    energy,
    evolve,
    l1_distance,
    madelung_step,
    schrodinger_step,
)
from .errors import (
    BasisError,
    CellError,
    ConfigError,
    MonotonicityError,
    NodeError,
    RangeError,
    SimulationError,
    SolverError,
    StabilityError,
    TraceCoverageError,
    ZeroEvidenceError,
)
from .measurement import (
    ContinuumDevice,
    DiscreteDevice,
    OutcomeRecord,
    apply_device,
    born_probabilities,
    build_device,
    check_normal,
    collapse_update,
    continuum_pdf,
    device_state,
    draw_outcomes,
    fourier_device,
    identity_device,
    observable_matrix,
    simulate_measurement,
)
from .operators import gradient, hamiltonian, laplacian
from .state import (
    DEFAULT_NODE_FLOOR,
    Grid1D,
    HydroState,
    PhysicalParams,
    WaveFunction,
    current_velocity,
    entropy_field,
    from_hydro,
    to_hydro,
)
from .stats import (
    cdf_from_density,
    chi2_gof,
    ks_critical,
    ks_statistic,
    ks_two_sample,
    make_test_record,
)
from .trajectories import (
    CURRENT_FLOW,
    ENTROPIC_DIFFUSION,
    SAMPLER_MODES,
    Ensemble,
    advance_ensemble,
    inverse_cdf_sample,
    marginal_histogram,
    sample_initial,
)
from .validate import CRITERIA, CriterionResult, run_all, run_one

__version__ = "0.1.0"

__all__ = [
    "BasisError",
    "CRITERIA",
    "CURRENT_FLOW",
    "CellError",
    "ConfigError",
    "ContinuumDevice",
    "CriterionResult",
    "DEFAULT_NODE_FLOOR",
    "DiagnosticsRow",
    "DiscreteDevice",
    "ENTROPIC_DIFFUSION",
    "Ensemble",
    "EvolutionConfig",
    "EvolutionTrace",
    "ExperimentLog",
    "Grid1D",
    "HydroState",
    "LikelihoodModel",
    "MadelungOptions",
    "MonotonicityError",
    "NodeError",
    "OutcomeRecord",
    "PhysicalParams",
    "Posterior",
    "RangeError",
    "RunConfig",
    "SAMPLER_MODES",
    "SimulationError",
    "SolverError",
    "StabilityError",
    "TraceCoverageError",
    "WaveFunction",
    "ZeroEvidenceError",
    "advance_ensemble",
    "apply_device",
    "bayes_update",
    "born_probabilities",
    "box_eigenstate",
    "build_device",
    "cdf_from_density",
    "check_normal",
    "chi2_gof",
    "coherent_state",
    "collapse_update",
    "continuum_pdf",
    "current_velocity",
    "device_state",
    "discrete_ground_state",
    "draw_outcomes",
    "end_to_end",
    "energy",
    "entropy_field",
    "evolve",
    "fourier_device",
    "free_gaussian",
    "free_gaussian_phase",
    "free_gaussian_variance",
    "from_hydro",
    "gradient",
    "hamiltonian",
    "harmonic_eigenstate",
    "ideal_likelihood",
    "identity_device",
    "inverse_cdf_sample",
    "ks_critical",
    "ks_statistic",
    "ks_two_sample",
    "l1_distance",
    "laplacian",
    "madelung_step",
    "make_test_record",
    "marginal_histogram",
    "noisy_likelihood",
    "observable_matrix",
    "plane_wave",
    "run_all",
    "run_one",
    "sample_initial",
    "schrodinger_step",
    "simulate_measurement",
    "simulate_pointer",
    "to_hydro",
]
