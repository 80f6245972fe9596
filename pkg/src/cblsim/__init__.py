"""Steady-state simulator for a degenerate coherent beat laser.

Computes the squeezing and intensity of the cavity and output radiation of
a driven three-level cascade laser whose cavity is coupled to broadband
biased noise, and validates the closed forms against two independent
numerical oracles (quadrature moment ODEs and truncated number-basis
density-matrix propagation).
"""

from .analytic import (
    QuadMoments,
    SteadyObservables,
    cavity_variances,
    mean_photon_cavity,
    mean_photon_output,
    mean_photon_output_omega0,
    output_variances,
    output_variances_direct,
    output_variances_eta0,
    output_variances_omega0,
    quad_moments_steady,
    quad_moments_transient,
    squeezing_percent,
    steady_observables,
)
from .errors import (
    CblsimError,
    RepresentabilityError,
    StepSizeError,
    ThresholdError,
    TruncationLeakError,
)
from .fockspace import (
    FockState,
    GeneratorCoefficients,
    build_generator,
    evolve,
    moments_from_state,
    quad_moments_from_state,
    steady_state,
    truncation_scan,
)
from .langevin import (
    EnsembleConfig,
    EnsembleMoments,
    MomentState,
    integrate_moments,
    moment_ode_step,
    steady_moments_linear,
    stochastic_ensemble,
)
from .model import (
    AtomicPreparation,
    DriftDiffusion,
    GainCoefficients,
    ReservoirMoments,
    SystemParams,
    atomic_preparation,
    check_threshold,
    drift_diffusion,
    gain_coefficients,
    reservoir_moments,
)
from .sweeps import SweepSpec, eval_point, figure_preset, run_figure, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AtomicPreparation",
    "CblsimError",
    "DriftDiffusion",
    "EnsembleConfig",
    "EnsembleMoments",
    "FockState",
    "GainCoefficients",
    "GeneratorCoefficients",
    "MomentState",
    "QuadMoments",
    "RepresentabilityError",
    "ReservoirMoments",
    "StepSizeError",
    "SteadyObservables",
    "SweepSpec",
    "SystemParams",
    "ThresholdError",
    "TruncationLeakError",
    "atomic_preparation",
    "build_generator",
    "cavity_variances",
    "check_threshold",
    "drift_diffusion",
    "eval_point",
    "evolve",
    "figure_preset",
    "gain_coefficients",
    "integrate_moments",
    "mean_photon_cavity",
    "mean_photon_output",
    "mean_photon_output_omega0",
    "moment_ode_step",
    "moments_from_state",
    "output_variances",
    "output_variances_direct",
    "output_variances_eta0",
    "output_variances_omega0",
    "quad_moments_from_state",
    "quad_moments_steady",
    "quad_moments_transient",
    "reservoir_moments",
    "run_figure",
    "run_sweep",
    "squeezing_percent",
    "steady_moments_linear",
    "steady_observables",
    "steady_state",
    "stochastic_ensemble",
    "truncation_scan",
]
