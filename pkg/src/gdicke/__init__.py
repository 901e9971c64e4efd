"""Two interacting spin ensembles sharing a bosonic mode: mean-field phase
diagram, Gaussian fluctuation spectra, and a finite-size exact-diagonalization
oracle, with a sweep/fit command-line front end."""

from .errors import (
    DimensionCap,
    GdickeError,
    InsufficientPoints,
    InvalidExpansionPoint,
    NoBoundaryInBracket,
    NonConvergence,
    NonPositiveValue,
    UncertaintyViolation,
    UnstableMode,
)
from .model import (
    BoundaryDistances,
    MeanFieldConfiguration,
    ModelParams,
    OrderParameters,
    Phase,
    PhaseLabel,
    analytic_branches,
    boundary_chis,
    classify_phase,
    mean_field_energy,
    mean_field_gradient,
    order_parameters,
)
from .meanfield import (
    ChiDerivatives,
    MeanFieldSolution,
    MinimizeOptions,
    analytic_energy_derivatives_chi,
    energy_derivatives_chi,
    minimize,
)
from .fluctuations import (
    GaussianSpectrum,
    QuadraticCoefficients,
    QuadratureFluctuations,
    build_quadratic,
    covariance_observables,
    energy_gap,
    entanglement_entropy,
    mode_entropies,
    symplectic_form,
    williamson,
    williamson_by_steps,
)
from .ed import (
    EDObservables,
    FiniteModel,
    GroundState,
    build_hamiltonian,
    converge_cutoff,
    ground_state,
    observables,
    parity_operator,
    write_coordinate_matrix,
)
from .sweep import (
    Axis,
    ExponentFit,
    SweepSpec,
    fit_exponent,
    locate_critical,
    run_sweep,
    write_csv,
    write_jsonl,
)

__all__ = [
    "Axis",
    "BoundaryDistances",
    "ChiDerivatives",
    "DimensionCap",
    "EDObservables",
    "ExponentFit",
    "FiniteModel",
    "GaussianSpectrum",
    "GdickeError",
    "GroundState",
    "InsufficientPoints",
    "InvalidExpansionPoint",
    "MeanFieldConfiguration",
    "MeanFieldSolution",
    "MinimizeOptions",
    "ModelParams",
    "NoBoundaryInBracket",
    "NonConvergence",
    "NonPositiveValue",
    "OrderParameters",
    "Phase",
    "PhaseLabel",
    "QuadraticCoefficients",
    "QuadratureFluctuations",
    "SweepSpec",
    "UncertaintyViolation",
    "UnstableMode",
    "analytic_branches",
    "analytic_energy_derivatives_chi",
    "boundary_chis",
    "build_hamiltonian",
    "build_quadratic",
    "classify_phase",
    "converge_cutoff",
    "covariance_observables",
    "energy_derivatives_chi",
    "energy_gap",
    "entanglement_entropy",
    "fit_exponent",
    "ground_state",
    "locate_critical",
    "mean_field_energy",
    "mean_field_gradient",
    "minimize",
    "mode_entropies",
    "observables",
    "order_parameters",
    "parity_operator",
    "run_sweep",
    "symplectic_form",
    "williamson",
    "williamson_by_steps",
    "write_coordinate_matrix",
    "write_csv",
    "write_jsonl",
]

__version__ = "0.1.0"
