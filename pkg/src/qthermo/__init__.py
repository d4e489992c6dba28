"""qthermo: qubit thermodynamics with eigenbasis-resolved accounting.

Simulates one- and two-qubit open/closed dynamics in closed form and
tracks internal energy, entropy, heat and work along the trajectory
under two competing definitions: the eigenbasis split (heat follows
eigenvalue changes, work follows eigenprojector changes) and the
Alicki split (heat follows the state derivative, work the Hamiltonian
derivative).
"""

from .errors import (
    ConfigError,
    CrossCheckError,
    DimensionError,
    IntegrationFailureError,
    NonConvergenceError,
    NonHermitianError,
    NotPositiveError,
    NumericalFailureError,
    QThermoError,
    TraceNotOneError,
    UnmatchedBranchesError,
    ValidationError,
)
from .linalg import (
    EigenSystem,
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    expectation,
    hermitian_eig_2x2,
    hermitian_eig_4x4,
    partial_trace,
    tensor_product,
)
from .states import (
    BlochVector,
    DensityMatrix,
    SpectralDecomposition,
    bloch_vector,
    match_branches,
    spectral_decompose,
    validate_density,
    von_neumann_entropy,
)
from .dynamics import (
    DispersiveParams,
    LindbladParams,
    dispersive_joint_evolve,
    dispersive_reduced_A,
    lindblad_analytic,
    lindblad_rhs,
    qubit_hamiltonian,
    rk4_evolve,
)
from .thermo import (
    FirstLawAudit,
    ThermoLedger,
    ThermoSample,
    audit_first_law,
    build_ledger,
    entropy_rate,
    heat_increment_new,
    heat_rate_alicki,
    internal_energy,
    work_increment_new,
    work_rate_alicki,
)
from .scenarios import (
    CSV_HEADER,
    ScenarioConfig,
    Tolerances,
    emit_run,
    emit_series,
    run_dissipative,
    run_scenario,
    run_two_qubit,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "CSV_HEADER",
    "ConfigError",
    "CrossCheckError",
    "DensityMatrix",
    "DimensionError",
    "DispersiveParams",
    "EigenSystem",
    "FirstLawAudit",
    "IDENTITY_2",
    "IntegrationFailureError",
    "LindbladParams",
    "NonConvergenceError",
    "NonHermitianError",
    "NotPositiveError",
    "NumericalFailureError",
    "QThermoError",
    "ScenarioConfig",
    "SIGMA_MINUS",
    "SIGMA_PLUS",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SpectralDecomposition",
    "ThermoLedger",
    "ThermoSample",
    "Tolerances",
    "TraceNotOneError",
    "UnmatchedBranchesError",
    "ValidationError",
    "audit_first_law",
    "bloch_vector",
    "build_ledger",
    "dispersive_joint_evolve",
    "dispersive_reduced_A",
    "emit_run",
    "emit_series",
    "entropy_rate",
    "expectation",
    "heat_increment_new",
    "heat_rate_alicki",
    "hermitian_eig_2x2",
    "hermitian_eig_4x4",
    "internal_energy",
    "lindblad_analytic",
    "lindblad_rhs",
    "match_branches",
    "partial_trace",
    "qubit_hamiltonian",
    "rk4_evolve",
    "run_dissipative",
    "run_scenario",
    "run_two_qubit",
    "spectral_decompose",
    "tensor_product",
    "validate_density",
    "von_neumann_entropy",
    "work_increment_new",
    "work_rate_alicki",
]
