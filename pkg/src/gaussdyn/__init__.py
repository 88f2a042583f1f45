"""Gaussian states, channels, measurements and continuously monitored dynamics.

Phase-space vectors use the ``(x1, p1, x2, p2, ...)`` ordering and
covariance matrices the anticommutator convention (vacuum = identity).
"""

from .channels import (
    Dilation,
    GaussianChannel,
    apply_channel,
    apply_via_dilation,
    compose,
    dilate,
    dual_channel,
    environment_output,
    validate_channel,
)
from .diagnostics import Validation
from .dynamics import (
    DiffusiveModel,
    DriftDiffusion,
    drift_diffusion,
    evolve_unconditional,
    exact_evolution,
    steady_state_lyapunov,
    unconditional_path,
    validate_AD,
)
from .errors import GaussDynError
from .filtering import (
    FilterMatrices,
    MonitoredModel,
    TrajectoryRecord,
    ensemble_statistics,
    evolve_conditional_cov,
    filter_matrices,
    riccati_rhs,
    simulate_ensemble,
    simulate_trajectory,
    steady_state_riccati,
)
from .measurements import (
    ChannelNoise,
    DarkNoise,
    Efficiency,
    GeneralDyneMeasurement,
    condition,
    effective_covariance,
    heterodyne,
    homodyne,
    outcome_distribution,
    sample_outcome,
)
from .scenarios import (
    build_opo,
    build_scattering,
    monitor_system,
    opo_stable,
    reference_steady_states,
)
from .states import (
    GaussianState,
    coherent,
    overlap,
    partial_trace,
    purity,
    squeezed_vacuum,
    tensor,
    thermal,
    two_mode_squeezed_vacuum,
    vacuum,
    validate_state,
)
from .symplectic import omega, symplectic_eigenvalues
from .unitaries import apply_symplectic, apply_unitary, displace, symplectic_from_hamiltonian

__version__ = "0.1.0"

__all__ = [
    "Dilation",
    "GaussianChannel",
    "apply_channel",
    "apply_via_dilation",
    "compose",
    "dilate",
    "dual_channel",
    "environment_output",
    "validate_channel",
    "Validation",
    "DiffusiveModel",
    "DriftDiffusion",
    "drift_diffusion",
    "evolve_unconditional",
    "exact_evolution",
    "steady_state_lyapunov",
    "unconditional_path",
    "validate_AD",
    "GaussDynError",
    "FilterMatrices",
    "MonitoredModel",
    "TrajectoryRecord",
    "ensemble_statistics",
    "evolve_conditional_cov",
    "filter_matrices",
    "riccati_rhs",
    "simulate_ensemble",
    "simulate_trajectory",
    "steady_state_riccati",
    "ChannelNoise",
    "DarkNoise",
    "Efficiency",
    "GeneralDyneMeasurement",
    "condition",
    "effective_covariance",
    "heterodyne",
    "homodyne",
    "outcome_distribution",
    "sample_outcome",
    "build_opo",
    "build_scattering",
    "monitor_system",
    "opo_stable",
    "reference_steady_states",
    "GaussianState",
    "coherent",
    "overlap",
    "partial_trace",
    "purity",
    "squeezed_vacuum",
    "tensor",
    "thermal",
    "two_mode_squeezed_vacuum",
    "vacuum",
    "validate_state",
    "omega",
    "symplectic_eigenvalues",
    "apply_symplectic",
    "apply_unitary",
    "displace",
    "symplectic_from_hamiltonian",
    "__version__",
]
