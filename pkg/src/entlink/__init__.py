"""entlink: loss-limited analysis of a fiber polarization-entanglement link.

A dual-OPA entangled-pair source feeds two lossy fiber arms terminated by
single-atom memory cavities.  The package computes the loaded two-mode
Gaussian states, the per-trial erasure/success/error probabilities, the
loss-limited teleportation fidelity, and the throughput versus path length,
and simulates the clocked loading protocol trial by trial.  A FastAPI
service (entlink.service) exposes the operations; the CLI is a thin client
over it.
"""

__version__ = "0.1.0"

from .channel import ChannelParams, arm_transmissivity
from .config import ConfigError, RunConfig
from .gaussian_pair import (
    TruncatedDensityMatrix,
    TwoModeSqueezedThermal,
    antinormal_characteristic,
    fock_element,
    fock_oracle,
)
from .loading import (
    CouplingPair,
    MemoryCavityParams,
    coupling_integrals,
    loaded_pair_state,
    quadrature_loading_oracle,
)
from .metrics import (
    LinkMetrics,
    OperatingPoint,
    PointSummary,
    erasure_probability,
    error_probability,
    evaluate,
    evaluate_detailed,
    fidelity_max,
    success_probability,
    sweep_path_length,
)
from .protocol_mc import McReport, TrialSchedule, run_trials, time_to_load
from .source import (
    JointModeState,
    OpaParams,
    joint_state,
    normal_correlation,
    phase_sensitive_correlation,
    spectral_flux,
    spectral_photon_number,
)

__all__ = [
    "__version__",
    "ChannelParams",
    "ConfigError",
    "CouplingPair",
    "JointModeState",
    "LinkMetrics",
    "McReport",
    "MemoryCavityParams",
    "OpaParams",
    "OperatingPoint",
    "PointSummary",
    "RunConfig",
    "TrialSchedule",
    "TruncatedDensityMatrix",
    "TwoModeSqueezedThermal",
    "antinormal_characteristic",
    "arm_transmissivity",
    "coupling_integrals",
    "erasure_probability",
    "error_probability",
    "evaluate",
    "evaluate_detailed",
    "fidelity_max",
    "fock_element",
    "fock_oracle",
    "joint_state",
    "loaded_pair_state",
    "normal_correlation",
    "phase_sensitive_correlation",
    "quadrature_loading_oracle",
    "run_trials",
    "spectral_flux",
    "spectral_photon_number",
    "success_probability",
    "sweep_path_length",
    "time_to_load",
]
