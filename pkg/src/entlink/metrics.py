"""Per-trial event probabilities, loss-limited fidelity, and throughput.

Every loading trial ends in exactly one of three events:

* erasure  -- at least one memory holds no photon;
* success  -- both memories loaded from one entangled pair (the loaded
              four-mode state projects onto the singlet);
* error    -- both memories loaded, but not from one pair.

The mode ordering for all contractions is fixed once, here:
pair 1 = (S_x, I_y) with ntilde > 0, pair 2 = (S_y, I_x) with ntilde < 0,
and the singlet ket is (|1 1 0 0> - |0 0 1 1>) / sqrt(2) in that order.

The error probability is always the complement 1 - P_erasure - P_success;
the loss-limited teleportation fidelity weights error events by 1/2
(an error loads independent, randomly-polarized photons):

    F_max = 1 - P_error / [2 (P_success + P_error)].
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import ChannelParams, arm_transmissivity
from .gaussian_pair import (
    TwoModeSqueezedThermal,
    fock_element,
    reduced_vacuum_probability,
)
from .loading import MemoryCavityParams, loaded_pair_state
from .source import OpaParams

__all__ = [
    "LinkMetrics",
    "OperatingPoint",
    "PointSummary",
    "erasure_probability",
    "success_probability",
    "error_probability",
    "fidelity_max",
    "evaluate",
    "evaluate_detailed",
    "sweep_path_length",
    "length_grid",
]

# negative complement smaller than this is floating-point residue, not physics
_CLAMP_TOLERANCE = 1e-12
_SYMMETRY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LinkMetrics:
    """Figures of merit at one operating point."""

    p_erasure: float
    p_success: float
    p_error: float
    fidelity_max: float
    throughput_per_s: float


@dataclass(frozen=True)
class OperatingPoint:
    """Full link configuration: source, memory, one arm's channel, trial rate."""

    opa: OpaParams
    mem: MemoryCavityParams
    channel: ChannelParams
    trial_rate_hz: float

    def __post_init__(self) -> None:
        # zero is allowed so throughput degenerates gracefully; the config
        # layer is stricter and requires a positive rate
        if self.trial_rate_hz < 0.0:
            raise ValueError(f"trial_rate_hz must be non-negative, got {self.trial_rate_hz}")


@dataclass(frozen=True)
class PointSummary:
    """LinkMetrics plus the intermediate link quantities behind them."""

    total_path_km: float
    eta_arm: float
    nbar: float
    ntilde: float
    metrics: LinkMetrics


def _check_symmetric(pair1: TwoModeSqueezedThermal, pair2: TwoModeSqueezedThermal) -> None:
    scale = 1.0 + pair1.nbar
    if abs(pair1.nbar - pair2.nbar) > _SYMMETRY_TOLERANCE * scale or (
        abs(pair1.ntilde_abs - pair2.ntilde_abs) > _SYMMETRY_TOLERANCE * scale
    ):
        raise ValueError(
            "asymmetric pair states: symmetric operation requires equal nbar and |ntilde|"
        )


def erasure_probability(
    pair1: TwoModeSqueezedThermal, pair2: TwoModeSqueezedThermal
) -> float:
    """Probability that at least one memory ends the trial unloaded.

    By inclusion-exclusion over the two stations,
    P(S empty) P(S' empty) + P(I empty) P(I' empty) - P(pair1 vacuum) P(pair2 vacuum);
    single-mode vacuum probabilities are the thermal marginals, the two-mode
    vacuum projections are number-basis elements.
    """
    _check_symmetric(pair1, pair2)
    p_signal = reduced_vacuum_probability(pair1) * reduced_vacuum_probability(pair2)
    p_idler = p_signal  # identical thermal marginals on every mode
    joint = fock_element(pair1, 0, 0, 0, 0) * fock_element(pair2, 0, 0, 0, 0)
    return p_signal + p_idler - joint


def success_probability(
    pair1: TwoModeSqueezedThermal, pair2: TwoModeSqueezedThermal
) -> float:
    """Singlet projection <psi| rho_1 x rho_2 |psi> of the loaded state.

    Requires pair 1 to carry the positive ntilde and pair 2 the negative one;
    equal signs would project onto the wrong Bell state.  The cross term is
    constructive precisely because the signs are opposite.
    """
    _check_symmetric(pair1, pair2)
    if pair1.ntilde_signed < 0.0 or pair2.ntilde_signed > 0.0:
        raise ValueError(
            "success_probability expects pair1 with ntilde >= 0 and pair2 with ntilde <= 0"
        )
    one_one_1 = fock_element(pair1, 1, 1, 1, 1)
    one_one_2 = fock_element(pair2, 1, 1, 1, 1)
    vac_1 = fock_element(pair1, 0, 0, 0, 0)
    vac_2 = fock_element(pair2, 0, 0, 0, 0)
    cross_1 = fock_element(pair1, 0, 0, 1, 1)  # <1 1| rho_1 |0 0>
    cross_2 = fock_element(pair2, 1, 1, 0, 0)  # <0 0| rho_2 |1 1>
    return 0.5 * (
        one_one_1 * vac_2
        + vac_1 * one_one_2
        - cross_1 * cross_2
        - fock_element(pair1, 1, 1, 0, 0) * fock_element(pair2, 0, 0, 1, 1)
    )


def error_probability(p_erasure: float, p_success: float) -> float:
    """Complement 1 - P_erasure - P_success, with a guarded clamp at zero.

    A residue more negative than the clamp tolerance signals inconsistent
    inputs and raises instead of being silently absorbed.
    """
    for name, value in (("p_erasure", p_erasure), ("p_success", p_success)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")
    residual = 1.0 - p_erasure - p_success
    if residual < -_CLAMP_TOLERANCE:
        raise ValueError(
            f"p_erasure + p_success exceeds 1 by {-residual:.3e}; inconsistent state pair"
        )
    return max(residual, 0.0)


def fidelity_max(p_success: float, p_error: float) -> float:
    """Loss-limited fidelity 1 - P_error / [2 (P_success + P_error)], in [1/2, 1]."""
    if p_success < 0.0 or p_error < 0.0:
        raise ValueError("event probabilities must be non-negative")
    loaded = p_success + p_error
    if loaded <= 0.0:
        raise ValueError("fidelity is undefined when no trials load both memories")
    return 1.0 - p_error / (2.0 * loaded)


def evaluate(point: OperatingPoint) -> LinkMetrics:
    """Chain channel -> loading -> event probabilities -> fidelity/throughput."""
    return evaluate_detailed(point).metrics


def evaluate_detailed(point: OperatingPoint) -> PointSummary:
    """Like :func:`evaluate`, additionally reporting eta, nbar, and ntilde."""
    eta = arm_transmissivity(point.channel)
    pair1 = loaded_pair_state(point.opa, point.mem, eta, pair_index=1)
    pair2 = loaded_pair_state(point.opa, point.mem, eta, pair_index=2)
    p_erasure = erasure_probability(pair1, pair2)
    p_success = success_probability(pair1, pair2)
    p_error = error_probability(p_erasure, p_success)
    metrics = LinkMetrics(
        p_erasure=p_erasure,
        p_success=p_success,
        p_error=p_error,
        fidelity_max=fidelity_max(p_success, p_error),
        throughput_per_s=point.trial_rate_hz * p_success,
    )
    return PointSummary(
        total_path_km=2.0 * point.channel.length_km,
        eta_arm=eta,
        nbar=pair1.nbar,
        ntilde=pair1.ntilde_signed,
        metrics=metrics,
    )


def _with_total_path(point: OperatingPoint, total_path_km: float) -> OperatingPoint:
    channel = ChannelParams(
        length_km=total_path_km / 2.0,
        fiber_loss_db_per_km=point.channel.fiber_loss_db_per_km,
        excess_loss_db=point.channel.excess_loss_db,
    )
    return OperatingPoint(point.opa, point.mem, channel, point.trial_rate_hz)


def sweep_path_length(
    point: OperatingPoint, lengths_km: list[float]
) -> list[tuple[float, LinkMetrics]]:
    """Evaluate the link at each total path length (2L), preserving order.

    Lengths must be non-negative and non-decreasing.  Each entry is
    independent, so the sweep could run concurrently; results are assembled
    in input order either way.
    """
    previous = None
    for total in lengths_km:
        if total < 0.0:
            raise ValueError(f"path lengths must be non-negative, got {total}")
        if previous is not None and total < previous:
            raise ValueError("path lengths must be in ascending order")
        previous = total
    return [(total, evaluate(_with_total_path(point, total))) for total in lengths_km]


def length_grid(start_km: float, stop_km: float, step_km: float) -> list[float]:
    """Inclusive arithmetic grid start, start+step, ... capped at stop.

    A step larger than the range yields the single point start_km.
    """
    if start_km < 0.0:
        raise ValueError(f"start_km must be non-negative, got {start_km}")
    if stop_km < start_km:
        raise ValueError("stop_km must not be smaller than start_km")
    if not step_km > 0.0:
        raise ValueError(f"step_km must be positive, got {step_km}")
    lengths = []
    i = 0
    while True:
        value = start_km + i * step_km
        if value > stop_km + 1e-9 * step_km:
            break
        lengths.append(min(value, stop_km))
        i += 1
    return lengths
