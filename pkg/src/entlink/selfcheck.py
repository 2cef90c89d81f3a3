"""Built-in oracle suites certifying the closed forms against slow routes.

Two derivations in this package are nontrivial enough to warrant a permanent
self-check, runnable from the CLI and the service:

* quadrature: the closed-form loading integrals versus direct numerical
  integration of the source correlation functions through the memory-cavity
  response, over a grid of pump levels, linewidth ratios, and
  transmissivities (relative deviation);
* fock: the closed-form number-basis matrix elements versus the density
  matrix rebuilt by squeezing a thermal state, including the three event
  probabilities recomputed by contracting those matrices (absolute
  deviation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .gaussian_pair import (
    TruncatedDensityMatrix,
    TwoModeSqueezedThermal,
    fock_element,
    fock_oracle,
)
from .loading import MemoryCavityParams, loaded_pair_state, quadrature_loading_oracle
from .metrics import erasure_probability, success_probability
from .source import OpaParams

__all__ = [
    "CheckResult",
    "QUADRATURE_GRID",
    "quadrature_check",
    "fock_check",
    "run_check",
    "erasure_from_matrices",
    "success_from_matrices",
]

# pump level, Gamma_c / Gamma, arm transmissivity; coupling ratios pinned at 1
QUADRATURE_GRID: tuple[tuple[float, float, float], ...] = tuple(
    (g, ratio, eta)
    for g in (0.01, 0.05, 0.1, 0.3)
    for ratio in (0.25, 0.5, 1.0, 2.0)
    for eta in (0.01, 0.1, 1.0)
)

FOCK_CHECK_N_MAX = 12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one oracle suite."""

    mode: str
    tolerance: float
    max_deviation: float
    worst_case: str
    points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.mode}: max deviation {self.max_deviation:.3e} "
            f"(tolerance {self.tolerance:.3e}, {self.points} comparisons, "
            f"worst at {self.worst_case})"
        )


def quadrature_check(config: RunConfig, tolerance: float) -> CheckResult:
    """Closed-form (nbar, ntilde) vs the loading quadrature over the grid.

    The rate scale comes from the configured OPA linewidth; the grid fixes
    everything else.  Deviations are relative to the quadrature values.
    """
    gamma = config.opa_linewidth
    worst = -1.0
    worst_case = "n/a"
    comparisons = 0
    for g, ratio, eta in QUADRATURE_GRID:
        opa = OpaParams(g=g, gamma_total=gamma, gamma_out=gamma)
        mem = MemoryCavityParams(gamma_c_total=ratio * gamma)
        state = loaded_pair_state(opa, mem, eta, pair_index=1)
        nbar_q, ntilde_q = quadrature_loading_oracle(opa, mem, eta)
        for name, closed, quad in (
            ("nbar", state.nbar, nbar_q),
            ("ntilde", state.ntilde_signed, ntilde_q),
        ):
            deviation = abs(closed - quad) / abs(quad)
            comparisons += 1
            if deviation > worst:
                worst = deviation
                worst_case = f"{name} at g={g}, Gamma_c/Gamma={ratio}, eta={eta}"
    return CheckResult("quadrature", tolerance, worst, worst_case, comparisons)


def _check_states(config: RunConfig) -> list[tuple[str, TwoModeSqueezedThermal]]:
    states = []
    opa = config.opa()
    mem = config.memory()
    for total_km in (0.0, 50.0, 100.0):
        eta = 10.0 ** (
            -(config.excess_loss_db_per_arm + config.fiber_loss_db_per_km * total_km / 2.0)
            / 10.0
        )
        states.append(
            (f"loaded, 2L={total_km:g} km", loaded_pair_state(opa, mem, eta, pair_index=1))
        )
    nbar_pure = 0.1
    states.append(
        (
            "pure limit, nbar=0.1",
            TwoModeSqueezedThermal(nbar_pure, np.sqrt(nbar_pure * (nbar_pure + 1.0))),
        )
    )
    return states


def erasure_from_matrices(
    rho1: TruncatedDensityMatrix, rho2: TruncatedDensityMatrix
) -> float:
    """Erasure probability contracted from truncated density matrices."""
    p_signal = rho1.reduced_vacuum_probability(0) * rho2.reduced_vacuum_probability(0)
    p_idler = rho1.reduced_vacuum_probability(1) * rho2.reduced_vacuum_probability(1)
    return p_signal + p_idler - rho1.element(0, 0, 0, 0) * rho2.element(0, 0, 0, 0)


def success_from_matrices(
    rho1: TruncatedDensityMatrix, rho2: TruncatedDensityMatrix
) -> float:
    """Singlet projection contracted from truncated density matrices."""
    return 0.5 * (
        rho1.element(1, 1, 1, 1) * rho2.element(0, 0, 0, 0)
        + rho1.element(0, 0, 0, 0) * rho2.element(1, 1, 1, 1)
        - rho1.element(0, 0, 1, 1) * rho2.element(1, 1, 0, 0)
        - rho1.element(1, 1, 0, 0) * rho2.element(0, 0, 1, 1)
    )


def fock_check(config: RunConfig, tolerance: float) -> CheckResult:
    """fock_element vs fock_oracle, plus probability contractions, max-abs."""
    worst = -1.0
    worst_case = "n/a"
    comparisons = 0
    for label, state in _check_states(config):
        oracle = fock_oracle(state, n_max=FOCK_CHECK_N_MAX)
        dim = oracle.dim
        closed = np.empty_like(oracle.elements)
        for n1 in range(dim):
            for n2 in range(dim):
                for m1 in range(dim):
                    for m2 in range(dim):
                        closed[oracle.index(n1, n2), oracle.index(m1, m2)] = fock_element(
                            state, n1, n2, m1, m2
                        )
        deviation = float(np.max(np.abs(closed - oracle.elements)))
        comparisons += dim**4
        if deviation > worst:
            worst = deviation
            worst_case = f"matrix elements, {label}"

        pair2 = state.flipped()  # every check state carries the positive ntilde
        rho2 = fock_oracle(pair2, n_max=FOCK_CHECK_N_MAX)
        probability_pairs = (
            ("p_erasure", erasure_probability(state, pair2), erasure_from_matrices(oracle, rho2)),
            ("p_success", success_probability(state, pair2), success_from_matrices(oracle, rho2)),
        )
        for name, closed_p, contracted in probability_pairs:
            deviation = abs(closed_p - contracted)
            comparisons += 1
            if deviation > worst:
                worst = deviation
                worst_case = f"{name}, {label}"
    return CheckResult("fock", tolerance, worst, worst_case, comparisons)


def run_check(config: RunConfig, mode: str, tolerance: float) -> CheckResult:
    if tolerance < 0.0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance}")
    if mode == "quadrature":
        return quadrature_check(config, tolerance)
    if mode == "fock":
        return fock_check(config, tolerance)
    raise ValueError(f"unknown check mode: {mode!r}")
