"""Cold-cavity loading: source correlations -> loaded memory-mode state.

The incoming field (source correlations scaled by eta * gamma_out / Gamma for
the lossy arm) drives a single-ended memory cavity of linewidth Gamma_c
through an input coupler gamma_c.  Integrating the source correlation
functions through the cavity's exponential response gives the loaded two-mode
Gaussian state parameters

    nbar   = I_minus - I_plus,      ntilde = I_minus + I_plus,
    I_-+   = eta * gamma_out * gamma_c * g /
             { Gamma_c * (1 -+ g) * [(1 -+ g) * Gamma + Gamma_c] }.

Note the factor g in the numerator: it is required for the closed form to
match direct integration of the correlation functions through the loading
kernel (the quadrature oracle below reproduces it to machine precision).

The closed form is the steady-state (long loading interval) result.  Finite
loading intervals are available only through the quadrature path, which also
serves as the independent oracle for the closed form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .gaussian_pair import TwoModeSqueezedThermal
from .source import OpaParams, normal_correlation, phase_sensitive_correlation

__all__ = [
    "MemoryCavityParams",
    "CouplingPair",
    "QuadratureConvergenceError",
    "coupling_integrals",
    "loaded_pair_state",
    "quadrature_loading_oracle",
]


class QuadratureConvergenceError(RuntimeError):
    """Raised when the loading quadrature cannot certify its error target."""

    def __init__(self, achieved: float, target: float):
        self.achieved = achieved
        self.target = target
        super().__init__(
            f"quadrature error estimate {achieved:.3e} exceeds target {target:.3e}"
        )


@dataclass(frozen=True)
class MemoryCavityParams:
    """Memory cavity: linewidth Gamma_c, input coupler gamma_c, both s^-1.

    gamma_c_in defaults to gamma_c_total (no intracavity excess loss).
    t_load is the loading interval in seconds; None means steady state.
    """

    gamma_c_total: float
    gamma_c_in: float | None = None
    t_load: float | None = None

    def __post_init__(self) -> None:
        if not self.gamma_c_total > 0.0:
            raise ValueError(f"gamma_c_total must be positive, got {self.gamma_c_total}")
        if self.gamma_c_in is None:
            object.__setattr__(self, "gamma_c_in", self.gamma_c_total)
        if not 0.0 < self.gamma_c_in <= self.gamma_c_total:
            raise ValueError(
                f"gamma_c_in must satisfy 0 < gamma_c_in <= gamma_c_total, got {self.gamma_c_in}"
            )
        if self.t_load is not None and not self.t_load > 0.0:
            raise ValueError(f"t_load must be positive when given, got {self.t_load}")

    @property
    def coupling_ratio(self) -> float:
        return self.gamma_c_in / self.gamma_c_total


@dataclass(frozen=True)
class CouplingPair:
    """The two loading integrals; nbar = i_minus - i_plus, ntilde = their sum."""

    i_minus: float
    i_plus: float


def _check_eta(eta: float) -> None:
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"arm transmissivity must lie in [0, 1], got {eta}")


def coupling_integrals(
    opa: OpaParams, mem: MemoryCavityParams, eta: float
) -> CouplingPair:
    """Closed-form steady-state loading integrals I_-+ (dimensionless).

    Invariant under a joint rescaling of all four rates; both integrals
    vanish with g or eta.
    """
    _check_eta(eta)
    g = opa.g
    numerator = eta * opa.gamma_out * mem.gamma_c_in * g

    def one(sign: float) -> float:
        factor = 1.0 + sign * g  # (1 -+ g) with sign = -1 for I_minus
        return numerator / (
            mem.gamma_c_total * factor * (factor * opa.gamma_total + mem.gamma_c_total)
        )

    return CouplingPair(i_minus=one(-1.0), i_plus=one(+1.0))


def loaded_pair_state(
    opa: OpaParams, mem: MemoryCavityParams, eta: float, pair_index: int
) -> TwoModeSqueezedThermal:
    """Loaded state of one polarization pair after the loading interval.

    pair_index 1 is the (S_x, I_y) pair with ntilde = +(I_- + I_+);
    pair_index 2 is the (S_y, I_x) pair with the opposite sign, realizing
    the anti-phased pumping of the second OPA.
    """
    if pair_index not in (1, 2):
        raise ValueError(f"pair_index must be 1 or 2, got {pair_index}")
    pair = coupling_integrals(opa, mem, eta)
    nbar = pair.i_minus - pair.i_plus
    ntilde = pair.i_minus + pair.i_plus
    if pair_index == 2:
        ntilde = -ntilde
    return TwoModeSqueezedThermal(nbar=nbar, ntilde_signed=ntilde)


def quadrature_loading_oracle(
    opa: OpaParams,
    mem: MemoryCavityParams,
    eta: float,
    t_load: float | None = None,
    error_target: float = 1e-10,
) -> tuple[float, float]:
    """(nbar, |ntilde|) by numerical integration of the loading double integral.

    The loaded moments are

        2 * gamma_c * (eta * gamma_out / Gamma) *
        int_0^T int_0^T e^(-Gamma_c (T-t)) e^(-Gamma_c (T-t')) K(t - t') dt dt'

    with K the normally-ordered (for nbar) or phase-sensitive (for ntilde)
    source correlation function.  Because K depends only on |t - t'| and the
    cavity weight is exponential, the double integral reduces exactly to a
    single integral over the lag w:

        steady state:  (1/Gamma_c) int_0^inf  K(w) e^(-Gamma_c w) dw
        finite T:      (1/Gamma_c) int_0^T    K(w) e^(-Gamma_c w)
                                              (1 - e^(-2 Gamma_c (T-w))) dw

    which is then evaluated by adaptive quadrature on the dimensionless lag
    x = Gamma * w.  The kernel is evaluated by calling the source module's
    correlation functions, keeping this path independent of the closed-form
    coupling integrals.

    t_load overrides mem.t_load; None falls back to mem.t_load, and a missing
    value on both means steady state.  Vacuum initial conditions and vacuum
    loss operators contribute nothing to these normally-ordered moments, so
    they do not appear.
    """
    _check_eta(eta)
    if t_load is None:
        t_load = mem.t_load
    if t_load is not None and not t_load > 0.0:
        raise ValueError(f"t_load must be positive when given, got {t_load}")
    if opa.g == 0.0 or eta == 0.0:
        return 0.0, 0.0

    gamma = opa.gamma_total
    gamma_c = mem.gamma_c_total
    rate_ratio = gamma_c / gamma
    prefactor = 2.0 * mem.gamma_c_in * (eta * opa.gamma_out / gamma) / (gamma_c * gamma)

    def weight(x: float) -> float:
        damping = np.exp(-rate_ratio * x)
        if t_load is None:
            return damping
        return damping * (1.0 - np.exp(-2.0 * rate_ratio * (gamma * t_load - x)))

    def integrand_n(x: float) -> float:
        return normal_correlation(opa, x / gamma) * weight(x)

    def integrand_p(x: float) -> float:
        return phase_sensitive_correlation(opa, x / gamma, 1) * weight(x)

    upper = np.inf if t_load is None else gamma * t_load
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for integrand in (integrand_n, integrand_p):
            try:
                value, abserr = integrate.quad(
                    integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-12, limit=400
                )
            except integrate.IntegrationWarning as exc:
                raise QuadratureConvergenceError(float("nan"), error_target) from exc
            # the moment is prefactor * integral, so its error bound scales the same way
            if abserr * prefactor > error_target:
                raise QuadratureConvergenceError(abserr * prefactor, error_target)
            results.append(prefactor * value)

    return results[0], results[1]
