"""Loss budget of one source-to-memory arm.

Fiber attenuation plus a fixed excess-loss allowance are lumped into a single
power transmissivity per arm.  Where the excess loss sits along the path does
not matter for any downstream quantity, only the product enters the loaded
state, so the arm is modeled by one number.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ChannelParams", "arm_transmissivity"]


@dataclass(frozen=True)
class ChannelParams:
    """One arm of the link: length_km of fiber plus fixed excess loss (dB)."""

    length_km: float
    fiber_loss_db_per_km: float = 0.2
    excess_loss_db: float = 5.0

    def __post_init__(self) -> None:
        if self.length_km < 0.0:
            raise ValueError(f"length_km must be non-negative, got {self.length_km}")
        if self.fiber_loss_db_per_km < 0.0:
            raise ValueError(
                f"fiber_loss_db_per_km must be non-negative, got {self.fiber_loss_db_per_km}"
            )
        if self.excess_loss_db < 0.0:
            raise ValueError(f"excess_loss_db must be non-negative, got {self.excess_loss_db}")

    @property
    def total_loss_db(self) -> float:
        return self.excess_loss_db + self.fiber_loss_db_per_km * self.length_km


def arm_transmissivity(params: ChannelParams) -> float:
    """End-to-end power transmissivity of one arm, eta = 10**(-loss_dB / 10)."""
    return 10.0 ** (-params.total_loss_db / 10.0)
