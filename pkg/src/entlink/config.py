"""Run configuration: flat key = value files plus programmatic overrides.

The default configuration reproduces the reference operating point used
throughout the test suite: OPAs pumped at 1% of threshold, memory cavities
half as wide as the OPA cavities, unit coupling ratios, 5 dB excess loss per
arm, 0.2 dB/km fiber, and a 500 kHz trial rate (2 us trial period).

File format: one ``key = value`` per line, ``#`` starts a comment, blank
lines ignored.  Unknown keys and out-of-range values are rejected with the
offending key named in the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping

from .channel import ChannelParams
from .loading import MemoryCavityParams
from .metrics import OperatingPoint
from .protocol_mc import TrialSchedule
from .source import OpaParams

__all__ = ["ConfigError", "RunConfig", "DEFAULT_CONFIG"]


class ConfigError(ValueError):
    """Configuration problem, carrying the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


@dataclass(frozen=True)
class RunConfig:
    """Validated link configuration.

    pump_fraction            g**2, fraction of OPA oscillation threshold
    opa_linewidth            Gamma, s^-1 (angular); sets the overall rate
                             scale, which cancels from every steady-state
                             figure of merit
    opa_out_coupling_ratio   gamma_out / Gamma
    memory_linewidth_ratio   Gamma_c / Gamma
    memory_in_coupling_ratio gamma_c / Gamma_c
    excess_loss_db_per_arm   fixed loss per source-to-memory path, dB
    fiber_loss_db_per_km     fiber attenuation, dB/km
    trial_rate_hz            memory cycling rate R
    slot_s .. trial_period_s loading-protocol schedule overrides, seconds
    """

    pump_fraction: float = 0.01
    opa_linewidth: float = 1.885e8  # ~2*pi * 30 MHz
    opa_out_coupling_ratio: float = 1.0
    memory_linewidth_ratio: float = 0.5
    memory_in_coupling_ratio: float = 1.0
    excess_loss_db_per_arm: float = 5.0
    fiber_loss_db_per_km: float = 0.2
    trial_rate_hz: float = 5.0e5
    slot_s: float = 400e-9
    load_s: float = 400e-9
    pump_s: float = 100e-9
    verify_s: float = 1e-6
    trial_period_s: float = 2e-6

    def __post_init__(self) -> None:
        def require(key: str, condition: bool, message: str) -> None:
            if not condition:
                raise ConfigError(key, f"{message} (got {getattr(self, key)})")

        require("pump_fraction", 0.0 < self.pump_fraction < 1.0, "must lie in (0, 1)")
        require("opa_linewidth", self.opa_linewidth > 0.0, "must be positive")
        require(
            "opa_out_coupling_ratio",
            0.0 < self.opa_out_coupling_ratio <= 1.0,
            "must lie in (0, 1]",
        )
        require("memory_linewidth_ratio", self.memory_linewidth_ratio > 0.0, "must be positive")
        require(
            "memory_in_coupling_ratio",
            0.0 < self.memory_in_coupling_ratio <= 1.0,
            "must lie in (0, 1]",
        )
        require(
            "excess_loss_db_per_arm", self.excess_loss_db_per_arm >= 0.0, "must be non-negative"
        )
        require(
            "fiber_loss_db_per_km", self.fiber_loss_db_per_km >= 0.0, "must be non-negative"
        )
        require("trial_rate_hz", self.trial_rate_hz > 0.0, "must be positive")
        for key in ("slot_s", "load_s", "pump_s", "verify_s", "trial_period_s"):
            require(key, getattr(self, key) > 0.0, "must be positive")
        busy = self.slot_s + self.pump_s + self.verify_s
        require(
            "trial_period_s",
            self.trial_period_s >= busy,
            f"must cover slot + pump + verify = {busy:g} s",
        )
        rate_from_period = 1.0 / self.trial_period_s
        require(
            "trial_rate_hz",
            abs(rate_from_period - self.trial_rate_hz) <= 1e-9 * self.trial_rate_hz,
            f"must equal 1 / trial_period_s = {rate_from_period!r}",
        )

    # -- construction ------------------------------------------------------

    @classmethod
    def key_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def _coerce(cls, key: str, raw: object) -> float:
        if key not in cls.key_names():
            raise ConfigError(key, "unknown key")
        try:
            value = float(raw)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ConfigError(key, f"not a number: {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(key, f"must be finite, got {raw!r}")
        return value

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "RunConfig":
        """Build from a key/value mapping over defaults; values may be strings."""
        return cls(**{key: cls._coerce(key, raw) for key, raw in mapping.items()})

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        return cls.from_mapping(parse_config_text(Path(path).read_text(encoding="utf-8")))

    def with_overrides(self, overrides: Mapping[str, object]) -> "RunConfig":
        """New config with the given keys replaced (overrides win).

        Cross-field validation runs on the merged result, so an override set
        may move several interdependent keys at once.
        """
        merged = self.as_dict()
        merged.update({key: self._coerce(key, raw) for key, raw in overrides.items()})
        return RunConfig(**merged)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.key_names()}

    # -- derived domain objects --------------------------------------------

    def opa(self) -> OpaParams:
        gamma = self.opa_linewidth
        return OpaParams(
            g=math.sqrt(self.pump_fraction),
            gamma_total=gamma,
            gamma_out=self.opa_out_coupling_ratio * gamma,
        )

    def memory(self) -> MemoryCavityParams:
        gamma_c = self.memory_linewidth_ratio * self.opa_linewidth
        return MemoryCavityParams(
            gamma_c_total=gamma_c,
            gamma_c_in=self.memory_in_coupling_ratio * gamma_c,
        )

    def channel(self, total_path_km: float) -> ChannelParams:
        if total_path_km < 0.0:
            raise ConfigError("total_path_km", f"must be non-negative (got {total_path_km})")
        return ChannelParams(
            length_km=total_path_km / 2.0,  # lengths are quoted as total path 2L
            fiber_loss_db_per_km=self.fiber_loss_db_per_km,
            excess_loss_db=self.excess_loss_db_per_arm,
        )

    def operating_point(self, total_path_km: float) -> OperatingPoint:
        return OperatingPoint(
            opa=self.opa(),
            mem=self.memory(),
            channel=self.channel(total_path_km),
            trial_rate_hz=self.trial_rate_hz,
        )

    def schedule(self) -> TrialSchedule:
        return TrialSchedule(
            slot_s=self.slot_s,
            load_s=self.load_s,
            pump_s=self.pump_s,
            verify_s=self.verify_s,
            trial_period_s=self.trial_period_s,
        )


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a string mapping (no validation)."""
    result: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line.split()[0], f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(key or "<empty>", f"line {lineno}: expected 'key = value'")
        if key in result:
            raise ConfigError(key, f"line {lineno}: duplicate key")
        result[key] = value
    return result


DEFAULT_CONFIG = RunConfig()
