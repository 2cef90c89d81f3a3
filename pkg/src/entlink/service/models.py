"""Pydantic request/response schemas for the link-analysis service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class ConfigOverrides(BaseModel):
    """Sparse overlay on the default run configuration.

    Field names mirror the ``key = value`` config-file keys; unset fields
    fall back to the defaults.  Cross-field constraints (for example the
    trial rate versus the trial period) are validated server-side on the
    merged configuration.
    """

    model_config = ConfigDict(extra="forbid")

    pump_fraction: float | None = None
    opa_linewidth: float | None = None
    opa_out_coupling_ratio: float | None = None
    memory_linewidth_ratio: float | None = None
    memory_in_coupling_ratio: float | None = None
    excess_loss_db_per_arm: float | None = None
    fiber_loss_db_per_km: float | None = None
    trial_rate_hz: float | None = None
    slot_s: float | None = None
    load_s: float | None = None
    pump_s: float | None = None
    verify_s: float | None = None
    trial_period_s: float | None = None

    def as_overrides(self) -> dict[str, float]:
        return self.model_dump(exclude_none=True)


class MetricsRequest(BaseModel):
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    total_path_km: float = Field(ge=0.0, description="total path length 2L, km")


class MetricsRow(BaseModel):
    """One evaluated operating point; the CSV row schema mirrors this."""

    total_path_km: float
    eta_arm: float
    nbar: float
    ntilde: float
    p_erasure: float
    p_success: float
    p_error: float
    fidelity_max: float
    throughput_per_s: float


class SweepRequest(BaseModel):
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    from_km: float = Field(ge=0.0)
    to_km: float = Field(ge=0.0)
    step_km: float = Field(gt=0.0)


class SweepResponse(BaseModel):
    rows: list[MetricsRow]


class OracleCheckRequest(BaseModel):
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    mode: Literal["quadrature", "fock"]
    tolerance: float = Field(ge=0.0)


class OracleCheckResponse(BaseModel):
    mode: str
    tolerance: float
    max_deviation: float
    worst_case: str
    points: int
    passed: bool
    summary: str


class McRequest(BaseModel):
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    total_path_km: float = Field(ge=0.0)
    trials: int = Field(ge=1)
    seed: int = Field(ge=0)
    batches: int = Field(default=1, ge=1)


class McReportModel(BaseModel):
    trials: int
    n_erasure: int
    n_success: int
    n_error: int
    trial_rate_hz: float
    seed: int
    throughput_hat: float
    throughput_se: float
    fidelity_hat: float | None
    fidelity_se: float | None


class McResponse(BaseModel):
    analytic: MetricsRow
    report: McReportModel
    delta_p_erasure: float
    delta_p_success: float
    delta_p_error: float
    delta_fidelity: float | None


class HealthResponse(BaseModel):
    name: str
    version: str
