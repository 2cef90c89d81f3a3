"""FastAPI application exposing the link-analysis operations.

All endpoints are stateless: each request carries its configuration overlay
and the server evaluates the pure functions of the core package.  Config
problems surface as 422 responses whose detail names the offending key, in
the same shape pydantic uses for schema violations.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import ConfigError, RunConfig
from ..metrics import evaluate_detailed, length_grid
from ..protocol_mc import run_batched, run_trials
from ..selfcheck import run_check
from .models import (
    ConfigOverrides,
    HealthResponse,
    McReportModel,
    McRequest,
    McResponse,
    MetricsRequest,
    MetricsRow,
    OracleCheckRequest,
    OracleCheckResponse,
    SweepRequest,
    SweepResponse,
)


def _resolve_config(overrides: ConfigOverrides) -> RunConfig:
    return RunConfig().with_overrides(overrides.as_overrides())


def _evaluate(config: RunConfig, total_path_km: float):
    summary = evaluate_detailed(config.operating_point(total_path_km))
    m = summary.metrics
    row = MetricsRow(
        total_path_km=summary.total_path_km,
        eta_arm=summary.eta_arm,
        nbar=summary.nbar,
        ntilde=summary.ntilde,
        p_erasure=m.p_erasure,
        p_success=m.p_success,
        p_error=m.p_error,
        fidelity_max=m.fidelity_max,
        throughput_per_s=m.throughput_per_s,
    )
    return row, m


def _metrics_row(config: RunConfig, total_path_km: float) -> MetricsRow:
    return _evaluate(config, total_path_km)[0]


def create_app() -> FastAPI:
    app = FastAPI(title="entlink", version=__version__)

    @app.exception_handler(ConfigError)
    async def config_error_handler(request: Request, exc: ConfigError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={
                "detail": [
                    {"loc": ["config", exc.key], "msg": str(exc), "type": "value_error"}
                ]
            },
        )

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(name="entlink", version=__version__)

    @app.post("/v1/metrics", response_model=MetricsRow)
    def metrics(request: MetricsRequest) -> MetricsRow:
        config = _resolve_config(request.config)
        return _metrics_row(config, request.total_path_km)

    @app.post("/v1/sweep", response_model=SweepResponse)
    def sweep(request: SweepRequest) -> SweepResponse:
        if request.to_km < request.from_km:
            raise ConfigError("to_km", "must not be smaller than from_km")
        config = _resolve_config(request.config)
        lengths = length_grid(request.from_km, request.to_km, request.step_km)
        return SweepResponse(rows=[_metrics_row(config, total) for total in lengths])

    @app.post("/v1/oracle-check", response_model=OracleCheckResponse)
    def oracle_check(request: OracleCheckRequest) -> OracleCheckResponse:
        config = _resolve_config(request.config)
        result = run_check(config, request.mode, request.tolerance)
        return OracleCheckResponse(
            mode=result.mode,
            tolerance=result.tolerance,
            max_deviation=result.max_deviation,
            worst_case=result.worst_case,
            points=result.points,
            passed=result.passed,
            summary=result.summary(),
        )

    @app.post("/v1/mc", response_model=McResponse)
    def mc(request: McRequest) -> McResponse:
        config = _resolve_config(request.config)
        schedule = config.schedule()
        if not schedule.consistent_with_rate(config.trial_rate_hz):
            raise ConfigError(
                "trial_period_s", "schedule is inconsistent with trial_rate_hz"
            )
        analytic, point_metrics = _evaluate(config, request.total_path_km)
        if request.batches > 1:
            report = run_batched(
                point_metrics, schedule, request.trials, request.seed, request.batches
            )
        else:
            report = run_trials(point_metrics, schedule, request.trials, request.seed)
        fidelity_hat = report.fidelity_hat
        return McResponse(
            analytic=analytic,
            report=McReportModel(
                trials=report.trials,
                n_erasure=report.n_erasure,
                n_success=report.n_success,
                n_error=report.n_error,
                trial_rate_hz=report.trial_rate_hz,
                seed=report.seed,
                throughput_hat=report.throughput_hat,
                throughput_se=report.throughput_se,
                fidelity_hat=fidelity_hat,
                fidelity_se=report.fidelity_se,
            ),
            delta_p_erasure=report.n_erasure / report.trials - analytic.p_erasure,
            delta_p_success=report.n_success / report.trials - analytic.p_success,
            delta_p_error=report.n_error / report.trials - analytic.p_error,
            delta_fidelity=(
                None if fidelity_hat is None else fidelity_hat - analytic.fidelity_max
            ),
        )

    return app
