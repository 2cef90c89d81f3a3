"""Command-line client for the link-analysis service.

The CLI never computes metrics itself: it builds the request, sends it to a
service instance, and formats the response.  Without ``--server`` the
service application is instantiated in-process and driven through an ASGI
test transport, so no network or daemon is involved; with ``--server URL``
the same requests go to a running instance (see ``entlink serve``).

Lengths on the command line are always the TOTAL path (2L).  The per-arm
fiber length is half of that; forgetting this halving is the classic
mistake, so it happens in exactly one place, server-side.

Exit codes: 0 success, 1 usage or configuration error, 2 oracle-check
failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import httpx

from .config import ConfigError, RunConfig

CSV_HEADER = (
    "total_path_km,eta_arm,nbar,ntilde,p_erasure,p_success,p_error,"
    "fidelity_max,throughput_per_s"
)
_ROW_FIELDS = CSV_HEADER.split(",")

COUNTS_HEADER = "trials,n_erasure,n_success,n_error,seed"


class CliError(click.ClickException):
    """Usage/config-level failure; rendered to stderr, exit status 1."""

    exit_code = 1


def _format_value(value: float) -> str:
    # repr is the shortest decimal that round-trips the float64 exactly
    return repr(float(value))


def _format_row(row: dict) -> str:
    return ",".join(_format_value(row[name]) for name in _ROW_FIELDS)


class ServiceClient:
    """Thin HTTP client; in-process ASGI when no server URL is given."""

    def __init__(self, server: str | None):
        if server is None:
            import warnings

            with warnings.catch_warnings():
                # this starlette release deprecates its httpx-backed test
                # client; it remains the supported sync ASGI driver here
                warnings.filterwarnings(
                    "ignore", message="Using `httpx` with `starlette.testclient`"
                )
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client: httpx.Client = TestClient(create_app())
        else:
            self._client = httpx.Client(base_url=server, timeout=600.0)

    def post(self, path: str, payload: dict) -> dict:
        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise CliError(f"service request failed: {exc}") from exc
        if response.status_code != 200:
            raise CliError(_describe_error(response))
        return response.json()


def _describe_error(response: httpx.Response) -> str:
    try:
        detail = response.json()["detail"]
    except Exception:
        return f"service error {response.status_code}: {response.text}"
    if isinstance(detail, list):
        parts = []
        for item in detail:
            loc = ".".join(str(piece) for piece in item.get("loc", []) if piece != "body")
            message = item.get("msg", "invalid")
            parts.append(f"{loc}: {message}" if loc else message)
        return "; ".join(parts)
    return str(detail)


def _resolve_config(config_path: str | None, overrides: tuple[str, ...]) -> RunConfig:
    try:
        config = RunConfig.from_file(config_path) if config_path else RunConfig()
        pairs = {}
        for item in overrides:
            if "=" not in item:
                raise CliError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            pairs[key.strip()] = value.strip()
        return config.with_overrides(pairs)
    except ConfigError as exc:
        raise CliError(str(exc)) from exc
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}") from exc


def _write_text(path: Path, content: str) -> None:
    try:
        path.write_text(content, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc


@click.group(name="entlink")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Configuration file (key = value lines).",
)
@click.option(
    "--set",
    "overrides",
    multiple=True,
    metavar="KEY=VALUE",
    help="Override one configuration key (repeatable; wins over the file).",
)
@click.option("--server", default=None, metavar="URL", help="Remote service URL.")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: str | None,
    overrides: tuple[str, ...],
    server: str | None,
) -> None:
    """Entanglement-distribution link analysis (lengths are total path, 2L km)."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = _resolve_config(config_path, overrides)
    ctx.obj["server"] = server


def _client(ctx: click.Context) -> ServiceClient:
    return ServiceClient(ctx.obj["server"])


def _config_payload(ctx: click.Context) -> dict:
    return ctx.obj["config"].as_dict()


@cli.command()
@click.argument("total_path_km", type=float)
@click.pass_context
def metrics(ctx: click.Context, total_path_km: float) -> int:
    """Evaluate one operating point; prints a CSV header plus one row."""
    if total_path_km < 0.0:
        raise CliError(f"total path length must be non-negative, got {total_path_km}")
    row = _client(ctx).post(
        "/v1/metrics", {"config": _config_payload(ctx), "total_path_km": total_path_km}
    )
    click.echo(CSV_HEADER)
    click.echo(_format_row(row))
    return 0


@cli.command()
@click.argument("from_km", type=float)
@click.argument("to_km", type=float)
@click.argument("step_km", type=float)
@click.option(
    "--output", "-o", required=True, type=click.Path(dir_okay=False), help="CSV output path."
)
@click.pass_context
def sweep(
    ctx: click.Context, from_km: float, to_km: float, step_km: float, output: str
) -> int:
    """Sweep total path length from FROM_KM to TO_KM in STEP_KM steps."""
    if from_km < 0.0 or to_km < from_km:
        raise CliError("sweep range must satisfy 0 <= FROM_KM <= TO_KM")
    if step_km <= 0.0:
        raise CliError(f"STEP_KM must be positive, got {step_km}")
    response = _client(ctx).post(
        "/v1/sweep",
        {
            "config": _config_payload(ctx),
            "from_km": from_km,
            "to_km": to_km,
            "step_km": step_km,
        },
    )
    rows = response["rows"]
    lines = [CSV_HEADER] + [_format_row(row) for row in rows]
    _write_text(Path(output), "\n".join(lines) + "\n")
    click.echo(f"wrote {len(rows)} rows to {output}")
    return 0


@cli.command(name="oracle-check")
@click.option(
    "--mode",
    type=click.Choice(["quadrature", "fock"]),
    required=True,
    help="Which oracle suite to run.",
)
@click.option(
    "--tolerance",
    type=float,
    required=True,
    help="Pass threshold: relative for quadrature, absolute for fock.",
)
@click.pass_context
def oracle_check(ctx: click.Context, mode: str, tolerance: float) -> int:
    """Certify the closed forms against their independent numerical oracles."""
    if tolerance < 0.0:
        raise CliError(f"tolerance must be non-negative, got {tolerance}")
    result = _client(ctx).post(
        "/v1/oracle-check",
        {"config": _config_payload(ctx), "mode": mode, "tolerance": tolerance},
    )
    click.echo(result["summary"])
    return 0 if result["passed"] else 2


@cli.command()
@click.argument("total_path_km", type=float)
@click.option("--trials", type=int, required=True, help="Number of loading trials.")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG root seed.")
@click.option("--batches", type=int, default=1, show_default=True, help="Seeded batches.")
@click.option(
    "--output",
    "-o",
    required=True,
    type=click.Path(dir_okay=False),
    help="Report path; a counts row goes to the same path plus '.counts.csv'.",
)
@click.pass_context
def mc(
    ctx: click.Context,
    total_path_km: float,
    trials: int,
    seed: int,
    batches: int,
    output: str,
) -> int:
    """Simulate TRIALS loading attempts at one operating point."""
    if total_path_km < 0.0:
        raise CliError(f"total path length must be non-negative, got {total_path_km}")
    if trials < 1:
        raise CliError(f"--trials must be at least 1, got {trials}")
    if seed < 0:
        raise CliError(f"--seed must be non-negative, got {seed}")
    if batches < 1 or batches > trials:
        raise CliError("--batches must be in [1, trials]")
    response = _client(ctx).post(
        "/v1/mc",
        {
            "config": _config_payload(ctx),
            "total_path_km": total_path_km,
            "trials": trials,
            "seed": seed,
            "batches": batches,
        },
    )
    report = response["report"]
    analytic = response["analytic"]

    fidelity_hat = report["fidelity_hat"]
    report_lines = [
        "# loading-trial simulation report",
        f"total_path_km = {_format_value(analytic['total_path_km'])}",
        f"trials = {report['trials']}",
        f"seed = {report['seed']}",
        f"trial_rate_hz = {_format_value(report['trial_rate_hz'])}",
        f"n_erasure = {report['n_erasure']}",
        f"n_success = {report['n_success']}",
        f"n_error = {report['n_error']}",
        f"throughput_hat_per_s = {_format_value(report['throughput_hat'])}",
        f"throughput_se_per_s = {_format_value(report['throughput_se'])}",
        f"fidelity_hat = "
        + ("undefined" if fidelity_hat is None else _format_value(fidelity_hat)),
        f"fidelity_se = "
        + (
            "undefined"
            if report["fidelity_se"] is None
            else _format_value(report["fidelity_se"])
        ),
        f"analytic_p_erasure = {_format_value(analytic['p_erasure'])}",
        f"analytic_p_success = {_format_value(analytic['p_success'])}",
        f"analytic_p_error = {_format_value(analytic['p_error'])}",
        f"analytic_fidelity_max = {_format_value(analytic['fidelity_max'])}",
        f"analytic_throughput_per_s = {_format_value(analytic['throughput_per_s'])}",
    ]
    _write_text(Path(output), "\n".join(report_lines) + "\n")

    counts_row = ",".join(
        str(report[name]) for name in ("trials", "n_erasure", "n_success", "n_error", "seed")
    )
    _write_text(Path(output + ".counts.csv"), COUNTS_HEADER + "\n" + counts_row + "\n")

    for name in ("p_erasure", "p_success", "p_error"):
        empirical = report[f"n_{name.removeprefix('p_')}"] / report["trials"]
        click.echo(
            f"{name}: empirical {_format_value(empirical)} "
            f"analytic {_format_value(analytic[name])} "
            f"delta {response[f'delta_{name}']:+.3e}"
        )
    if fidelity_hat is None:
        click.echo("fidelity: empirical undefined (no loaded trials)")
    else:
        click.echo(
            f"fidelity: empirical {_format_value(fidelity_hat)} "
            f"analytic {_format_value(analytic['fidelity_max'])} "
            f"delta {response['delta_fidelity']:+.3e}"
        )
    return 0


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> int:
    """Run the analysis service (long-running, multi-client mode)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)
    return 0


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        result = cli.main(args=argv, standalone_mode=False, obj={})
        return result if isinstance(result, int) else 0
    except CliError as exc:
        exc.show()
        return 1
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
