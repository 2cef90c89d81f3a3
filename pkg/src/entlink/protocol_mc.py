"""Monte Carlo simulation of the clocked memory-loading protocol.

The link is clocked: every trial period the source fills a time slot, the
memory cavities integrate it, coherent pumping transfers the qubits, and a
cycling-transition fluorescence check verifies (assumed perfectly reliable)
whether each atom absorbed a photon.  A trial therefore ends as erasure,
success, or error, with the analytic probabilities supplied by the metrics
module; this module owns no quantum statistics, only event-level sampling.

Determinism contract: identical (inputs, seed) give identical reports.  A
root seed deterministically spawns per-batch sub-seeds, so batched runs of
the same root seed produce identical merged counts regardless of batch
scheduling; merging is a commutative, associative sum of counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import LinkMetrics

__all__ = [
    "TrialSchedule",
    "McReport",
    "LoadTimeStats",
    "run_trials",
    "run_batched",
    "combine_reports",
    "time_to_load",
]


@dataclass(frozen=True)
class TrialSchedule:
    """Timing of one loading trial (defaults: 400 ns slots, 2 us trials).

    slot_s     duration of one signal/idler time slot
    load_s     cavity loading interval (a few cold-cavity lifetimes)
    pump_s     coherent-pumping time for the photon-to-atom transfer
    verify_s   repeated cycling-transition verification time
    trial_period_s  full period between independent loading attempts
    """

    slot_s: float = 400e-9
    load_s: float = 400e-9
    pump_s: float = 100e-9
    verify_s: float = 1e-6
    trial_period_s: float = 2e-6

    def __post_init__(self) -> None:
        for name in ("slot_s", "load_s", "pump_s", "verify_s", "trial_period_s"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        busy = self.slot_s + self.pump_s + self.verify_s
        if self.trial_period_s < busy:
            raise ValueError(
                f"trial_period_s = {self.trial_period_s:g} is shorter than the busy time "
                f"slot + pump + verify = {busy:g}"
            )

    @property
    def trial_rate_hz(self) -> float:
        return 1.0 / self.trial_period_s

    def consistent_with_rate(self, rate_hz: float, rel_tol: float = 1e-9) -> bool:
        """True when 1 / trial_period_s matches the configured trial rate."""
        return abs(self.trial_rate_hz - rate_hz) <= rel_tol * rate_hz


@dataclass(frozen=True)
class McReport:
    """Outcome counts of a batch of loading trials plus derived estimators."""

    trials: int
    n_erasure: int
    n_success: int
    n_error: int
    trial_rate_hz: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_erasure + self.n_success + self.n_error != self.trials:
            raise ValueError("outcome counts must sum to the number of trials")

    @property
    def n_loaded(self) -> int:
        return self.n_success + self.n_error

    @property
    def throughput_hat(self) -> float:
        """Empirical successes per second, R * (n_success / trials)."""
        return self.trial_rate_hz * self.n_success / self.trials

    @property
    def throughput_se(self) -> float:
        p = self.n_success / self.trials
        return self.trial_rate_hz * float(np.sqrt(p * (1.0 - p) / self.trials))

    @property
    def fidelity_hat(self) -> float | None:
        """(n_success + n_error / 2) / (n_success + n_error); None if nothing loaded."""
        if self.n_loaded == 0:
            return None
        return (self.n_success + 0.5 * self.n_error) / self.n_loaded

    @property
    def fidelity_se(self) -> float | None:
        if self.n_loaded == 0:
            return None
        frac = self.n_error / self.n_loaded
        return 0.5 * float(np.sqrt(frac * (1.0 - frac) / self.n_loaded))


@dataclass(frozen=True)
class LoadTimeStats:
    """Time to accumulate a target number of loaded pairs, over replications."""

    mean_s: float
    p50_s: float
    p95_s: float
    pairs_needed: int
    replications: int
    seed: int


def _probabilities(metrics: LinkMetrics) -> list[float]:
    for name, p in (
        ("p_erasure", metrics.p_erasure),
        ("p_success", metrics.p_success),
        ("p_error", metrics.p_error),
    ):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return [metrics.p_erasure, metrics.p_success, metrics.p_error]


def _sample_counts(
    rng: np.random.Generator, trials: int, probabilities: list[float]
) -> tuple[int, int, int]:
    counts = rng.multinomial(trials, probabilities)
    return int(counts[0]), int(counts[1]), int(counts[2])


def run_trials(
    metrics: LinkMetrics, schedule: TrialSchedule, trials: int, seed: int
) -> McReport:
    """Sample `trials` independent loading attempts from the event taxonomy.

    Each trial is a three-way categorical draw over (erasure, success, error);
    error trials contribute fidelity weight 1/2 through the report's
    estimator, mirroring the analytic fidelity's error model.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    rng = np.random.default_rng(seed)
    n_erasure, n_success, n_error = _sample_counts(rng, trials, _probabilities(metrics))
    return McReport(
        trials=trials,
        n_erasure=n_erasure,
        n_success=n_success,
        n_error=n_error,
        trial_rate_hz=schedule.trial_rate_hz,
        seed=seed,
    )


def combine_reports(reports: list[McReport], seed: int) -> McReport:
    """Merge batch reports by summing counts (commutative and associative)."""
    if not reports:
        raise ValueError("cannot combine an empty list of reports")
    rate = reports[0].trial_rate_hz
    if any(r.trial_rate_hz != rate for r in reports):
        raise ValueError("cannot combine reports with different trial rates")
    return McReport(
        trials=sum(r.trials for r in reports),
        n_erasure=sum(r.n_erasure for r in reports),
        n_success=sum(r.n_success for r in reports),
        n_error=sum(r.n_error for r in reports),
        trial_rate_hz=rate,
        seed=seed,
    )


def run_batched(
    metrics: LinkMetrics,
    schedule: TrialSchedule,
    trials: int,
    seed: int,
    n_batches: int,
) -> McReport:
    """Run `trials` as `n_batches` independently seeded batches and merge.

    Sub-seeds are spawned deterministically from the root seed, so a serial
    loop and any concurrent execution of the same root seed yield identical
    merged counts.
    """
    if n_batches < 1:
        raise ValueError(f"n_batches must be at least 1, got {n_batches}")
    if trials < n_batches:
        raise ValueError("need at least one trial per batch")
    base, remainder = divmod(trials, n_batches)
    sizes = [base + (1 if i < remainder else 0) for i in range(n_batches)]
    probabilities = _probabilities(metrics)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    reports = []
    for size, child in zip(sizes, children):
        rng = np.random.default_rng(child)
        n_erasure, n_success, n_error = _sample_counts(rng, size, probabilities)
        reports.append(
            McReport(size, n_erasure, n_success, n_error, schedule.trial_rate_hz, seed)
        )
    return combine_reports(reports, seed=seed)


def time_to_load(
    metrics: LinkMetrics,
    schedule: TrialSchedule,
    pairs_needed: int,
    seed: int,
    replications: int = 100_000,
) -> LoadTimeStats:
    """Distribution of the time to load `pairs_needed` pairs sequentially.

    Models a lattice of memory atoms loaded one pair at a time: every trial,
    successful or not, consumes one trial period (an error's atom reset fits
    in the same period).  The trial count to the target is then negative
    binomial, and the mean time converges to pairs_needed / (R * P_success).
    """
    if pairs_needed < 1:
        raise ValueError(f"pairs_needed must be at least 1, got {pairs_needed}")
    if replications < 1:
        raise ValueError(f"replications must be at least 1, got {replications}")
    p_success = metrics.p_success
    if not p_success > 0.0:
        raise ValueError("time_to_load requires a positive success probability")
    rng = np.random.default_rng(seed)
    failures = rng.negative_binomial(pairs_needed, p_success, size=replications)
    durations = (failures + pairs_needed) * schedule.trial_period_s
    return LoadTimeStats(
        mean_s=float(np.mean(durations)),
        p50_s=float(np.percentile(durations, 50.0)),
        p95_s=float(np.percentile(durations, 95.0)),
        pairs_needed=pairs_needed,
        replications=replications,
        seed=seed,
    )
