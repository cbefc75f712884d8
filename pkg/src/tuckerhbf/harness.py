"""Monte Carlo experiment runner: configuration, trials, sweeps, persistence.

One trial draws a fresh channel realization from a per-trial child generator,
designs each enabled method's beamformers once (the designs do not depend on
the budget), and evaluates the average sum-rate at every SNR point. Trials are
independent and may run on a process pool; outputs are assembled in trial
order so the worker count never changes the result.

Seed derivation: the child seed of trial t is the first 64-bit word produced
by ``numpy.random.SeedSequence([master_seed, t])``. This is deterministic and
recorded in every output row.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import isqrt

import numpy as np

from .beamforming import design_hybrid
from .channel import ChannelParams, generate_channel
from .metrics import (
    LinkBudget,
    avg_cov_baseline,
    evaluate_hybrid,
    evaluate_rates,
    optimal_digital_beamformers,
)
from .tensor_ops import NumericError

METHODS = ("tucker", "optimal", "avgcov")

CSV_HEADER = (
    "trial,seed,method,snr_db,avg_sum_rate_bps_hz,"
    "als_mean_iters,als_converged_frac,design_ms,eval_ms"
)


class ConfigError(ValueError):
    """Invalid simulation configuration (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class SimConfig:
    """Full description of one experiment; (config, seed) determines all outputs."""

    n_tx: int = 16
    n_rx: int = 16
    n_rf: int = 2  # RF chains per side; the per-subcarrier stream count equals this
    m_subcarriers: int = 64
    n_clusters: int = 5
    n_rays: int = 10
    angular_spread_deg: float = 10.0
    spacing: float = 0.5
    snr_grid_db: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0)
    trials: int = 50
    seed: int = 1
    eps: float = 1.0
    n_ite: int = 10
    methods: tuple = METHODS
    workers: int = 1
    timings: bool = False

    @property
    def n_s(self) -> int:
        return self.n_rf

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            n_tx=self.n_tx,
            n_rx=self.n_rx,
            n_subcarriers=self.m_subcarriers,
            n_clusters=self.n_clusters,
            n_rays=self.n_rays,
            angular_spread_deg=self.angular_spread_deg,
            spacing=self.spacing,
        )

    def validate(self) -> None:
        try:
            self.channel_params()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.n_rf < 1:
            raise ConfigError("n_rf must be >= 1")
        if self.n_s > min(self.n_tx, self.n_rx):
            raise ConfigError(
                f"n_s={self.n_s} exceeds min(n_tx, n_rx)={min(self.n_tx, self.n_rx)}"
            )
        if len(self.snr_grid_db) == 0:
            raise ConfigError("snr grid must be nonempty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative 64-bit integer")
        if self.eps <= 0:
            raise ConfigError("eps must be positive")
        if self.n_ite < 1:
            raise ConfigError("n_ite must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")


@dataclass
class TrialResult:
    """Rates and design diagnostics of one channel realization."""

    trial: int
    seed: int
    rates: dict  # method -> list of average sum-rates aligned with the SNR grid
    als_iterations: list | None = None  # tucker only, one entry per stream
    als_converged: list | None = None
    timings_ms: dict = field(default_factory=dict)  # method -> (design_ms, eval_ms)


def seed_for_trial(master_seed: int, trial: int) -> int:
    """Stable child seed: first word of SeedSequence([master_seed, trial])."""
    return int(np.random.SeedSequence([master_seed, trial]).generate_state(1, np.uint64)[0])


def _enabled_methods(config: SimConfig):
    return [m for m in METHODS if m in config.methods]


def _run_trial(config: SimConfig, trial: int) -> TrialResult:
    child = seed_for_trial(config.seed, trial)
    rng = np.random.default_rng(child)
    h = generate_channel(config.channel_params(), rng)
    budgets = [LinkBudget.from_snr_db(s) for s in config.snr_grid_db]

    result = TrialResult(trial=trial, seed=child, rates={})
    for method in _enabled_methods(config):
        t0 = time.perf_counter()
        if method == "tucker":
            bf, report = design_hybrid(h, config.n_s, config.eps, config.n_ite, rng)
            t1 = time.perf_counter()
            vals = [evaluate_hybrid(h, bf, b).average for b in budgets]
            result.als_iterations = list(report.iterations)
            result.als_converged = list(report.converged)
        elif method == "optimal":
            f, w = optimal_digital_beamformers(h, config.n_s)
            t1 = time.perf_counter()
            vals = [evaluate_rates(h, f, w, b, config.n_s).average for b in budgets]
        else:  # avgcov
            bf, first = avg_cov_baseline(h, config.n_s, budgets[0])
            t1 = time.perf_counter()
            vals = [first.average]
            vals += [evaluate_hybrid(h, bf, b).average for b in budgets[1:]]
        t2 = time.perf_counter()
        if not all(np.isfinite(vals)):
            raise NumericError(f"non-finite rate in trial {trial}, method {method}")
        result.rates[method] = [float(v) for v in vals]
        result.timings_ms[method] = ((t1 - t0) * 1e3, (t2 - t1) * 1e3)
    return result


def run_experiment(config: SimConfig) -> list:
    """Run all trials; returns TrialResults sorted by trial id."""
    config.validate()
    if config.workers == 1:
        results = [_run_trial(config, t) for t in range(config.trials)]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_trial, config, t) for t in range(config.trials)]
            results = [f.result() for f in futures]
    results.sort(key=lambda r: r.trial)
    return results


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def result_rows(results, config: SimConfig):
    """Flatten TrialResults into per-(trial, method, snr) row dicts."""
    rows = []
    for res in results:
        for method in _enabled_methods(config):
            if method == "tucker" and res.als_iterations:
                mean_iters = float(np.mean(res.als_iterations))
                conv_frac = float(np.mean(res.als_converged))
            else:
                mean_iters = conv_frac = None
            design_ms, eval_ms = (
                res.timings_ms.get(method, (None, None)) if config.timings else (None, None)
            )
            for j, snr in enumerate(config.snr_grid_db):
                rows.append(
                    {
                        "trial": res.trial,
                        "seed": res.seed,
                        "method": method,
                        "snr_db": float(snr),
                        "avg_sum_rate_bps_hz": res.rates[method][j],
                        "als_mean_iters": mean_iters,
                        "als_converged_frac": conv_frac,
                        "design_ms": design_ms,
                        "eval_ms": eval_ms,
                    }
                )
    return rows


def rows_to_csv(rows, extra_column: str | None = None) -> str:
    """Render row dicts to the delimited schema (plus an optional sweep column)."""
    header = CSV_HEADER + (f",{extra_column}" if extra_column else "")
    lines = [header]
    base_fields = CSV_HEADER.split(",")
    for row in rows:
        cells = [_fmt(row[k]) for k in base_fields]
        if extra_column:
            cells.append(_fmt(row[extra_column]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(results, config: SimConfig) -> str:
    return rows_to_csv(result_rows(results, config))


def to_json_payload(results, config: SimConfig, sweep_info: dict | None = None) -> dict:
    payload = {"config": asdict(config), "results": result_rows(results, config)}
    if sweep_info:
        payload["sweep"] = sweep_info
    return payload


def write_json(results, config: SimConfig) -> str:
    return json.dumps(to_json_payload(results, config), indent=2) + "\n"


SWEEP_AXES = ("snr", "streams", "antennas")
_SWEEP_COLUMNS = {"snr": None, "streams": "n_s", "antennas": "n_antennas"}


@dataclass
class SweepOutcome:
    """Per-value runs plus the aggregated (method, value) summary table."""

    axis: str
    column: str | None  # extra CSV column, None when the axis is the SNR grid itself
    values: list
    runs: list  # (value, SimConfig, list[TrialResult]) per axis value
    table: list  # dicts: method, value, mean_rate, stderr, n


def _config_for_value(config: SimConfig, axis: str, value) -> SimConfig:
    if axis == "snr":
        return replace(config, snr_grid_db=(float(value),))
    if axis == "streams":
        v = int(value)
        if v != value or v < 1:
            raise ConfigError(f"invalid streams sweep value: {value!r}")
        return replace(config, n_rf=v)
    if axis == "antennas":
        v = int(value)
        if v != value or v < 1 or isqrt(v) ** 2 != v:
            raise ConfigError(f"invalid antennas sweep value (perfect square required): {value!r}")
        return replace(config, n_tx=v, n_rx=v)
    raise ConfigError(f"unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")


def sweep(config: SimConfig, axis: str, values) -> SweepOutcome:
    """Run one experiment per axis value and aggregate mean rates per method."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")
    values = list(values)
    if not values:
        raise ConfigError("sweep values must be nonempty")
    configs = [_config_for_value(config, axis, v) for v in values]
    for cfg in configs:
        cfg.validate()

    runs = []
    table = []
    for value, cfg in zip(values, configs):
        results = run_experiment(cfg)
        runs.append((value, cfg, results))
        for method in _enabled_methods(cfg):
            samples = np.asarray([r for res in results for r in res.rates[method]])
            stderr = float(samples.std(ddof=1) / np.sqrt(samples.size)) if samples.size > 1 else 0.0
            table.append(
                {
                    "method": method,
                    "value": value,
                    "mean_rate": float(samples.mean()),
                    "stderr": stderr,
                    "n": int(samples.size),
                }
            )
    return SweepOutcome(
        axis=axis, column=_SWEEP_COLUMNS[axis], values=values, runs=runs, table=table
    )


def sweep_rows(outcome: SweepOutcome):
    """Per-trial rows of every sweep run, tagged with the axis value."""
    rows = []
    for value, cfg, results in outcome.runs:
        block = result_rows(results, cfg)
        if outcome.column:
            for row in block:
                row[outcome.column] = value
        rows.extend(block)
    return rows


def sweep_to_csv(outcome: SweepOutcome) -> str:
    return rows_to_csv(sweep_rows(outcome), extra_column=outcome.column)


def sweep_to_json(outcome: SweepOutcome, config: SimConfig) -> str:
    payload = {
        "config": asdict(config),
        "sweep": {"axis": outcome.axis, "values": list(outcome.values), "table": outcome.table},
        "results": sweep_rows(outcome),
    }
    return json.dumps(payload, indent=2) + "\n"
