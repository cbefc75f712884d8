"""Command-line entry point for the Monte Carlo beamforming experiments.

Exit codes: 0 on success, 2 on configuration errors, 3 on numeric failures.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .harness import (
    ConfigError,
    METHODS,
    SWEEP_AXES,
    SimConfig,
    run_experiment,
    sweep,
    sweep_to_csv,
    sweep_to_json,
    write_csv,
    write_json,
)
from .tensor_ops import NumericError

_PAPER_SCALE = {"n_tx": 64, "n_rx": 64, "n_rf": 4, "m_subcarriers": 1024, "trials": 1000}

_DEFAULT_SWEEP_VALUES = {
    "streams": [1, 2, 3, 4],
    "antennas": [16, 36, 64],
}


def _parse_list(text: str, cast):
    try:
        return [cast(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"could not parse list {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tuckerhbf",
        description=(
            "Average sum-rate Monte Carlo experiments for Tucker2 hybrid beamforming "
            "on OFDM mmWave channels. Writes one CSV/JSON row per (trial, method, SNR)."
        ),
    )
    p.add_argument("--nt", type=int, help="transmit antennas (perfect square, default 16)")
    p.add_argument("--nr", type=int, help="receive antennas (perfect square, default 16)")
    p.add_argument("--ns", type=int, help="data streams = RF chains per side (default 2)")
    p.add_argument("--m", type=int, help="OFDM subcarriers (default 64)")
    p.add_argument("--ncl", type=int, help="scattering clusters (default 5)")
    p.add_argument("--nray", type=int, help="rays per cluster (default 10)")
    p.add_argument("--spread-deg", type=float, help="angular spread in degrees (default 10)")
    p.add_argument("--spacing", type=float, help="element spacing over wavelength (default 0.5)")
    p.add_argument("--snr", type=str, help="comma list of SNR points in dB (default -10,-5,0,5,10)")
    p.add_argument("--trials", type=int, help="channel realizations (default 50)")
    p.add_argument("--seed", type=int, help="master seed, nonnegative 64-bit (default 1)")
    p.add_argument("--eps", type=float, help="squared-increment convergence threshold (default 1)")
    p.add_argument("--nite", type=int, help="max alternating iterations per stream (default 10)")
    p.add_argument("--methods", type=str, help=f"comma subset of {','.join(METHODS)} (default all)")
    p.add_argument("--sweep", choices=SWEEP_AXES, help="sweep one axis instead of a single run")
    p.add_argument("--sweep-values", type=str, help="comma list of values for the swept axis")
    p.add_argument("--out", type=str, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--workers", type=int, help="process pool size for trials (default 1)")
    p.add_argument("--timings", action="store_true",
                   help="fill design_ms/eval_ms columns (off by default: wall-clock values "
                        "would break byte-for-byte reproducibility)")
    p.add_argument("--paper-scale", action="store_true",
                   help="preset Nt=Nr=64, Ns=4, M=1024, 1000 trials (explicit flags override)")
    return p


def config_from_args(args) -> SimConfig:
    fields = {}
    if args.paper_scale:
        fields.update(_PAPER_SCALE)

    direct = {
        "n_tx": args.nt,
        "n_rx": args.nr,
        "n_rf": args.ns,
        "m_subcarriers": args.m,
        "n_clusters": args.ncl,
        "n_rays": args.nray,
        "angular_spread_deg": args.spread_deg,
        "spacing": args.spacing,
        "trials": args.trials,
        "seed": args.seed,
        "eps": args.eps,
        "n_ite": args.nite,
        "workers": args.workers,
    }
    fields.update({k: v for k, v in direct.items() if v is not None})

    if args.snr is not None:
        fields["snr_grid_db"] = tuple(_parse_list(args.snr, float))
    elif args.sweep in ("streams", "antennas"):
        fields["snr_grid_db"] = (0.0,)  # fixed operating point for those sweeps
    if args.methods is not None:
        fields["methods"] = tuple(_parse_list(args.methods, str))
    if args.timings:
        fields["timings"] = True
    return SimConfig(**fields)


def _sweep_values(args):
    if args.sweep_values is not None:
        cast = float if args.sweep == "snr" else int
        return _parse_list(args.sweep_values, cast)
    if args.sweep == "snr":
        return None  # resolved to the configured grid
    return list(_DEFAULT_SWEEP_VALUES[args.sweep])


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_summary(table, axis: str) -> None:
    print(f"# mean avg sum-rate (bits/s/Hz) by {axis}", file=sys.stderr)
    for row in table:
        print(
            f"#   {row['method']:<8} {axis}={row['value']:<8g} "
            f"mean={row['mean_rate']:.4f} se={row['stderr']:.4f} n={row['n']}",
            file=sys.stderr,
        )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.sweep:
            values = _sweep_values(args)
            if values is None:
                values = list(config.snr_grid_db)
            outcome = sweep(config, args.sweep, values)
            text = sweep_to_csv(outcome) if args.format == "csv" else sweep_to_json(outcome, config)
            _emit(text, args.out)
            _print_summary(outcome.table, outcome.axis)
        else:
            results = run_experiment(config)
            text = write_csv(results, config) if args.format == "csv" else write_json(results, config)
            _emit(text, args.out)
            means = {
                m: float(np.mean([rate for r in results for rate in r.rates[m]]))
                for m in config.methods
            }
            for m, v in means.items():
                print(f"# {m}: mean rate {v:.4f} bits/s/Hz over the SNR grid", file=sys.stderr)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
