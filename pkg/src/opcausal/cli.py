"""Command-line frontend: simulate | infer | sweep | windowed.

Series travel as CSV (header row of channel names, one row per sample,
17 significant digits for exact round-trips); ground truth and networks as
JSON. Every run writes a manifest with the full configuration and seed.
Flag values override config-file values, which override defaults. The
OPCAUSAL_THREADS environment variable sets the default worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .causal import CausalNetwork, infer_network
from .entropy import DelayGrid
from .errors import OpcausalError
from .evaluate import sweep, windowed_analysis
from .ordinal import EmbeddingParams, MultivariateSeries
from .simulate import (
    GroundTruth,
    NmmConfig,
    add_observation_noise,
    reproduction_nmm_config,
    simulate_ar,
    simulate_lorenz_chain,
    simulate_nmm,
)

DEFAULTS = {
    "M": 3,
    "d": 100,
    "lambda": 0.995,
    "delta": 0.15,
    "r_max": 3,
    "delays": "1-10",
}


def write_series_csv(series: MultivariateSeries, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(series.channel_names)
        for row in series.data:
            writer.writerow([f"{v:.17g}" for v in row])


def read_series_csv(path: str | Path, sample_rate: float | None = None) -> MultivariateSeries:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise OpcausalError(f"{path}: empty file") from None
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise OpcausalError(
                    f"{path}: row {line_no} has {len(row)} fields, expected {len(header)}"
                )
            parsed = []
            for col, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise OpcausalError(
                        f"{path}: non-numeric value {cell!r} at row {line_no}, "
                        f"column {col + 1} ({header[col]})"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise OpcausalError(f"{path}: no data rows")
    return MultivariateSeries(
        data=np.array(rows), sample_rate=sample_rate, channel_names=header
    )


def write_truth_json(truth: GroundTruth, path: str | Path) -> None:
    payload = {
        "description": truth.description,
        "edges": [
            {"source": s, "target": t, "delay_samples": d} for s, t, d in truth.edges
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_truth_json(path: str | Path) -> GroundTruth:
    with open(path) as fh:
        payload = json.load(fh)
    return GroundTruth(
        edges=[(e["source"], e["target"], e["delay_samples"]) for e in payload["edges"]],
        description=payload.get("description", ""),
    )


def write_network_json(
    network: CausalNetwork, path: str | Path, sample_rate: float | None = None
) -> None:
    edges = []
    for e in network.edges:
        entry = {
            "source": e.source,
            "target": e.target,
            "delay_samples": e.delay,
            "ce_bits": e.ce,
            "strength_bits": e.strength,
        }
        if sample_rate:
            entry["delay_ms"] = e.delay * 1000.0 / sample_rate
        edges.append(entry)
    payload = {"edges": edges, "params": network.params, "h_max_bits": network.h_max}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_manifest(path: str | Path, config: dict) -> None:
    payload = dict(config)
    payload["tool_version"] = __version__
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def parse_delays(spec: str, sample_rate: float | None, in_ms: bool) -> DelayGrid:
    """Parse 'a-b[:step]' or a comma list, optionally in milliseconds."""
    spec = spec.strip()
    if "-" in spec and not spec.startswith("-"):
        body, _, step_s = spec.partition(":")
        lo_s, _, hi_s = body.partition("-")
        step = float(step_s) if step_s else 1.0
        values = list(np.arange(float(lo_s), float(hi_s) + step / 2, step))
    else:
        values = [float(v) for v in spec.split(",")]
    if in_ms:
        if not sample_rate:
            raise OpcausalError("delays in ms require --sample-rate")
        values = [v * sample_rate / 1000.0 for v in values]
    samples = [int(round(v)) for v in values]
    if any(abs(s - v) > 1e-9 for s, v in zip(samples, values)):
        raise OpcausalError(f"delay specification {spec!r} does not map to whole samples")
    return DelayGrid(samples)


def _merge_config(args: argparse.Namespace, keys: list[str]) -> dict:
    """flags > config file > defaults."""
    merged = {k: DEFAULTS.get(k) for k in keys}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for k in keys:
            if k in file_cfg:
                merged[k] = file_cfg[k]
    for k in keys:
        attr = "lambda_" if k == "lambda" else k.replace("-", "_")
        flag = getattr(args, attr, None)
        if flag is not None:
            merged[k] = flag
    return merged


def _parse_list(spec: str, cast=float) -> list:
    return [cast(v) for v in str(spec).split(",")]


def cmd_simulate(args) -> int:
    out = Path(args.out)
    seed = args.seed
    if args.system == "ar":
        series, truth = simulate_ar(args.T, seed)
    elif args.system == "lorenz":
        series, truth = simulate_lorenz_chain(args.T, c=args.c, seed=seed)
    elif args.system == "nmm":
        cfg = NmmConfig.from_json(args.nmm_config) if args.nmm_config else reproduction_nmm_config()
        series, truth = simulate_nmm(cfg, args.K, args.T, seed)
    else:
        raise OpcausalError(f"unknown system {args.system!r}")
    if args.noise_level:
        series = add_observation_noise(series, args.noise_level, seed + 1)
    write_series_csv(series, out.with_suffix(".csv"))
    write_truth_json(truth, out.with_suffix(".truth.json"))
    write_manifest(
        out.with_suffix(".manifest.json"),
        {
            "command": "simulate",
            "system": args.system,
            "T": args.T,
            "seed": seed,
            "c": args.c,
            "K": args.K,
            "noise_level": args.noise_level,
            "nmm_config": args.nmm_config,
            "sample_rate": series.sample_rate,
        },
    )
    print(f"seed: {seed}")
    print(f"wrote {out.with_suffix('.csv')} and {out.with_suffix('.truth.json')}")
    return 0


def cmd_infer(args) -> int:
    cfg = _merge_config(args, ["M", "d", "lambda", "delta", "r_max", "delays"])
    series = read_series_csv(args.input, sample_rate=args.sample_rate)
    delays = parse_delays(str(cfg["delays"]), args.sample_rate, args.delays_in_ms)
    network = infer_network(
        series,
        EmbeddingParams(m=int(cfg["M"]), d=int(cfg["d"])),
        delays,
        lam=float(cfg["lambda"]),
        delta=float(cfg["delta"]),
        r_max=int(cfg["r_max"]),
    )
    write_network_json(network, args.out, sample_rate=args.sample_rate)
    write_manifest(
        Path(args.out).with_suffix(".manifest.json"),
        {"command": "infer", "input": str(args.input), **cfg, "sample_rate": args.sample_rate},
    )
    print(f"{len(network.edges)} edges -> {args.out}")
    return 0


SWEEP_CSV_COLUMNS = [
    "system",
    "T",
    "NL",
    "lambda",
    "delta",
    "K",
    "realization_count",
    "tpr_mean",
    "tpr_std",
    "fpr_mean",
    "fpr_std",
    "f1_mean",
    "f1_std",
]


def cmd_sweep(args) -> int:
    grid: dict[str, list] = {}
    if args.delta:
        grid["delta"] = _parse_list(args.delta)
    if args.T:
        grid["T"] = _parse_list(args.T, int)
    if args.NL:
        grid["NL"] = _parse_list(args.NL)
    if args.lambda_:
        grid["lambda"] = _parse_list(args.lambda_)
    if args.K:
        grid["K"] = _parse_list(args.K)
    if not grid:
        raise OpcausalError("sweep needs at least one axis (--delta/--T/--NL/--lambda/--K)")
    nmm_config = None
    if args.system == "nmm":
        nmm_config = NmmConfig.from_json(args.nmm_config) if args.nmm_config else reproduction_nmm_config()
    result = sweep(
        args.system,
        grid,
        n_realizations=args.R,
        base_seed=args.seed,
        nmm_config=nmm_config,
        max_workers=args.threads,
    )
    out = Path(args.out)
    with open(out.with_suffix(".csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_COLUMNS)
        for cell in result.cells:
            p = cell.params
            writer.writerow(
                [
                    result.system,
                    p.get("T", ""),
                    p.get("NL", ""),
                    p.get("lambda", ""),
                    p.get("delta", ""),
                    p.get("K", ""),
                    cell.n_realizations,
                    *(
                        "" if v is None else f"{v:.6f}"
                        for v in (
                            cell.tpr_mean,
                            cell.tpr_std,
                            cell.fpr_mean,
                            cell.fpr_std,
                            cell.f1_mean,
                            cell.f1_std,
                        )
                    ),
                ]
            )
    with open(out.with_suffix(".json"), "w") as fh:
        json.dump(
            {
                "system": result.system,
                "base_seed": result.base_seed,
                "cells": [vars(c) for c in result.cells],
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    write_manifest(
        out.with_suffix(".manifest.json"),
        {"command": "sweep", "system": args.system, "grid": grid, "R": args.R, "seed": args.seed},
    )
    print(f"{len(result.cells)} cells -> {out.with_suffix('.csv')}")
    return 0


def cmd_windowed(args) -> int:
    cfg = _merge_config(args, ["M", "d", "lambda", "delta", "r_max", "delays"])
    series = read_series_csv(args.input, sample_rate=args.sample_rate)
    delays = parse_delays(str(cfg["delays"]), args.sample_rate, args.delays_in_ms)
    result = windowed_analysis(
        series,
        window_s=args.window_s,
        overlap=args.overlap,
        params=EmbeddingParams(m=int(cfg["M"]), d=int(cfg["d"])),
        delays=delays,
        lam=float(cfg["lambda"]),
        delta=float(cfg["delta"]),
        r_max=int(cfg["r_max"]),
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["window_mid_s", "source", "target", "delay_ms", "strength_normalized"])
        for e in result.entries:
            writer.writerow(
                [
                    f"{e.window_mid_s:.6f}",
                    series.channel_names[e.source],
                    series.channel_names[e.target],
                    f"{e.delay * 1000.0 / args.sample_rate:.6f}",
                    f"{e.strength:.6f}",
                ]
            )
    write_manifest(
        Path(args.out).with_suffix(".manifest.json"),
        {
            "command": "windowed",
            "input": str(args.input),
            "window_s": args.window_s,
            "overlap": args.overlap,
            "sample_rate": args.sample_rate,
            **cfg,
        },
    )
    print(f"{len(result.entries)} window entries -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opcausal",
        description="Delayed causal network inference from multivariate time series "
        "via ordinal-pattern conditional entropies.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    default_threads = int(os.environ.get("OPCAUSAL_THREADS", "1"))

    p_sim = sub.add_parser("simulate", help="generate a benchmark series + ground truth")
    p_sim.add_argument("--system", required=True, choices=["ar", "lorenz", "nmm"])
    p_sim.add_argument("--T", type=int, default=10_000, help="samples to keep")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--c", type=float, default=0.6, help="Lorenz coupling strength")
    p_sim.add_argument("--K", type=float, default=5.0, help="nmm connection density, percent")
    p_sim.add_argument("--noise-level", type=float, default=0.0)
    p_sim.add_argument("--nmm-config", help="JSON file of neural-mass parameters")
    p_sim.add_argument("--out", required=True, help="output path prefix")
    p_sim.set_defaults(func=cmd_simulate)

    def add_pipeline_flags(p):
        p.add_argument("--config", help="JSON config file (flags take precedence)")
        p.add_argument("--M", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--lambda", dest="lambda_", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--r-max", dest="r_max", type=int)
        p.add_argument("--delays", help="'a-b[:step]' or comma list")
        p.add_argument("--delays-in-ms", action="store_true")
        p.add_argument("--sample-rate", type=float)

    p_inf = sub.add_parser("infer", help="infer a causal network from a series CSV")
    p_inf.add_argument("--input", required=True)
    p_inf.add_argument("--out", required=True)
    add_pipeline_flags(p_inf)
    p_inf.set_defaults(func=cmd_infer)

    p_sweep = sub.add_parser("sweep", help="TPR/FPR/F1 over a parameter grid")
    p_sweep.add_argument("--system", required=True, choices=["ar", "lorenz", "nmm"])
    p_sweep.add_argument("--delta", help="comma list")
    p_sweep.add_argument("--T", help="comma list")
    p_sweep.add_argument("--NL", help="comma list")
    p_sweep.add_argument("--lambda", dest="lambda_", help="comma list")
    p_sweep.add_argument("--K", help="comma list")
    p_sweep.add_argument("--R", type=int, default=10, help="realizations per cell")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--threads", type=int, default=default_threads)
    p_sweep.add_argument("--nmm-config")
    p_sweep.add_argument("--out", required=True, help="output path prefix")
    p_sweep.set_defaults(func=cmd_sweep)

    p_win = sub.add_parser("windowed", help="time-varying coupling over sliding windows")
    p_win.add_argument("--input", required=True)
    p_win.add_argument("--window-s", type=float, default=4.0)
    p_win.add_argument("--overlap", type=float, default=0.5)
    p_win.add_argument("--out", required=True)
    add_pipeline_flags(p_win)
    p_win.set_defaults(func=cmd_windowed)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OpcausalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
