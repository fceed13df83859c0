"""Command-line driver.

Subcommands:

* ``sweep``      run a parameter grid from a config with a sweep block,
                 emit the stats table as CSV;
* ``run``        run a single cascade, print a summary, optionally export
                 state snapshots at chosen steps;
* ``transition`` extract onset / upper-boundary crossings of the cascade
                 probability from an R sweep (optionally per threshold)
                 and fit the boundary scaling exponent.

Flags override config-file values. Exit codes: 0 success, 2 parse error,
3 infeasible experiment, 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace

from .cascade import run_cascade
from .config import describe_config, describe_sweep, parse_config
from .energy import account_cascade
from .errors import ConfigError, EstimationError, ExperimentInfeasibleError, NetwakeError
from .montecarlo import (
    ExperimentConfig,
    SweepSpec,
    estimate_onset_range,
    estimate_upper_boundary,
    fit_boundary_exponent,
    replicate_rng,
    run_replicates,
    sweep,
)
from .network import build_rgg
from .output import (
    RunManifest,
    emit_sweep_csv,
    emit_transition_csv,
    export_snapshot,
    snapshot_path,
    summarize_run,
)
from .smallworld import add_long_range_links
from .geometry import sample_points

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netwake", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, threads: bool):
        p.add_argument("--config", required=True, help="path to the config document")
        p.add_argument("--seed", type=int, default=None, help="master seed, overrides the config")
        p.add_argument("--out", default=None, help="output file path")
        if threads:
            p.add_argument("--threads", type=int, default=1,
                           help="worker processes; 0 means all cores (default 1)")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid and emit CSV")
    common(p_sweep, threads=True)

    p_run = sub.add_parser("run", help="run a single cascade")
    common(p_run, threads=False)
    p_run.add_argument("--snapshots", default=None,
                       help="comma list of step indices to export snapshots at")

    p_tr = sub.add_parser("transition", help="estimate cascade-window boundaries from an R sweep")
    common(p_tr, threads=True)
    return parser


def _load(path: str, seed_override: int | None):
    with open(path) as fh:
        parsed = parse_config(fh.read())
    if seed_override is not None:
        if seed_override < 0:
            raise ConfigError("--seed must be nonnegative")
        if isinstance(parsed, SweepSpec):
            parsed = replace(parsed, base=replace(parsed.base, master_seed=seed_override))
        else:
            parsed = replace(parsed, master_seed=seed_override)
    return parsed


def _n_jobs(threads: int) -> int:
    if threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ConfigError("--threads must be >= 0")
    return threads


def _cmd_sweep(args) -> int:
    spec = _load(args.config, args.seed)
    if not isinstance(spec, SweepSpec):
        raise ConfigError("the sweep subcommand needs a config with a sweep block")
    start = time.monotonic()
    rows = sweep(spec, n_jobs=_n_jobs(args.threads))
    for row in rows:
        if row.error:
            print(f"netwake: cell {spec.axis1.name}={row.axis1_value} flagged: {row.error}",
                  file=sys.stderr)
    manifest = RunManifest(
        config_echo=describe_sweep(spec),
        master_seed=spec.base.master_seed,
        duration_s=time.monotonic() - start,
        row_count=len(rows),
    )
    destination = args.out or "sweep.csv"
    emit_sweep_csv(rows, manifest, destination)
    print(f"wrote {len(rows)} rows to {destination}")
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = _load(args.config, args.seed)
    if isinstance(cfg, SweepSpec):
        raise ConfigError("the run subcommand needs a config without a sweep block")
    start = time.monotonic()
    rng = replicate_rng(cfg.master_seed, 0)
    points = sample_points(cfg.n_nodes, cfg.side, rng)
    net = build_rgg(points, cfg.radio_range, cfg.side, cfg.boundary)
    if cfg.scheme.p_r > 0:
        net = add_long_range_links(net, cfg.scheme, rng)
    outcome = run_cascade(net, cfg.cascade, rng)
    report = account_cascade(net, outcome, cfg.energy_model())
    print(summarize_run(outcome, report))

    if args.snapshots:
        try:
            steps = [int(s) for s in args.snapshots.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"--snapshots must be a comma list of integers, got {args.snapshots!r}")
        base = args.out or "snapshot.csv"
        for step in steps:
            manifest = RunManifest(
                config_echo=describe_config(cfg),
                master_seed=cfg.master_seed,
                duration_s=time.monotonic() - start,
                row_count=net.n_nodes,
            )
            path = snapshot_path(base, step)
            export_snapshot(net, outcome.active_at(step), step, path, manifest)
            print(f"wrote snapshot at step {step} to {path}")
    return EXIT_OK


def _cmd_transition(args) -> int:
    spec = _load(args.config, args.seed)
    if not isinstance(spec, SweepSpec):
        raise ConfigError("the transition subcommand needs a config with a sweep block")
    if spec.axis1.name != "R":
        raise ConfigError("transition estimation sweeps R on axis1")
    if spec.axis2 is not None and spec.axis2.name != "phi":
        raise ConfigError("transition estimation accepts only phi as axis2")

    start = time.monotonic()
    rows = sweep(spec, n_jobs=_n_jobs(args.threads))
    phis = list(spec.axis2.values) if spec.axis2 is not None else [spec.base.phi]
    rs = list(spec.axis1.values)

    table: list[tuple] = []
    boundaries: list[tuple[float, float]] = []
    for phi in phis:
        cells = rows if spec.axis2 is None else [r for r in rows if r.axis2_value == phi]
        ps = [r.stats.p_global if r.stats else float("nan") for r in cells]
        try:
            onset = estimate_onset_range(rs, ps)
        except EstimationError:
            onset = None
        try:
            upper = estimate_upper_boundary(rs, ps)
            boundaries.append((phi, upper))
        except EstimationError:
            upper = None
        table.append((phi, onset, upper))

    extra = {}
    if len(boundaries) >= 3:
        extra["boundary-exponent"] = repr(
            fit_boundary_exponent([b[0] for b in boundaries], [b[1] for b in boundaries])
        )
    manifest = RunManifest(
        config_echo=describe_sweep(spec),
        master_seed=spec.base.master_seed,
        duration_s=time.monotonic() - start,
        row_count=len(table),
        extra=extra,
    )
    destination = args.out or "transition.csv"
    emit_transition_csv(table, manifest, destination)
    print(f"wrote {len(table)} boundary rows to {destination}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_transition(args)
    except ConfigError as exc:
        print(f"netwake: config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ExperimentInfeasibleError as exc:
        print(f"netwake: infeasible experiment: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"netwake: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NetwakeError as exc:
        print(f"netwake: infeasible experiment: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
