"""Replicated cascade experiments, parameter sweeps and boundary fits.

Every replicate draws a fresh topology and fresh seed nodes from its own
random stream, derived deterministically from (master_seed, replicate
index), so a configuration pins down every number exactly regardless of
execution order or worker count. Sweep cells likewise derive their seeds
from the swept parameter values, not grid position: swapping axes
permutes rows without changing any cell.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .cascade import CascadeParams, run_cascade
from .energy import EnergyModel, account_cascade
from .errors import EstimationError, ExperimentInfeasibleError, LinkSamplingError, SeedingError
from .geometry import BoundaryMode, sample_points
from .network import build_rgg
from .smallworld import LinkScheme, SchemeKind, add_long_range_links

#: Parameter names accepted as sweep axes, mapped onto config fields below.
SWEEPABLE = ("phi", "R", "p_r", "d_c", "delta", "n_nodes")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one replicated experiment needs, defaults matching the
    reference setup (10^4 nodes on a 10^3-sided torus, coefficient 1)."""

    phi: float
    radio_range: float
    n_nodes: int = 10_000
    side: float = 1000.0
    boundary: BoundaryMode = BoundaryMode.TORUS
    scheme: LinkScheme = field(default_factory=LinkScheme.none)
    cascade: CascadeParams | None = None
    coefficient: float = 1.0
    n_runs: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError(f"need at least one node, got {self.n_nodes}")
        if self.n_runs < 1:
            raise ValueError(f"need at least one run, got {self.n_runs}")
        if self.radio_range < 0:
            raise ValueError(f"radio range must be nonnegative, got {self.radio_range}")
        if self.cascade is None:
            object.__setattr__(self, "cascade", CascadeParams(phi=self.phi))
        elif self.cascade.phi != self.phi:
            object.__setattr__(self, "cascade", replace(self.cascade, phi=self.phi))

    def energy_model(self) -> EnergyModel:
        return EnergyModel(self.coefficient, self.radio_range)


@dataclass
class ReplicateStats:
    """Aggregates over one experiment's replicates.

    Success means a global cascade that terminated within the step budget.
    Time/energy means cover successful runs only and are None when there
    were none. mean_link_length is the across-replicate mean of each
    network's mean long-link length (None when the scheme adds no links).
    """

    p_global: float
    p_global_se: float
    mean_time: float | None
    mean_time_se: float | None
    mean_energy: float | None
    mean_energy_se: float | None
    mean_final_fraction: float
    mean_link_length: float | None
    n_success: int
    n_runs: int
    n_infeasible: int


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: its name and a strictly increasing value grid."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in SWEEPABLE:
            raise ValueError(f"cannot sweep {self.name!r}; choose from {SWEEPABLE}")
        if not self.values:
            raise ValueError(f"axis {self.name!r} has an empty grid")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"axis {self.name!r} grid must be strictly increasing")


@dataclass(frozen=True)
class SweepSpec:
    """A 1D or 2D grid of experiments around a base configuration."""

    base: ExperimentConfig
    axis1: SweepAxis
    axis2: SweepAxis | None = None


@dataclass
class SweepRow:
    """One grid cell: swept values plus its stats, or an error message."""

    axis1_value: float
    axis2_value: float | None
    stats: ReplicateStats | None
    error: str | None = None


def replicate_rng(master_seed: int, index: int) -> np.random.Generator:
    """The random stream owned by replicate ``index`` of an experiment."""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=(index,)))


def _apply_parameter(cfg: ExperimentConfig, name: str, value: float) -> ExperimentConfig:
    if name == "phi":
        return replace(cfg, phi=float(value))
    if name == "R":
        return replace(cfg, radio_range=float(value))
    if name == "n_nodes":
        return replace(cfg, n_nodes=int(value))
    scheme = cfg.scheme
    if name == "p_r":
        return replace(cfg, scheme=replace(scheme, p_r=float(value)))
    if name == "d_c":
        if scheme.kind is not SchemeKind.CUTOFF:
            raise ValueError(f"cannot sweep d_c under the {scheme.kind.value} scheme")
        return replace(cfg, scheme=replace(scheme, d_c=float(value)))
    if name == "delta":
        if scheme.kind is not SchemeKind.POWER_LAW:
            raise ValueError(f"cannot sweep delta under the {scheme.kind.value} scheme")
        return replace(cfg, scheme=replace(scheme, delta=float(value)))
    raise ValueError(f"unknown sweep parameter {name!r}")


def cell_config(base: ExperimentConfig, overrides: dict[str, float]) -> ExperimentConfig:
    """Config for one sweep cell: overrides applied, master seed derived.

    The derived seed depends only on the base seed and the override
    name/value pairs (sorted by name), never on grid position.
    """
    cfg = base
    for name in sorted(overrides):
        cfg = _apply_parameter(cfg, name, overrides[name])
    canonical = ";".join(f"{name}={float(overrides[name])!r}" for name in sorted(overrides))
    digest = hashlib.sha256(f"{base.master_seed}|{canonical}".encode()).digest()
    return replace(cfg, master_seed=int.from_bytes(digest[:8], "big"))


def _run_one(cfg: ExperimentConfig, index: int) -> tuple[bool, float, int, float, float | None, bool]:
    """One replicate: (success, final_fraction, time, energy, d_bar, infeasible)."""
    rng = replicate_rng(cfg.master_seed, index)
    points = sample_points(cfg.n_nodes, cfg.side, rng)
    net = build_rgg(points, cfg.radio_range, cfg.side, cfg.boundary)
    try:
        if cfg.scheme.p_r > 0:
            net = add_long_range_links(net, cfg.scheme, rng)
        outcome = run_cascade(net, cfg.cascade, rng)
    except (SeedingError, LinkSamplingError):
        return False, 0.0, 0, 0.0, None, True
    report = account_cascade(net, outcome, cfg.energy_model())
    d_bar = float(net.long_length.mean()) if net.n_long_edges else None
    success = outcome.is_global and not outcome.stalled
    return success, outcome.final_fraction, outcome.time, report.total_energy, d_bar, False


def _run_chunk(cfg: ExperimentConfig, start: int, stop: int) -> list[tuple]:
    return [_run_one(cfg, i) for i in range(start, stop)]


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, se


def run_replicates(cfg: ExperimentConfig, n_jobs: int = 1) -> ReplicateStats:
    """Run cfg.n_runs independent replicates and aggregate.

    Results are identical for any n_jobs: replicate i always uses the
    stream derived from (master_seed, i), and aggregation is over the
    ordered result list.
    """
    n = cfg.n_runs
    if n_jobs > 1 and n > 1:
        workers = min(n_jobs, n)
        chunk = math.ceil(n / workers)
        bounds = [(i, min(i + chunk, n)) for i in range(0, n, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_chunk, *zip(*[(cfg, a, b) for a, b in bounds])))
        results = [r for part in chunks for r in part]
    else:
        results = _run_chunk(cfg, 0, n)
    return _aggregate(results)


def _aggregate(results: list[tuple]) -> ReplicateStats:
    n = len(results)
    successes = [r for r in results if r[0]]
    n_success = len(successes)
    n_infeasible = sum(1 for r in results if r[5])
    if n_infeasible == n:
        raise ExperimentInfeasibleError(
            "every replicate failed before the cascade could start", n_infeasible
        )

    p = n_success / n
    p_se = math.sqrt(p * (1.0 - p) / n)
    fractions = np.array([r[1] for r in results])
    d_bars = np.array([r[4] for r in results if r[4] is not None], dtype=float)

    if n_success:
        mean_time, time_se = _mean_se(np.array([r[2] for r in successes], dtype=float))
        mean_energy, energy_se = _mean_se(np.array([r[3] for r in successes], dtype=float))
    else:
        mean_time = time_se = mean_energy = energy_se = None

    return ReplicateStats(
        p_global=p,
        p_global_se=p_se,
        mean_time=mean_time,
        mean_time_se=time_se,
        mean_energy=mean_energy,
        mean_energy_se=energy_se,
        mean_final_fraction=float(fractions.mean()),
        mean_link_length=float(d_bars.mean()) if d_bars.size else None,
        n_success=n_success,
        n_runs=n,
        n_infeasible=n_infeasible,
    )


def sweep(spec: SweepSpec, n_jobs: int = 1) -> list[SweepRow]:
    """Run one experiment per grid cell, rows in row-major grid order.

    Per-cell failures become flagged rows (stats=None, error set); they
    never abort the rest of the grid.
    """
    cells: list[dict[str, float]] = []
    for v1 in spec.axis1.values:
        if spec.axis2 is None:
            cells.append({spec.axis1.name: v1})
        else:
            for v2 in spec.axis2.values:
                cells.append({spec.axis1.name: v1, spec.axis2.name: v2})

    rows: list[SweepRow] = []
    for overrides in cells:
        v1 = overrides[spec.axis1.name]
        v2 = overrides[spec.axis2.name] if spec.axis2 is not None else None
        try:
            stats = run_replicates(cell_config(spec.base, overrides), n_jobs=n_jobs)
            rows.append(SweepRow(axis1_value=v1, axis2_value=v2, stats=stats))
        except (ExperimentInfeasibleError, ValueError) as exc:
            rows.append(SweepRow(axis1_value=v1, axis2_value=v2, stats=None, error=str(exc)))
    return rows


def estimate_onset_range(r_values, p_values, level: float = 0.5) -> float:
    """Range at which the cascade probability first rises through ``level``.

    Linear interpolation between the bracketing grid points.
    """
    r = np.asarray(r_values, dtype=float)
    p = np.asarray(p_values, dtype=float)
    for i in range(r.size - 1):
        if p[i] < level <= p[i + 1]:
            return float(r[i] + (level - p[i]) * (r[i + 1] - r[i]) / (p[i + 1] - p[i]))
    raise EstimationError(f"cascade probability never rises through {level} on this grid")


def estimate_upper_boundary(r_values, p_values, level: float = 0.5) -> float:
    """Largest range still supporting cascades: the final descending
    crossing of ``level``, linearly interpolated."""
    r = np.asarray(r_values, dtype=float)
    p = np.asarray(p_values, dtype=float)
    for i in range(r.size - 2, -1, -1):
        if p[i] >= level > p[i + 1]:
            return float(r[i] + (p[i] - level) * (r[i + 1] - r[i]) / (p[i] - p[i + 1]))
    raise EstimationError(f"cascade probability never falls through {level} on this grid")


def fit_boundary_exponent(phis, boundary_ranges) -> float:
    """Least-squares slope of log(boundary range) against log(threshold).

    The upper cascade boundary shrinks roughly as a power of the
    threshold; the returned slope is that exponent (about -0.5).
    """
    phis = np.asarray(phis, dtype=float)
    ranges = np.asarray(boundary_ranges, dtype=float)
    if phis.size < 3:
        raise EstimationError(f"need at least 3 boundary points to fit, got {phis.size}")
    slope, _ = np.polyfit(np.log(phis), np.log(ranges), 1)
    return float(slope)
