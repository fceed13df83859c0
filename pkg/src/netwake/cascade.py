"""Threshold-controlled activation dynamics.

Nodes are binary (inactive/active) and activation is permanent. An
inactive node turns active when the fraction of its active neighbors
reaches the threshold phi; it also needs at least one active neighbor,
so an untouched node never self-ignites (at phi=0 the rule degenerates
to plain flooding). Neighbors means all neighbors, local and long-range
alike.

Two schedules are supported. Synchronous: every node evaluates against
the previous step's active set and all activations land at once.
Asynchronous: one time step is a full sweep over a fresh random
permutation of the nodes, with activations visible immediately within
the sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import SeedingError
from .network import Network, concat_ranges

NEVER = -1  # activation_time value for nodes that never turned on


class Schedule(Enum):
    SYNCHRONOUS = "synchronous"
    ASYNCHRONOUS = "asynchronous"

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        key = text.strip().lower()
        for sched in cls:
            if sched.value.startswith(key) and key:
                return sched
        raise ValueError(f"unknown schedule {text!r}; expected 'synchronous' or 'asynchronous'")


class SeedRule(Enum):
    SINGLE = "single"
    TRIPLE = "triple"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class SeedSpec:
    """Which nodes get switched on at t=0."""

    rule: SeedRule
    nodes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rule is SeedRule.EXPLICIT and not self.nodes:
            raise ValueError("explicit seed spec needs at least one node id")
        if self.rule is not SeedRule.EXPLICIT and self.nodes:
            raise ValueError(f"{self.rule.value} seed spec takes no node ids")

    @classmethod
    def single(cls) -> "SeedSpec":
        return cls(SeedRule.SINGLE)

    @classmethod
    def triple(cls) -> "SeedSpec":
        return cls(SeedRule.TRIPLE)

    @classmethod
    def explicit(cls, nodes) -> "SeedSpec":
        return cls(SeedRule.EXPLICIT, tuple(int(v) for v in nodes))


@dataclass(frozen=True)
class CascadeParams:
    """Threshold, schedule, seeding and stopping rules for one run."""

    phi: float
    schedule: Schedule = Schedule.SYNCHRONOUS
    seed_spec: SeedSpec = field(default_factory=SeedSpec.single)
    cutoff_fraction: float = 0.85
    max_steps: int | None = None  # None resolves to 10 * n_nodes at run time

    def __post_init__(self):
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"threshold phi must be in [0, 1], got {self.phi}")
        if not 0.0 < self.cutoff_fraction <= 1.0:
            raise ValueError(f"cutoff fraction must be in (0, 1], got {self.cutoff_fraction}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass
class CascadeState:
    """Activation state after t whole steps.

    ``active_neighbor_counts[i]`` caches the number of active neighbors of
    node i for the full active set; the step functions keep it in sync.
    """

    active: np.ndarray
    t: int
    newly_activated: np.ndarray
    active_neighbor_counts: np.ndarray


@dataclass
class CascadeOutcome:
    """Result of a completed run."""

    final_fraction: float
    time: int
    is_global: bool
    stalled: bool
    activation_time: np.ndarray  # per-node step index, NEVER if still inactive
    seed: np.ndarray

    def active_at(self, t: int) -> np.ndarray:
        """Boolean active mask as of step t (seeds are active at t=0)."""
        return (self.activation_time != NEVER) & (self.activation_time <= t)


def select_seed(net: Network, spec: SeedSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw the initially active node set.

    single: one uniform node. triple: a uniform node with degree >= 2 plus
    two distinct uniform neighbors of it. explicit: the given ids, validated.
    """
    n = net.n_nodes
    if spec.rule is SeedRule.SINGLE:
        return np.array([int(rng.integers(0, n))], dtype=np.int64)
    if spec.rule is SeedRule.EXPLICIT:
        nodes = np.unique(np.asarray(spec.nodes, dtype=np.int64))
        if nodes.size and (nodes[0] < 0 or nodes[-1] >= n):
            raise ValueError(f"explicit seed ids must be in [0, {n}), got {spec.nodes}")
        return nodes
    # Connected triple: hub plus two of its neighbors. The hub is uniform
    # over degree->=2 nodes; rejection sampling finds one fast on any dense
    # graph, with a direct draw as fallback so sparse graphs still succeed.
    eligible = np.flatnonzero(net.degrees >= 2)
    if eligible.size == 0:
        raise SeedingError("no node has degree >= 2; cannot seed a connected triple")
    hub = -1
    for _ in range(n):
        draw = int(rng.integers(0, n))
        if net.degrees[draw] >= 2:
            hub = draw
            break
    if hub < 0:
        hub = int(rng.choice(eligible))
    nbrs = net.neighbors(hub)
    pair = rng.choice(nbrs, size=2, replace=False)
    return np.unique(np.array([hub, int(pair[0]), int(pair[1])], dtype=np.int64))


def activation_rule(active_neighbors: int, degree: int, phi: float) -> bool:
    """Threshold rule for a single node.

    Activates iff the node has at least one active neighbor and the active
    fraction active_neighbors/degree is >= phi. Isolated nodes (degree 0)
    never activate, and neither does a node with zero active neighbors
    (there is no message to receive), even at phi = 0.
    """
    if active_neighbors > degree:
        raise ValueError(f"active neighbor count {active_neighbors} exceeds degree {degree}")
    if active_neighbors < 0:
        raise ValueError(f"active neighbor count must be nonnegative, got {active_neighbors}")
    if degree == 0 or active_neighbors == 0:
        return False
    return active_neighbors / degree >= phi


def _neighbors_of(net: Network, nodes: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of the given nodes."""
    starts = net.adj_indptr[nodes]
    counts = net.adj_indptr[nodes + 1] - starts
    return net.adj_indices[concat_ranges(starts, counts)]


def initial_state(net: Network, seeds: np.ndarray) -> CascadeState:
    """State at t=0 with the seed set switched on."""
    active = np.zeros(net.n_nodes, dtype=bool)
    active[seeds] = True
    counts = np.bincount(_neighbors_of(net, seeds), minlength=net.n_nodes).astype(np.int64)
    return CascadeState(
        active=active,
        t=0,
        newly_activated=np.asarray(seeds, dtype=np.int64),
        active_neighbor_counts=counts,
    )


def step_synchronous(net: Network, state: CascadeState, phi: float) -> CascadeState:
    """One simultaneous update: all evaluations see the previous active set."""
    active = state.active.copy()
    counts = state.active_neighbor_counts
    candidates = np.unique(_neighbors_of(net, state.newly_activated))
    candidates = candidates[~active[candidates]]
    if candidates.size:
        frac = counts[candidates] / net.degrees[candidates]
        newly = candidates[(counts[candidates] > 0) & (frac >= phi)]
    else:
        newly = np.empty(0, dtype=np.int64)
    active[newly] = True
    new_counts = counts + np.bincount(_neighbors_of(net, newly), minlength=net.n_nodes)
    assert active.sum() >= state.active.sum(), "active set must never shrink"
    return CascadeState(active=active, t=state.t + 1, newly_activated=newly, active_neighbor_counts=new_counts)


def step_asynchronous(net: Network, state: CascadeState, phi: float, rng: np.random.Generator) -> CascadeState:
    """One full sweep in a fresh random node order, updates visible immediately."""
    active = state.active.copy()
    counts = state.active_neighbor_counts.copy()
    degrees = net.degrees
    indptr, indices = net.adj_indptr, net.adj_indices
    newly = []
    for v in rng.permutation(net.n_nodes):
        c = counts[v]
        if active[v] or c == 0:
            continue
        if c / degrees[v] >= phi:
            active[v] = True
            counts[indices[indptr[v]:indptr[v + 1]]] += 1
            newly.append(v)
    assert active.sum() >= state.active.sum(), "active set must never shrink"
    return CascadeState(
        active=active,
        t=state.t + 1,
        newly_activated=np.array(sorted(newly), dtype=np.int64),
        active_neighbor_counts=counts,
    )


def run_cascade(net: Network, params: CascadeParams, rng: np.random.Generator) -> CascadeOutcome:
    """Seed the network at t=0 and step until the cascade stops growing.

    Stops at the first step with no new activation (or when every node is
    active); the reported time is the last step that activated anything.
    Runs that exhaust the step budget while still growing are flagged
    stalled.
    """
    n = net.n_nodes
    max_steps = params.max_steps if params.max_steps is not None else 10 * n
    seeds = select_seed(net, params.seed_spec, rng)

    state = initial_state(net, seeds)
    activation_time = np.full(n, NEVER, dtype=np.int64)
    activation_time[seeds] = 0

    time = 0
    stalled = True
    while state.t < max_steps:
        if params.schedule is Schedule.SYNCHRONOUS:
            state = step_synchronous(net, state, params.phi)
        else:
            state = step_asynchronous(net, state, params.phi, rng)
        if state.newly_activated.size == 0:
            stalled = False
            break
        activation_time[state.newly_activated] = state.t
        time = state.t
        if state.active.all():
            stalled = False
            break

    final_fraction = float(state.active.sum()) / n
    return CascadeOutcome(
        final_fraction=final_fraction,
        time=time,
        is_global=final_fraction >= params.cutoff_fraction,
        stalled=stalled,
        activation_time=activation_time,
        seed=seeds,
    )
