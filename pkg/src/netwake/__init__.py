"""Threshold-cascade wake-up dynamics on random geometric sensor networks.

Build a random geometric network, optionally add a few long-range
shortcut links, run threshold-controlled activation cascades over it,
and account the communication energy. The montecarlo module replicates
experiments over deterministic per-replicate random streams and sweeps
parameter grids; the CLI (``netwake``) drives it all from config files.
"""

__version__ = "0.1.0"

from .cascade import (
    CascadeOutcome,
    CascadeParams,
    CascadeState,
    Schedule,
    SeedRule,
    SeedSpec,
    activation_rule,
    initial_state,
    run_cascade,
    select_seed,
    step_asynchronous,
    step_synchronous,
)
from .config import parse_config
from .energy import (
    EnergyModel,
    EnergyReport,
    account_cascade,
    local_broadcast_energy,
    long_range_energy,
    predicted_energy,
)
from .errors import (
    ConfigError,
    EstimationError,
    ExperimentInfeasibleError,
    LinkSamplingError,
    NetwakeError,
    SeedingError,
)
from .geometry import (
    BoundaryMode,
    distance,
    expected_degree,
    pair_distances,
    range_for_degree,
    sample_points,
)
from .montecarlo import (
    ExperimentConfig,
    ReplicateStats,
    SweepAxis,
    SweepRow,
    SweepSpec,
    cell_config,
    estimate_onset_range,
    estimate_upper_boundary,
    fit_boundary_exponent,
    replicate_rng,
    run_replicates,
    sweep,
)
from .network import (
    ComponentLabeling,
    Network,
    build_rgg,
    components,
    giant_fraction,
)
from .smallworld import (
    LinkScheme,
    SchemeKind,
    add_long_range_links,
    mean_long_range_length,
)

__all__ = [
    "__version__",
    "BoundaryMode", "distance", "pair_distances", "sample_points",
    "expected_degree", "range_for_degree",
    "Network", "ComponentLabeling", "build_rgg", "components", "giant_fraction",
    "LinkScheme", "SchemeKind", "add_long_range_links", "mean_long_range_length",
    "CascadeParams", "CascadeState", "CascadeOutcome", "Schedule", "SeedRule", "SeedSpec",
    "activation_rule", "initial_state", "select_seed", "step_synchronous",
    "step_asynchronous", "run_cascade",
    "EnergyModel", "EnergyReport", "local_broadcast_energy", "long_range_energy",
    "account_cascade", "predicted_energy",
    "ExperimentConfig", "ReplicateStats", "SweepAxis", "SweepSpec", "SweepRow",
    "run_replicates", "sweep", "cell_config", "replicate_rng",
    "estimate_onset_range", "estimate_upper_boundary", "fit_boundary_exponent",
    "parse_config",
    "NetwakeError", "ConfigError", "SeedingError", "LinkSamplingError",
    "ExperimentInfeasibleError", "EstimationError",
]
