"""Experiment configuration documents.

The format is line-based ``key = value`` (``:`` also works) with ``#``
comments. Scheme parameters may be given flat::

    phi = 0.12
    R = 16
    scheme = cutoff
    p_r = 0.01
    d_c = 300

or as a block, which is also how sweeps are declared::

    scheme {
        kind = uniform
        p_r = 0.01
    }
    sweep {
        axis1 = R
        values1 = 11, 12, 13, 14
        axis2 = phi
        values2 = 0.05, 0.10
    }

Unknown keys are rejected; every parse error names the key and line.
"""

from __future__ import annotations

from dataclasses import replace

from .cascade import CascadeParams, Schedule, SeedRule, SeedSpec
from .errors import ConfigError
from .geometry import BoundaryMode
from .montecarlo import ExperimentConfig, SweepAxis, SweepSpec
from .smallworld import LinkScheme, SchemeKind

DEFAULTS = {
    "n_nodes": 10_000,
    "L": 1000.0,
    "boundary": BoundaryMode.TORUS,
    "c": 1.0,
    "cutoff_fraction": 0.85,
    "n_runs": 1000,
    "master_seed": 0,
}

_TOP_KEYS = {
    "phi", "R", "n_nodes", "L", "boundary", "schedule", "seed_rule", "seed_nodes",
    "cutoff_fraction", "max_steps", "n_runs", "master_seed", "c",
    "scheme", "p_r", "d_c", "delta",
}
_SCHEME_KEYS = {"kind", "p_r", "d_c", "delta"}
_SWEEP_KEYS = {"axis1", "values1", "axis2", "values2"}
_BLOCKS = {"scheme": _SCHEME_KEYS, "sweep": _SWEEP_KEYS}


class _Doc:
    """Raw entries: (value text, line number) per key, per scope."""

    def __init__(self):
        self.top: dict[str, tuple[str, int]] = {}
        self.blocks: dict[str, dict[str, tuple[str, int]]] = {}


def _tokenize(text: str) -> _Doc:
    doc = _Doc()
    scope: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith("{"):
            name = line[:-1].strip()
            if scope is not None:
                raise ConfigError("nested blocks are not supported", key=name, line=lineno)
            if name not in _BLOCKS:
                raise ConfigError(f"unknown block {name!r}", key=name, line=lineno)
            if name in doc.blocks:
                raise ConfigError(f"duplicate block {name!r}", key=name, line=lineno)
            scope = name
            doc.blocks[name] = {}
            continue
        if line == "}":
            if scope is None:
                raise ConfigError("unmatched '}'", line=lineno)
            scope = None
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, value = (part.strip() for part in line.split(sep, 1))
        if not key or not value:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        target = doc.top if scope is None else doc.blocks[scope]
        allowed = _TOP_KEYS if scope is None else _BLOCKS[scope]
        if key not in allowed:
            where = f"in block {scope!r}" if scope else "at top level"
            raise ConfigError(f"unknown key {key!r} {where}", key=key, line=lineno)
        if key in target:
            raise ConfigError(f"duplicate key {key!r}", key=key, line=lineno)
        target[key] = (value, lineno)
    if scope is not None:
        raise ConfigError(f"block {scope!r} is never closed", key=scope)
    return doc


def _convert(entry: tuple[str, int], key: str, conv, what: str):
    value, lineno = entry
    try:
        return conv(value)
    except (ValueError, TypeError):
        raise ConfigError(f"expected {what}, got {value!r}", key=key, line=lineno) from None


def _check(condition: bool, message: str, key: str, entry: tuple[str, int]):
    if not condition:
        raise ConfigError(message, key=key, line=entry[1])


def _float_list(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _int_list(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return tuple(int(p) for p in parts)


def _strict_int(text: str) -> int:
    if float(text) != int(float(text)):
        raise ValueError(text)
    return int(float(text))


def _parse_scheme(doc: _Doc) -> LinkScheme:
    flat_keys = {k for k in ("scheme", "p_r", "d_c", "delta") if k in doc.top}
    block = doc.blocks.get("scheme")
    if block is not None and flat_keys:
        key = sorted(flat_keys)[0]
        raise ConfigError(
            "scheme given both as a block and as flat keys",
            key=key, line=doc.top[key][1],
        )

    if block is not None:
        entries = dict(block)
        kind_entry = entries.pop("kind", None)
        if kind_entry is None:
            raise ConfigError("scheme block needs a 'kind'", key="kind")
        kind = _convert(kind_entry, "kind", SchemeKind.parse, "uniform, powerlaw or cutoff")
    elif flat_keys:
        entries = {k: doc.top[k] for k in flat_keys if k != "scheme"}
        if "scheme" in doc.top:
            kind = _convert(doc.top["scheme"], "scheme", SchemeKind.parse, "uniform, powerlaw or cutoff")
        else:
            kind = SchemeKind.UNIFORM
    else:
        return LinkScheme.none()

    p_r = 0.0
    if "p_r" in entries:
        p_r = _convert(entries["p_r"], "p_r", float, "a number")
        _check(p_r >= 0, "p_r must be nonnegative", "p_r", entries["p_r"])
    delta = None
    if "delta" in entries:
        delta = _convert(entries["delta"], "delta", float, "a number")
        _check(delta >= 0, "delta must be nonnegative", "delta", entries["delta"])
    d_c = None
    if "d_c" in entries:
        d_c = _convert(entries["d_c"], "d_c", float, "a number")
        _check(d_c > 0, "d_c must be positive", "d_c", entries["d_c"])

    try:
        return LinkScheme(kind, p_r, delta=delta, d_c=d_c)
    except ValueError as exc:
        key = "kind" if block is not None else "scheme"
        entry = block.get("kind") if block is not None else doc.top.get("scheme")
        raise ConfigError(str(exc), key=key, line=entry[1] if entry else None) from None


def parse_config(text: str) -> ExperimentConfig | SweepSpec:
    """Parse a config document into an experiment or sweep description.

    Applies the documented defaults (N=10^4, L=10^3, torus, c=1,
    cutoff_fraction=0.85, n_runs=1000); ``phi`` and ``R`` are required.
    """
    doc = _tokenize(text)
    top = doc.top

    for required in ("phi", "R"):
        if required not in top:
            raise ConfigError(f"missing required key {required!r}", key=required)

    phi = _convert(top["phi"], "phi", float, "a number")
    _check(0.0 <= phi <= 1.0, "phi must be in [0, 1]", "phi", top["phi"])
    radio_range = _convert(top["R"], "R", float, "a number")
    _check(radio_range >= 0, "R must be nonnegative", "R", top["R"])

    n_nodes = DEFAULTS["n_nodes"]
    if "n_nodes" in top:
        n_nodes = _convert(top["n_nodes"], "n_nodes", _strict_int, "an integer")
        _check(n_nodes >= 1, "n_nodes must be >= 1", "n_nodes", top["n_nodes"])
    side = DEFAULTS["L"]
    if "L" in top:
        side = _convert(top["L"], "L", float, "a number")
        _check(side > 0, "L must be positive", "L", top["L"])
    boundary = DEFAULTS["boundary"]
    if "boundary" in top:
        boundary = _convert(top["boundary"], "boundary", BoundaryMode.parse, "'torus' or 'planar'")
    coefficient = DEFAULTS["c"]
    if "c" in top:
        coefficient = _convert(top["c"], "c", float, "a number")
        _check(coefficient > 0, "c must be positive", "c", top["c"])
    n_runs = DEFAULTS["n_runs"]
    if "n_runs" in top:
        n_runs = _convert(top["n_runs"], "n_runs", _strict_int, "an integer")
        _check(n_runs >= 1, "n_runs must be >= 1", "n_runs", top["n_runs"])
    master_seed = DEFAULTS["master_seed"]
    if "master_seed" in top:
        master_seed = _convert(top["master_seed"], "master_seed", _strict_int, "an integer")
        _check(master_seed >= 0, "master_seed must be nonnegative", "master_seed", top["master_seed"])

    schedule = Schedule.SYNCHRONOUS
    if "schedule" in top:
        schedule = _convert(top["schedule"], "schedule", Schedule.parse, "'synchronous' or 'asynchronous'")
    cutoff_fraction = DEFAULTS["cutoff_fraction"]
    if "cutoff_fraction" in top:
        cutoff_fraction = _convert(top["cutoff_fraction"], "cutoff_fraction", float, "a number")
        _check(0 < cutoff_fraction <= 1, "cutoff_fraction must be in (0, 1]", "cutoff_fraction", top["cutoff_fraction"])
    max_steps = None
    if "max_steps" in top:
        max_steps = _convert(top["max_steps"], "max_steps", _strict_int, "an integer")
        _check(max_steps >= 1, "max_steps must be >= 1", "max_steps", top["max_steps"])

    seed_rule = "single"
    if "seed_rule" in top:
        seed_rule = _convert(top["seed_rule"], "seed_rule", str.lower, "a seed rule").strip()
        _check(seed_rule in ("single", "triple", "explicit"),
               "seed_rule must be single, triple or explicit", "seed_rule", top["seed_rule"])
    if seed_rule == "explicit":
        if "seed_nodes" not in top:
            raise ConfigError("explicit seeding needs 'seed_nodes'", key="seed_nodes")
        nodes = _convert(top["seed_nodes"], "seed_nodes", _int_list, "a comma list of node ids")
        seed_spec = SeedSpec.explicit(nodes)
    else:
        if "seed_nodes" in top:
            raise ConfigError("'seed_nodes' only applies to explicit seeding",
                              key="seed_nodes", line=top["seed_nodes"][1])
        seed_spec = SeedSpec(SeedRule(seed_rule))

    cascade = CascadeParams(
        phi=phi,
        schedule=schedule,
        seed_spec=seed_spec,
        cutoff_fraction=cutoff_fraction,
        max_steps=max_steps,
    )
    base = ExperimentConfig(
        phi=phi,
        radio_range=radio_range,
        n_nodes=n_nodes,
        side=side,
        boundary=boundary,
        scheme=_parse_scheme(doc),
        cascade=cascade,
        coefficient=coefficient,
        n_runs=n_runs,
        master_seed=master_seed,
    )

    sweep_block = doc.blocks.get("sweep")
    if sweep_block is None:
        return base

    if "axis1" not in sweep_block or "values1" not in sweep_block:
        raise ConfigError("sweep block needs 'axis1' and 'values1'", key="axis1")
    try:
        axis1 = SweepAxis(
            name=sweep_block["axis1"][0],
            values=_convert(sweep_block["values1"], "values1", _float_list, "a comma list of numbers"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), key="axis1", line=sweep_block["axis1"][1]) from None
    axis2 = None
    if "axis2" in sweep_block or "values2" in sweep_block:
        if "axis2" not in sweep_block or "values2" not in sweep_block:
            raise ConfigError("a second axis needs both 'axis2' and 'values2'", key="axis2")
        try:
            axis2 = SweepAxis(
                name=sweep_block["axis2"][0],
                values=_convert(sweep_block["values2"], "values2", _float_list, "a comma list of numbers"),
            )
        except ValueError as exc:
            raise ConfigError(str(exc), key="axis2", line=sweep_block["axis2"][1]) from None
    return SweepSpec(base=base, axis1=axis1, axis2=axis2)


def describe_config(cfg: ExperimentConfig) -> str:
    """Canonical one-line echo of a config, stable across runs."""
    scheme = cfg.scheme
    fields = [
        ("n_nodes", cfg.n_nodes),
        ("L", cfg.side),
        ("boundary", cfg.boundary.value),
        ("R", cfg.radio_range),
        ("phi", cfg.phi),
        ("schedule", cfg.cascade.schedule.value),
        ("seed_rule", cfg.cascade.seed_spec.rule.value),
        ("seed_nodes", list(cfg.cascade.seed_spec.nodes) or None),
        ("cutoff_fraction", cfg.cascade.cutoff_fraction),
        ("max_steps", cfg.cascade.max_steps),
        ("scheme", scheme.kind.value),
        ("p_r", scheme.p_r),
        ("delta", scheme.delta),
        ("d_c", scheme.d_c),
        ("c", cfg.coefficient),
        ("n_runs", cfg.n_runs),
        ("master_seed", cfg.master_seed),
    ]
    return " ".join(f"{name}={value!r}" for name, value in fields)


def describe_sweep(spec: SweepSpec) -> str:
    parts = [describe_config(spec.base), f"axis1={spec.axis1.name}:{list(spec.axis1.values)!r}"]
    if spec.axis2 is not None:
        parts.append(f"axis2={spec.axis2.name}:{list(spec.axis2.values)!r}")
    return " ".join(parts)
