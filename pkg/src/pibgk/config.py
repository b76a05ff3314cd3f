"""Run configuration: YAML schema, validation, and grid/scheme construction.

A run is described by a YAML document (schema_version 1).  Parsing resolves
scenario defaults and validates every constraint, reporting all violations
at once.  Example:

    schema_version: 1
    scenario: sod1d
    epsilon: 1.0e-5
    space: {cells: 100}
    velocity: {nodes: 80, bounds: [-8, 8]}
    reconstruction: weno3
    method: prk4
    time: {t_end: 0.15, inner_dt: 1.0e-5, inner_steps: 2, outer_dt: 4.0e-3}
    snapshots: [0.15]
    output_dir: out

Projective methods take either the explicit (inner_dt, inner_steps,
outer_dt) triple or ``advise: true`` (mutually exclusive), in which case the
spectral advisor picks the parameters at run time.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

import yaml

from .errors import ParseError, ValidationError
from .integrators import (
    ButcherTableau,
    ProjectiveParameters,
    TimeScheme,
    named_tableau,
    validate_tableau,
)
from .phase_space import BOUNDARY_TAGS, SpatialGrid, VelocityGrid
from .scenarios import SCENARIOS
from .transport import DEFAULT_WENO_EPSILON, ORDERS

SCHEMA_VERSION = 1
METHODS = ("fe", "rk4", "pfe", "prk")
MAXWELLIAN_MODES = ("analytic", "corrected")


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated, fully explicit run description."""

    scenario: str
    epsilon: float
    space_cells: tuple
    space_domain: tuple
    space_bc: tuple
    velocity_nodes: tuple
    velocity_bounds: tuple
    reconstruction: str
    weno_epsilon: float
    maxwellian_mode: str
    method: str
    tableau_name: str | None
    tableau_inline: tuple | None
    dt: float | None
    inner_dt: float | None
    inner_steps: int | None
    outer_dt: float | None
    advise: bool
    cfl_fraction: float
    t_end: float
    snapshot_times: tuple
    output_dir: str
    dump_distribution: bool
    progress_every: int
    schema_version: int = SCHEMA_VERSION


def _pairs(value):
    """Normalize bounds YAML ([lo, hi] or [[..], [..]]) to nested tuples."""
    if isinstance(value[0], (list, tuple)):
        return tuple(tuple(float(x) for x in pair) for pair in value)
    return (tuple(float(x) for x in value),)


def _counts(value):
    return tuple(int(v) for v in (value if isinstance(value, (list, tuple)) else [value]))


class _Reader:
    """Pulls typed values out of the raw mapping, accumulating violations."""

    def __init__(self, raw):
        self.raw = raw
        self.errors = []
        self.seen = set()

    def error(self, msg):
        self.errors.append(msg)

    def get(self, key, kind, default=None, required=False, where=None):
        src = self.raw if where is None else where[1]
        label = key if where is None else f"{where[0]}.{key}"
        if where is None:
            self.seen.add(key)
        if not isinstance(src, dict) or key not in src or src[key] is None:
            if required:
                self.error(f"{label}: required field is missing")
            return default
        value = src[key]
        try:
            if kind is bool:
                if not isinstance(value, bool):
                    raise TypeError
                return value
            if kind is int:
                if isinstance(value, bool) or int(value) != value:
                    raise TypeError
                return int(value)
            return kind(value)
        except (TypeError, ValueError):
            self.error(f"{label}: expected {kind.__name__}, got {value!r}")
            return default


def parse_config(text):
    """Parse and validate a YAML configuration document.

    Raises ParseError for syntax problems (with the document location) and
    ValidationError listing every violated constraint.
    """
    try:
        raw = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        at = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ParseError(f"invalid YAML{at}: {exc.problem or exc}") from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from exc
    if raw is None:
        raise ParseError("empty configuration document")
    if not isinstance(raw, dict):
        raise ParseError("configuration must be a mapping of keys to values")
    return _validate(raw)


def load_config(path):
    """Read and parse a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _validate(raw):
    r = _Reader(raw)

    version = r.get("schema_version", int, default=SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        r.error(f"schema_version: unsupported version {version}, expected {SCHEMA_VERSION}")

    scenario = r.get("scenario", str, required=True)
    spec = None
    if scenario is not None:
        spec = SCENARIOS.get(scenario)
        if spec is None:
            known = ", ".join(sorted(SCENARIOS))
            r.error(f"scenario: unknown scenario {scenario!r}, known scenarios: {known}")

    epsilon = r.get("epsilon", float, required=True)
    if epsilon is not None and not epsilon > 0:
        r.error(f"epsilon: must be positive, got {epsilon}")

    # Grids, with scenario defaults.
    space_raw = raw.get("space") or {}
    vel_raw = raw.get("velocity") or {}
    r.seen.update(("space", "velocity"))
    for section, name in ((space_raw, "space"), (vel_raw, "velocity")):
        if not isinstance(section, dict):
            r.error(f"{name}: expected a mapping")
    space_raw = space_raw if isinstance(space_raw, dict) else {}
    vel_raw = vel_raw if isinstance(vel_raw, dict) else {}

    dim = spec.dim if spec else 1
    cells = space_raw.get("cells")
    cells = _counts(cells) if cells is not None else {1: (100,), 2: (200, 25)}[dim]
    domain = _pairs(space_raw.get("domain")) if space_raw.get("domain") else (
        spec.space_bounds if spec else ((0.0, 1.0),)
    )
    bc = tuple(space_raw.get("bc")) if space_raw.get("bc") else (
        spec.space_bc if spec else ("outflow",)
    )
    nodes = vel_raw.get("nodes")
    nodes = _counts(nodes) if nodes is not None else (
        spec.velocity_nodes if spec else (80,)
    )
    vbounds = _pairs(vel_raw.get("bounds")) if vel_raw.get("bounds") else (
        spec.velocity_bounds if spec else ((-8.0, 8.0),)
    )
    if len(vbounds) == 1 < dim:
        vbounds = vbounds * dim
    if len(nodes) == 1 < dim:
        nodes = nodes * dim

    for label, tup in (("space.cells", cells), ("space.domain", domain),
                       ("space.bc", bc), ("velocity.nodes", nodes),
                       ("velocity.bounds", vbounds)):
        if len(tup) != dim:
            r.error(f"{label}: expected {dim} per-axis entries, got {len(tup)}")
    for i, tag in enumerate(bc):
        if tag not in BOUNDARY_TAGS:
            r.error(f"space.bc[{i}]: unknown tag {tag!r}, expected one of {BOUNDARY_TAGS}")
    for i, k in enumerate(cells):
        if k < 1:
            r.error(f"space.cells[{i}]: must be >= 1, got {k}")
    for i, k in enumerate(nodes):
        if k < dim + 2:
            r.error(f"velocity.nodes[{i}]: need at least {dim + 2} nodes, got {k}")
    for i, (lo, hi) in enumerate(vbounds):
        if abs(lo + hi) > 1e-12 * max(abs(lo), abs(hi), 1.0):
            r.error(f"velocity.bounds[{i}]: must be symmetric, got [{lo}, {hi}]")

    reconstruction = r.get("reconstruction", str, default="weno3")
    if reconstruction not in ORDERS:
        r.error(f"reconstruction: unknown order {reconstruction!r}, expected one of {ORDERS}")
    weno_epsilon = r.get("weno_epsilon", float, default=DEFAULT_WENO_EPSILON)
    if not weno_epsilon > 0:
        r.error(f"weno_epsilon: must be positive, got {weno_epsilon}")
    maxwellian_mode = r.get("maxwellian_mode", str, default="analytic")
    if maxwellian_mode not in MAXWELLIAN_MODES:
        r.error(f"maxwellian_mode: expected one of {MAXWELLIAN_MODES}, got {maxwellian_mode!r}")

    # Method and time stepping.
    method = r.get("method", str, required=True) or "rk4"
    tableau_name = r.get("tableau", str) if isinstance(raw.get("tableau"), str) else None
    tableau_inline = None
    if isinstance(raw.get("tableau"), dict):
        r.seen.add("tableau")
        tab = raw["tableau"]
        try:
            tableau_inline = (
                tuple(tuple(float(x) for x in row) for row in tab["a"]),
                tuple(float(x) for x in tab["b"]),
                tuple(float(x) for x in tab["c"]),
            )
        except (KeyError, TypeError, ValueError):
            r.error("tableau: inline tableau needs numeric arrays a, b, c")
    if method == "prk4":
        method, tableau_name = "prk", tableau_name or "rk4"
    if method not in METHODS:
        r.error(f"method: unknown method {method!r}, expected fe, rk4, pfe, prk, or prk4")
    if method == "prk" and tableau_name is None and tableau_inline is None:
        tableau_name = "rk4"
    if method != "prk" and (tableau_name or tableau_inline):
        r.error(f"tableau: only meaningful for method prk, not {method!r}")
    if tableau_inline is not None:
        try:
            bad = validate_tableau(ButcherTableau(*tableau_inline))
            for msg in bad:
                r.error(f"tableau: {msg}")
        except Exception as exc:
            r.error(f"tableau: {exc}")
    elif method == "prk" and tableau_name is not None:
        try:
            named_tableau(tableau_name)
        except Exception as exc:
            r.error(f"tableau: {exc}")

    time_raw = raw.get("time") or {}
    r.seen.add("time")
    if not isinstance(time_raw, dict):
        r.error("time: expected a mapping")
        time_raw = {}
    where = ("time", time_raw)
    t_end = r.get("t_end", float, required=True, where=where)
    if t_end is not None and t_end < 0:
        r.error(f"time.t_end: must be >= 0, got {t_end}")
    dt = r.get("dt", float, where=where)
    inner_dt = r.get("inner_dt", float, where=where)
    inner_steps = r.get("inner_steps", int, where=where)
    outer_dt = r.get("outer_dt", float, where=where)
    advise = r.get("advise", bool, default=False, where=where)
    cfl_fraction = r.get("cfl_fraction", float, default=0.4, where=where)
    unknown_time = set(time_raw) - {"t_end", "dt", "inner_dt", "inner_steps",
                                    "outer_dt", "advise", "cfl_fraction"}
    for key in sorted(unknown_time):
        r.error(f"time.{key}: unknown field")

    projective = method in ("pfe", "prk")
    if method in ("fe", "rk4"):
        if dt is None or not dt > 0:
            r.error(f"time.dt: method {method!r} needs a positive dt")
        for key, val in (("inner_dt", inner_dt), ("inner_steps", inner_steps),
                         ("outer_dt", outer_dt)):
            if val is not None:
                r.error(f"time.{key}: only meaningful for projective methods")
        if advise:
            r.error("time.advise: only meaningful for projective methods")
    elif projective:
        if dt is not None:
            r.error("time.dt: projective methods use inner_dt/outer_dt instead")
        explicit = [v is not None for v in (inner_dt, inner_steps, outer_dt)]
        if advise and any(explicit):
            r.error("time.advise: mutually exclusive with explicit inner_dt/inner_steps/outer_dt")
        elif not advise:
            if not all(explicit):
                r.error("time: projective methods need inner_dt, inner_steps and outer_dt "
                        "(or advise: true)")
            else:
                if not inner_dt > 0:
                    r.error(f"time.inner_dt: must be positive, got {inner_dt}")
                if inner_steps < 1:
                    r.error(f"time.inner_steps: must be >= 1, got {inner_steps}")
                span = (inner_steps + 1) * inner_dt
                if inner_dt > 0 and outer_dt < span * (1 - 1e-9):
                    r.error(
                        "time.outer_dt: projective constraint violated, "
                        f"outer_dt = {outer_dt} < (inner_steps+1)*inner_dt = {span}"
                    )
                elif method == "prk" and inner_dt > 0:
                    tab = (ButcherTableau(*tableau_inline) if tableau_inline
                           else _safe_named(tableau_name))
                    if tab is not None and not validate_tableau(tab):
                        for s in range(1, tab.stages):
                            if tab.c[s] * outer_dt < span * (1 - 1e-9):
                                r.error(
                                    f"time.outer_dt: stage {s + 1} span violated, "
                                    f"c_s*outer_dt = {tab.c[s] * outer_dt:.6g} < "
                                    f"(inner_steps+1)*inner_dt = {span:.6g}"
                                )
    if "cfl_fraction" in time_raw and not advise:
        r.error("time.cfl_fraction: only meaningful with advise: true")
    if not cfl_fraction > 0:
        r.error(f"time.cfl_fraction: must be positive, got {cfl_fraction}")

    snaps_raw = raw.get("snapshots")
    r.seen.add("snapshots")
    if snaps_raw is None:
        snapshot_times = (t_end,) if t_end is not None else ()
    else:
        try:
            snapshot_times = tuple(sorted(set(float(s) for s in snaps_raw)))
        except (TypeError, ValueError):
            r.error(f"snapshots: expected a list of times, got {snaps_raw!r}")
            snapshot_times = ()
        if t_end is not None:
            for s in snapshot_times:
                if s < 0 or s > t_end * (1 + 1e-9):
                    r.error(f"snapshots: time {s} outside [0, t_end = {t_end}]")

    output_dir = r.get("output_dir", str, default="out")
    dump_distribution = r.get("dump_distribution", bool, default=False)
    progress_every = r.get("progress_every", int, default=0)
    if progress_every < 0:
        r.error(f"progress_every: must be >= 0, got {progress_every}")

    unknown = set(raw) - r.seen
    for key in sorted(unknown):
        r.error(f"{key}: unknown top-level field")

    if r.errors:
        raise ValidationError(r.errors)

    return ScenarioConfig(
        scenario=scenario, epsilon=epsilon,
        space_cells=cells, space_domain=domain, space_bc=bc,
        velocity_nodes=nodes, velocity_bounds=vbounds,
        reconstruction=reconstruction, weno_epsilon=weno_epsilon,
        maxwellian_mode=maxwellian_mode,
        method=method, tableau_name=tableau_name, tableau_inline=tableau_inline,
        dt=dt, inner_dt=inner_dt, inner_steps=inner_steps, outer_dt=outer_dt,
        advise=advise, cfl_fraction=cfl_fraction,
        t_end=t_end, snapshot_times=snapshot_times,
        output_dir=output_dir, dump_distribution=dump_distribution,
        progress_every=progress_every,
    )


def _safe_named(name):
    try:
        return named_tableau(name)
    except Exception:
        return None


def serialize_config(cfg):
    """Render a config back to YAML; parse(serialize(cfg)) == cfg."""
    doc = {
        "schema_version": cfg.schema_version,
        "scenario": cfg.scenario,
        "epsilon": cfg.epsilon,
        "space": {
            "cells": list(cfg.space_cells),
            "domain": [list(p) for p in cfg.space_domain],
            "bc": list(cfg.space_bc),
        },
        "velocity": {
            "nodes": list(cfg.velocity_nodes),
            "bounds": [list(p) for p in cfg.velocity_bounds],
        },
        "reconstruction": cfg.reconstruction,
        "weno_epsilon": cfg.weno_epsilon,
        "maxwellian_mode": cfg.maxwellian_mode,
        "method": cfg.method,
        "time": {"t_end": cfg.t_end},
        "snapshots": list(cfg.snapshot_times),
        "output_dir": cfg.output_dir,
        "dump_distribution": cfg.dump_distribution,
        "progress_every": cfg.progress_every,
    }
    if cfg.tableau_inline is not None:
        doc["tableau"] = {
            "a": [list(row) for row in cfg.tableau_inline[0]],
            "b": list(cfg.tableau_inline[1]),
            "c": list(cfg.tableau_inline[2]),
        }
    elif cfg.tableau_name is not None:
        doc["tableau"] = cfg.tableau_name
    if cfg.method in ("fe", "rk4"):
        doc["time"]["dt"] = cfg.dt
    elif cfg.advise:
        doc["time"]["advise"] = True
        doc["time"]["cfl_fraction"] = cfg.cfl_fraction
    else:
        doc["time"]["inner_dt"] = cfg.inner_dt
        doc["time"]["inner_steps"] = cfg.inner_steps
        doc["time"]["outer_dt"] = cfg.outer_dt
    return yaml.safe_dump(doc, sort_keys=False)


def build_grids(cfg):
    """Spatial and velocity grids described by a config."""
    space = SpatialGrid.uniform(cfg.space_domain, cfg.space_cells, cfg.space_bc)
    velocity = VelocityGrid.uniform(cfg.velocity_bounds, cfg.velocity_nodes)
    return space, velocity


def resolve_scheme(cfg, space, velocity, advice_sink=None):
    """Build the TimeScheme for a config, running the advisor when asked.

    ``advice_sink`` receives the ParameterAdvice when advise: true resolved.
    """
    if cfg.method in ("fe", "rk4"):
        return TimeScheme(kind=cfg.method, dt=cfg.dt)
    tableau = None
    if cfg.method == "prk":
        tableau = (ButcherTableau(*cfg.tableau_inline) if cfg.tableau_inline
                   else named_tableau(cfg.tableau_name))
    if cfg.advise:
        from .linear_analysis import advise_parameters, build_basis
        basis = build_basis(velocity)
        advice = advise_parameters(
            cfg.epsilon, space.spacing, basis, space.cells,
            cfl_fraction=cfg.cfl_fraction, tableau=tableau,
        )
        if advice_sink is not None:
            advice_sink(advice)
        params = advice.params
    else:
        params = ProjectiveParameters(cfg.inner_dt, cfg.inner_steps, cfg.outer_dt)
    return TimeScheme(kind=cfg.method, params=params, tableau=tableau)


def describe(cfg):
    """Short human-readable summary of a config."""
    bits = [f"{cfg.scenario} eps={cfg.epsilon:g} {cfg.reconstruction}",
            f"cells={list(cfg.space_cells)} nodes={list(cfg.velocity_nodes)}"]
    if cfg.method in ("fe", "rk4"):
        bits.append(f"{cfg.method} dt={cfg.dt:g}")
    elif cfg.advise:
        bits.append(f"{cfg.method} (advised)")
    else:
        bits.append(f"{cfg.method} inner_dt={cfg.inner_dt:g} K={cfg.inner_steps} "
                    f"outer_dt={cfg.outer_dt:g}")
    bits.append(f"t_end={cfg.t_end:g}")
    return "  ".join(bits)


def config_fields():
    return [f.name for f in fields(ScenarioConfig)]


def with_overrides(cfg, **kwargs):
    """Functional update of a parsed config (used by CLI flag overrides)."""
    return replace(cfg, **kwargs)
