"""Strict JSON scenario configuration.

One self-describing document per run, with the groups

    network     oscillator lattice parameters (+ optional source vector)
    twinslit    four-source scenario and the coupling schedule
    schrodinger free-particle side geometry
    quadrature  oracle box/damping parameters, dt refinement list
    output      paths and reporting tolerances

Unknown groups or keys are rejected, and every violated invariant is
reported with a message naming the offending field.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .lattice import OscillatorNetwork, SourceVector
from .oracle import QuadratureSpec
from .twinslit import SchrodingerSide, TwinSlitScenario

_GROUPS = {
    "network": {"num_sources", "mass", "spring", "coupling", "dt", "steps",
                "source"},
    "twinslit": {"mass", "spring", "omega0", "gamma1", "gamma2", "gamma4",
                 "j2", "j3", "j4", "k12", "k14", "k23", "k43", "hbar",
                 "schedule"},
    "schrodinger": {"exchange_mass", "interaction_time", "x12", "x23", "x43",
                    "alpha"},
    "quadrature": {"half_width", "points_per_axis", "epsilon", "dt_list",
                   "total_time", "mode"},
    "output": {"path", "oracle_rtol", "resonance_rtol",
               "include_zero_sentinel", "impulse_per_momentum"},
}

_SCHEDULE_KEYS = {"pairs", "points", "phase_start", "phase_stop", "k43"}


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be a JSON object")
    for group, body in cfg.items():
        if group not in _GROUPS:
            raise ConfigError(f"{group}: unknown config group")
        if not isinstance(body, dict):
            raise ConfigError(f"{group}: must be a JSON object")
        for key in body:
            if key not in _GROUPS[group]:
                raise ConfigError(f"{group}.{key}: unknown key")
    return cfg


def _group(cfg, name):
    if name not in cfg:
        raise ConfigError(f"{name}: required config group is missing")
    return cfg[name]


def _number(group, body, key, default=None, required=False):
    if key not in body:
        if required:
            raise ConfigError(f"{group}.{key}: required")
        return default
    v = body[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{group}.{key}: must be a number")
    if not math.isfinite(v):
        raise ConfigError(f"{group}.{key}: must be finite")
    return float(v)


def _integer(group, body, key, default=None, required=False):
    if key not in body:
        if required:
            raise ConfigError(f"{group}.{key}: required")
        return default
    v = body[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{group}.{key}: must be an integer")
    return v


def _flag(group, body, key, default=False):
    v = body.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(f"{group}.{key}: must be true or false")
    return v


def parse_network(cfg):
    """(OscillatorNetwork, SourceVector) from the network group; the
    source defaults to zeros."""
    body = _group(cfg, "network")
    m = _integer("network", body, "num_sources", required=True)
    coupling = body.get("coupling")
    if coupling is not None:
        if isinstance(coupling, (int, float)) and not isinstance(coupling, bool):
            if m != 2:
                raise ConfigError(
                    "network.coupling: scalar form requires num_sources = 2")
            coupling = [[0.0, float(coupling)], [float(coupling), 0.0]]
        if not isinstance(coupling, list):
            raise ConfigError("network.coupling: must be a number or a matrix")
        coupling = np.asarray(coupling, dtype=float)
    try:
        net = OscillatorNetwork(
            num_sources=m,
            mass=_number("network", body, "mass", required=True),
            spring=_number("network", body, "spring", required=True),
            coupling=coupling,
            dt=_number("network", body, "dt", required=True),
            steps=_integer("network", body, "steps", required=True),
        )
    except ValueError as exc:
        raise ConfigError(f"network.{exc}") from exc
    source = body.get("source")
    if source is None:
        vec = SourceVector.zeros(net.dim)
    else:
        if not isinstance(source, list):
            raise ConfigError("network.source: must be a list of numbers")
        vec = SourceVector(np.asarray(source, dtype=float))
        if len(vec) != net.dim:
            raise ConfigError(
                f"network.source: expected {net.dim} entries, got {len(vec)}")
    return net, vec


def parse_twinslit(cfg):
    """(TwinSlitScenario, schedule dict or None) from the twinslit group."""
    body = _group(cfg, "twinslit")
    kwargs = {}
    for key in ("mass", "spring", "omega0", "gamma1", "gamma2", "gamma4",
                "j2", "j3", "j4", "k12", "k14", "k23", "k43"):
        kwargs[key] = _number("twinslit", body, key, required=True)
    kwargs["hbar"] = _number("twinslit", body, "hbar", default=1.0)
    try:
        sc = TwinSlitScenario(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"twinslit.{exc}") from exc
    schedule = body.get("schedule")
    if schedule is not None:
        if not isinstance(schedule, dict):
            raise ConfigError("twinslit.schedule: must be an object")
        for key in schedule:
            if key not in _SCHEDULE_KEYS:
                raise ConfigError(f"twinslit.schedule.{key}: unknown key")
        if "pairs" in schedule:
            pairs = schedule["pairs"]
            if (not isinstance(pairs, list)
                    or any(not isinstance(p, list) or len(p) != 2 for p in pairs)):
                raise ConfigError(
                    "twinslit.schedule.pairs: must be a list of [k23, k43] pairs")
        elif "points" not in schedule:
            raise ConfigError(
                "twinslit.schedule: needs either 'pairs' or 'points'")
    return sc, schedule


def parse_schrodinger(cfg):
    body = _group(cfg, "schrodinger")
    alpha = body.get("alpha", 1.0)
    if isinstance(alpha, list):
        if len(alpha) != 2:
            raise ConfigError("schrodinger.alpha: pair form must be [re, im]")
        alpha = complex(alpha[0], alpha[1])
    elif isinstance(alpha, (int, float)) and not isinstance(alpha, bool):
        alpha = complex(alpha)
    else:
        raise ConfigError("schrodinger.alpha: must be a number or [re, im]")
    try:
        return SchrodingerSide(
            exchange_mass=_number("schrodinger", body, "exchange_mass", required=True),
            interaction_time=_number("schrodinger", body, "interaction_time", required=True),
            x12=_number("schrodinger", body, "x12", required=True),
            x23=_number("schrodinger", body, "x23", default=0.0),
            x43=_number("schrodinger", body, "x43", default=0.0),
            alpha=alpha,
        )
    except ValueError as exc:
        raise ConfigError(f"schrodinger.{exc}") from exc


def parse_quadrature(cfg, required=False):
    """(QuadratureSpec, dt_list, total_time, mode) from the quadrature
    group; everything optional unless `required`."""
    if "quadrature" not in cfg:
        if required:
            raise ConfigError("quadrature: required config group is missing")
        body = {}
    else:
        body = cfg["quadrature"]
    try:
        spec = QuadratureSpec(
            half_width=_number("quadrature", body, "half_width"),
            points_per_axis=_integer("quadrature", body, "points_per_axis",
                                     default=801),
            epsilon=_number("quadrature", body, "epsilon", default=0.1),
        )
    except ValueError as exc:
        raise ConfigError(f"quadrature.{exc}") from exc
    dt_list = body.get("dt_list")
    if dt_list is not None:
        if (not isinstance(dt_list, list)
                or any(isinstance(d, bool) or not isinstance(d, (int, float))
                       for d in dt_list)):
            raise ConfigError("quadrature.dt_list: must be a list of numbers")
        dt_list = [float(d) for d in dt_list]
    mode = body.get("mode", "plus")
    if mode not in ("plus", "minus"):
        raise ConfigError("quadrature.mode: must be 'plus' or 'minus'")
    return spec, dt_list, _number("quadrature", body, "total_time"), mode


@dataclass
class OutputOptions:
    path: str | None = None
    oracle_rtol: float = 1e-2
    resonance_rtol: float = 1e-9
    include_zero_sentinel: bool = False
    impulse_per_momentum: float = 1.0


def parse_output(cfg):
    body = cfg.get("output", {})
    path = body.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: must be a string")
    opts = OutputOptions(
        path=path,
        oracle_rtol=_number("output", body, "oracle_rtol", default=1e-2),
        resonance_rtol=_number("output", body, "resonance_rtol", default=1e-9),
        include_zero_sentinel=_flag("output", body, "include_zero_sentinel"),
        impulse_per_momentum=_number("output", body, "impulse_per_momentum",
                                     default=1.0),
    )
    if not opts.oracle_rtol > 0:
        raise ConfigError("output.oracle_rtol: must be positive")
    if not opts.resonance_rtol > 0:
        raise ConfigError("output.resonance_rtol: must be positive")
    return opts
