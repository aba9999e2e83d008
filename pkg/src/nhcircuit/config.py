"""Run configuration: one TOML document, defaults for everything.

Schema (every key optional)::

    [circuit]            # CircuitParams fields, MHz / radians
    omega_a = 4475.0
    omega_q = [4500.0, 4505.0]
    g_e = 1.137          # pin the effective coupling instead of deriving it

    [scan]               # 2-D grids (scan2d, nonrecip, epfind with axis2)
    axis1 = {name = "g_e", start = -3.0, stop = 3.0, num = 201}
    axis2 = {name = "delta_theta", start = 0.0, stop = 3.141592653589793, num = 201}

    [ep]
    axis = {name = "g_e", start = -3.0, stop = 3.0}
    n_grid = 401
    tol_disc = 1e-9
    two_d = false        # true: search the [scan] plane instead

    [evolve]             # EvolveSpec fields
    [asym]
    axis = {name = "g_e", start = -3.0, stop = 3.0, num = 61}
    t_max = 20.0
    n_steps = 401
    identical = true

    [oracle]
    gamma_a_schedule = [65.0, 130.0, 260.0, 520.0]

    [output]
    path = "out.csv"
    format = "csv"       # or "json"
    seed = 0
    threads = 1

Precedence: ``--set`` flags override the file, the file overrides defaults.
"""

from __future__ import annotations

import copy
import difflib
import math
import sys
import warnings
from dataclasses import dataclass, field, fields

from .dynamics import EvolveSpec
from .errors import ConfigError, ParseError, UnitSanityWarning, UnknownKey
from .model import CircuitParams
from .sweep import SweepAxis

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

_AXIS_KEYS = ("name", "start", "stop", "num", "values")

SCHEMA = {
    "circuit": tuple(f.name for f in fields(CircuitParams)),
    "scan": ("axis1", "axis2"),
    "ep": ("axis", "n_grid", "tol_disc", "two_d"),
    "evolve": tuple(f.name for f in fields(EvolveSpec)),
    "asym": ("axis", "t_max", "n_steps", "identical"),
    "oracle": ("gamma_a_schedule",),
    "output": ("path", "format", "seed", "threads"),
}

_FREQ_FIELDS = ("omega_a", "omega_q", "omega_c")
_RATE_FIELDS = ("gamma_q", "gamma_a", "g_xy", "g_qc", "lambda_q", "g_e", "gamma_c")

DEFAULTS = {
    "scan": {
        "axis1": {"name": "g_e", "start": -3.0, "stop": 3.0, "num": 201},
        "axis2": {"name": "delta_theta", "start": 0.0, "stop": math.pi, "num": 201},
    },
    "ep": {"axis": {"name": "g_e", "start": -3.0, "stop": 3.0}, "n_grid": 401, "tol_disc": 1e-9, "two_d": False},
    "asym": {
        "axis": {"name": "g_e", "start": -3.0, "stop": 3.0, "num": 61},
        "t_max": 20.0,
        "n_steps": 401,
        "identical": True,
    },
    "oracle": {"gamma_a_schedule": [65.0, 130.0, 260.0, 520.0]},
    "output": {"path": None, "format": "csv", "seed": 0, "threads": 1},
}


@dataclass
class RunConfig:
    circuit: CircuitParams = field(default_factory=CircuitParams)
    scan_axes: tuple[SweepAxis, SweepAxis] = None
    ep_axis: SweepAxis = None
    ep_n_grid: int = 401
    ep_tol_disc: float = 1e-9
    ep_two_d: bool = False
    evolve: EvolveSpec = field(default_factory=EvolveSpec)
    asym_axis: SweepAxis = None
    asym_t_max: float = 20.0
    asym_n_steps: int = 401
    asym_identical: bool = True
    gamma_a_schedule: tuple[float, ...] = (65.0, 130.0, 260.0, 520.0)
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    threads: int = 1
    raw: dict = field(default_factory=dict, repr=False)

    def header(self) -> dict:
        """Fully resolved parameter set, echoed at the top of every output file."""
        out = {f"circuit.{k}": v for k, v in self.circuit.as_dict().items()}
        return out


def _nearest(key, options):
    hit = difflib.get_close_matches(key, options, n=1, cutoff=0.0)
    return hit[0] if hit else None


def _check_keys(doc):
    for section, body in doc.items():
        if section not in SCHEMA:
            raise UnknownKey(section, "<top level>", _nearest(section, list(SCHEMA)))
        if not isinstance(body, dict):
            raise ParseError(f"[{section}] must be a table")
        for key, value in body.items():
            if key not in SCHEMA[section]:
                raise UnknownKey(key, section, _nearest(key, SCHEMA[section]))
            if key in ("axis", "axis1", "axis2"):
                if not isinstance(value, dict):
                    raise ParseError(f"{section}.{key} must be a table")
                for k in value:
                    if k not in _AXIS_KEYS:
                        raise UnknownKey(k, f"{section}.{key}", _nearest(k, _AXIS_KEYS))


def _unit_sanity(circuit):
    for name in _FREQ_FIELDS:
        vals = circuit.get(name)
        if vals is None:
            continue
        vals = vals if isinstance(vals, (list, tuple)) else [vals]
        if any(abs(v) < 50 for v in vals):
            warnings.warn(f"circuit.{name} = {circuit[name]} looks like GHz; values are MHz", UnitSanityWarning,
                          stacklevel=3)
    for name in _RATE_FIELDS:
        vals = circuit.get(name)
        if vals is None:
            continue
        vals = vals if isinstance(vals, (list, tuple)) else [vals]
        if any(abs(v) >= 1000 for v in vals):
            warnings.warn(f"circuit.{name} = {circuit[name]} is GHz-scale for a MHz rate/coupling",
                          UnitSanityWarning, stacklevel=3)


def _axis(spec, default_num=201):
    spec = dict(spec)
    if "values" in spec:
        return SweepAxis(spec["name"], tuple(spec["values"]))
    return SweepAxis.linspace(spec["name"], spec["start"], spec["stop"], spec.get("num", default_num))


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def parse_toml(text: str) -> dict:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        msg = str(exc).split(" (at line")[0]
        raise ParseError(msg, getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None


def _parse_value(text):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(doc: dict, assignments) -> dict:
    """Apply ``key=value`` strings. Bare keys address ``[circuit]``; dotted keys any table."""
    doc = copy.deepcopy(doc)
    for item in assignments or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"--set expects key=value, got {item!r}")
        parts = key.strip().split(".")
        if len(parts) == 1:
            parts = ["circuit"] + parts
        node = doc
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ParseError(f"cannot set {key!r}: {part!r} is not a table")
        node[parts[-1]] = _parse_value(value.strip())
    return doc


def resolve(doc: dict) -> RunConfig:
    _check_keys(doc)
    circuit = dict(doc.get("circuit", {}))
    _unit_sanity(circuit)
    merged = _merge(DEFAULTS, {k: v for k, v in doc.items() if k != "circuit"})
    try:
        params = CircuitParams(**circuit)
        evolve = EvolveSpec(**merged.get("evolve", {}))
        scan = merged["scan"]
        ep = merged["ep"]
        asym = merged["asym"]
        out = merged["output"]
        cfg = RunConfig(
            circuit=params,
            scan_axes=(_axis(scan["axis1"]), _axis(scan["axis2"])),
            ep_axis=_axis(ep["axis"], default_num=ep["n_grid"]),
            ep_n_grid=int(ep["n_grid"]),
            ep_tol_disc=float(ep["tol_disc"]),
            ep_two_d=bool(ep["two_d"]),
            evolve=evolve,
            asym_axis=_axis(asym["axis"]),
            asym_t_max=float(asym["t_max"]),
            asym_n_steps=int(asym["n_steps"]),
            asym_identical=bool(asym["identical"]),
            gamma_a_schedule=tuple(float(g) for g in merged["oracle"]["gamma_a_schedule"]),
            output_path=out["path"],
            format=str(out["format"]),
            seed=int(out["seed"]),
            threads=int(out["threads"]),
            raw=doc,
        )
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {cfg.format!r}")
    if cfg.threads < 1:
        raise ConfigError("output.threads must be >= 1")
    return cfg


def parse_config(text: str, overrides=()) -> RunConfig:
    """Parse TOML text (plus ``key=value`` overrides) into a fully resolved RunConfig.

    Raises
    ------
    ParseError
        Malformed document; ``.line`` / ``.column`` locate the problem.
    UnknownKey
        A key outside the schema; the message names the closest valid key.
    """
    return resolve(apply_overrides(parse_toml(text), overrides))


def load_config(path=None, overrides=()) -> RunConfig:
    text = "" if path is None else open(path, encoding="utf-8").read()
    return parse_config(text, overrides)
