"""
Run configuration.

Configs are INI files read with :mod:`configparser`. Every section and key is
checked against :data:`SCHEMA`; anything unknown is a :class:`ConfigError`.
Scalars can be overridden with dotted paths, e.g. ``material.K2=1e-3``.

Example::

    [material]
    K2 = 1e-3

    [observer]
    v = optimal

    [sweep]
    parameter = material.kappa_s
    values = 1e8, 1e9
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .constants import MaterialParams, ParameterError, gaas_defaults, validate
from .density import Grid1D

__all__ = ["ConfigError", "RunConfig", "load_config", "apply_override", "SCHEMA", "OUTPUT_ENV"]

OUTPUT_ENV = "SAWHORIZON_OUTPUT"


class ConfigError(ValueError):
    """Malformed configuration. ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _float(s):
    return float(s)


def _int(s):
    v = float(s)
    if v != int(v):
        raise ValueError(f"{s!r} is not an integer")
    return int(v)


def _bool(s):
    t = str(s).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{s!r} is not a boolean")


def _auto_float(s):
    return None if str(s).strip().lower() in ("auto", "") else float(s)


def _observer(s):
    return "optimal" if str(s).strip().lower() == "optimal" else float(s)


def _floats(s):
    if isinstance(s, (list, tuple)):
        return [float(v) for v in s]
    return [float(v) for v in str(s).replace(";", ",").split(",") if v.strip()]


def _text(s):
    return str(s).strip()


SCHEMA = {
    "material": {
        "c0": _float, "K2": _float, "kappa_s": _float, "sigma": _float,
        "omega": _float, "n_max": _float, "g_factor": _float, "name": _text,
    },
    "grid": {"x_min": _auto_float, "x_max": _auto_float, "n_points": _int},
    "observer": {"v": _observer},
    "speed": {"tol": _float, "max_iter": _int},
    "solver": {"dt": _auto_float, "boundary": _text, "cfl_safety": _float},
    "wave": {
        "enabled": _bool, "pulse_center": _float, "pulse_width": _float,
        "t_end": _float, "probes": _floats, "every": _int,
    },
    "rays": {"enabled": _bool, "seeds": _floats, "t_end": _auto_float},
    "thermometer": {
        "B": _float, "g_factor": _float, "substrate_gap": _float,
        "base_rate": _auto_float, "phonon_speed": _float, "t_max": _auto_float,
        "n_samples": _int, "p_up0": _float,
    },
    "sweep": {"parameter": _text, "values": _floats},
    "output": {"directory": _text, "formats": _text},
}


@dataclass(frozen=True)
class RunConfig:
    """All inputs of a pipeline run.

    Grid bounds left as ``None`` default to +-8/kappa_s; a ``None`` time step
    is picked from the CFL bound. Wave pulse positions, probe positions and ray
    seeds (offsets from the horizon) are in units of 1/kappa_s; the wave
    ``t_end`` is in units of 1/(kappa_s c0). A ``None`` ray ``t_end`` means
    ``ln(1000)`` e-folds of the piecewise surface gravity.
    """

    material: MaterialParams = field(default_factory=gaas_defaults)
    grid: dict = field(default_factory=lambda: {"x_min": None, "x_max": None, "n_points": 1601})
    observer: dict = field(default_factory=lambda: {"v": "optimal"})
    speed: dict = field(default_factory=lambda: {"tol": 1e-12, "max_iter": 100})
    solver: dict = field(
        default_factory=lambda: {"dt": None, "boundary": "absorbing", "cfl_safety": 0.9}
    )
    wave: dict = field(
        default_factory=lambda: {
            "enabled": True, "pulse_center": -4.0, "pulse_width": 0.5,
            "t_end": 8.0, "probes": [-6.0, 0.0, 6.0], "every": 10,
        }
    )
    rays: dict = field(
        default_factory=lambda: {
            "enabled": True, "seeds": [-1.0, -0.1, -0.01, 0.001, 0.01, 0.1, 1.0], "t_end": None,
        }
    )
    thermometer: dict = field(
        default_factory=lambda: {
            "B": 1.0, "g_factor": 0.44, "substrate_gap": 100e-9, "base_rate": None,
            "phonon_speed": 1000.0, "t_max": None, "n_samples": 51, "p_up0": 0.5,
        }
    )
    sweep: dict | None = None
    output: dict = field(default_factory=lambda: {"directory": None, "formats": "csv,json"})

    def grid1d(self) -> Grid1D:
        k = self.material.kappa_s
        x_min = self.grid["x_min"] if self.grid["x_min"] is not None else -8.0 / k
        x_max = self.grid["x_max"] if self.grid["x_max"] is not None else 8.0 / k
        return Grid1D(x_min, x_max, self.grid["n_points"])

    def output_dir(self) -> Path:
        d = self.output.get("directory")
        return Path(d or os.environ.get(OUTPUT_ENV) or "sawhorizon_out")

    def echo(self) -> dict:
        """Plain-dict view used in metadata (output location excluded)."""
        return {
            "material": {f.name: getattr(self.material, f.name) for f in fields(self.material)},
            "grid": dict(self.grid),
            "observer": dict(self.observer),
            "speed": dict(self.speed),
            "solver": dict(self.solver),
            "wave": dict(self.wave),
            "rays": dict(self.rays),
            "thermometer": dict(self.thermometer),
        }

    def with_value(self, path: str, value) -> "RunConfig":
        return apply_override(self, path, value)


def _validate(cfg: RunConfig) -> RunConfig:
    try:
        validate(cfg.material)
    except ParameterError as exc:
        raise ConfigError(f"material.{exc.field}", str(exc)) from exc
    try:
        cfg.grid1d()
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from exc
    if cfg.solver["boundary"] not in ("periodic", "reflecting", "absorbing"):
        raise ConfigError("solver.boundary", f"unknown boundary {cfg.solver['boundary']!r}")
    formats = {f.strip() for f in cfg.output["formats"].split(",") if f.strip()}
    if not formats <= {"csv", "json"}:
        raise ConfigError("output.formats", "allowed formats are csv, json")
    if cfg.sweep is not None:
        sw = cfg.sweep
        if "parameter" not in sw or "values" not in sw:
            raise ConfigError("sweep", "needs both 'parameter' and 'values'")
        if not sw["values"]:
            raise ConfigError("sweep.values", "must be non-empty")
        if not all(math.isfinite(v) for v in sw["values"]):
            raise ConfigError("sweep.values", "must be finite")
        section, _, key = sw["parameter"].partition(".")
        if section not in SCHEMA or key not in SCHEMA[section] or section in ("sweep", "output"):
            raise ConfigError("sweep.parameter", f"unknown parameter path {sw['parameter']!r}")
    return cfg


def apply_override(cfg: RunConfig, path: str, raw) -> RunConfig:
    """Return a copy of ``cfg`` with ``section.key`` set to ``raw`` (parsed by the schema)."""
    section, _, key = path.partition(".")
    if section not in SCHEMA:
        raise ConfigError(path, f"unknown section {section!r}")
    if key not in SCHEMA[section]:
        raise ConfigError(path, f"unknown key {key!r} in [{section}]")
    try:
        value = SCHEMA[section][key](raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, f"cannot parse {raw!r}: {exc}") from exc
    if section == "material":
        return _validate(replace(cfg, material=replace(cfg.material, **{key: value})))
    current = getattr(cfg, section)
    updated = dict(current or {})
    updated[key] = value
    return _validate(replace(cfg, **{section: updated}))


def load_config(path=None, overrides=(), preset: str = "gaas") -> RunConfig:
    """Build a :class:`RunConfig` from a preset, an optional INI file and overrides."""
    if preset != "gaas":
        raise ConfigError("preset", f"unknown preset {preset!r}")
    cfg = RunConfig()
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str  # keys are case-sensitive (K2, B)
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(str(path), f"unreadable config: {exc}") from exc
        except OSError as exc:
            raise ConfigError(str(path), str(exc)) from exc
        for section in parser.sections():
            if section not in SCHEMA:
                raise ConfigError(section, "unknown section")
            for key, raw in parser.items(section):
                if key not in SCHEMA[section]:
                    raise ConfigError(f"{section}.{key}", "unknown key")
        if parser.has_section("sweep"):
            cfg = replace(cfg, sweep={})
        for section in parser.sections():
            for key, raw in parser.items(section):
                cfg = _set_unchecked(cfg, section, key, raw)
    for item in overrides:
        path_, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(item, "override must look like section.key=value")
        section, _, key = path_.strip().partition(".")
        if section not in SCHEMA or key not in SCHEMA[section]:
            raise ConfigError(path_.strip(), "unknown key")
        if section == "sweep" and cfg.sweep is None:
            cfg = replace(cfg, sweep={})
        cfg = _set_unchecked(cfg, section, key, raw.strip())
    return _validate(cfg)


def _set_unchecked(cfg: RunConfig, section: str, key: str, raw: str) -> RunConfig:
    try:
        value = SCHEMA[section][key](raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}.{key}", f"cannot parse {raw!r}: {exc}") from exc
    if section == "material":
        return replace(cfg, material=replace(cfg.material, **{key: value}))
    updated = dict(getattr(cfg, section) or {})
    updated[key] = value
    return replace(cfg, **{section: updated})
