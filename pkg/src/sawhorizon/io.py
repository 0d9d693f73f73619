"""CSV and JSON writers with reproducible float formatting."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .density import DensityProfile
from .horizon import HorizonReport
from .speed import SpeedProfile
from .wave import ProbeSeries, RayTrace

__all__ = [
    "fmt",
    "write_csv",
    "read_csv",
    "write_json",
    "sha256",
    "write_density_csv",
    "write_speed_csv",
    "write_horizon_json",
    "write_probes_csv",
    "write_rays_csv",
]


def fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, columns: dict, meta: dict | None = None) -> Path:
    """Write equal-length ``columns`` with ``# key=value`` metadata lines on top."""
    path = Path(path)
    names = list(columns)
    cols = [c if isinstance(c, list) else np.asarray(c).reshape(-1) for c in columns.values()]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise ValueError("CSV columns differ in length")
    lines = [f"# {k}={fmt(v)}" for k, v in (meta or {}).items()]
    lines.append(",".join(names))
    for row in zip(*cols):
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_csv(path) -> tuple[dict, dict]:
    """Inverse of :func:`write_csv` for numeric columns; returns ``(meta, columns)``."""
    meta, header, rows = {}, None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    columns = {}
    for j, name in enumerate(header or []):
        values = [r[j] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = values
    return meta, columns


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, data) -> Path:
    path = Path(path)
    text = json.dumps(_jsonable(data), indent=2, ensure_ascii=False, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")
    return path


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_density_csv(path, profile: DensityProfile, meta: dict | None = None) -> Path:
    head = {"provenance": profile.provenance, **(meta or {})}
    return write_csv(path, {"x": profile.x, "n": profile.n, "dn_dx": profile.dn_dx}, head)


def write_speed_csv(path, sp: SpeedProfile, meta: dict | None = None) -> Path:
    head = {
        "provenance": sp.provenance,
        "iterations_used": sp.iterations_used,
        "residual": sp.residual,
        **(meta or {}),
    }
    return write_csv(path, {"x": sp.x, "c": sp.c, "dc_dx": sp.dc_dx}, head)


def write_horizon_json(path, report: HorizonReport) -> Path:
    return write_json(path, report.to_dict())


def write_probes_csv(path, series: ProbeSeries, meta: dict | None = None) -> Path:
    cols = {"t": series.t}
    for j, xp in enumerate(series.positions):
        cols[f"u@{fmt(float(xp))}"] = series.values[:, j]
    return write_csv(path, cols, meta)


def write_rays_csv(path, traces: list[RayTrace], meta: dict | None = None) -> Path:
    ray, direction, t, xi, exited = [], [], [], [], []
    for i, tr in enumerate(traces):
        ray += [i] * tr.t.size
        direction += [tr.direction] * tr.t.size
        exited += [tr.exited] * tr.t.size
        t += tr.t.tolist()
        xi += tr.xi.tolist()
    return write_csv(
        path, {"ray": ray, "direction": direction, "t": t, "xi": xi, "exited": exited}, meta
    )
