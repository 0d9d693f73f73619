"""
End-to-end runs: density -> speed -> horizons -> waves and rays -> thermometer.

Every stage writes its artefacts into one output directory; ``run_pipeline``
finishes with ``manifest.json`` listing inputs, versions and checksums.
Data files carry no timestamps, so identical configs give identical bytes.
"""

from __future__ import annotations

import math
import platform
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import RunConfig
from .constants import CODATA
from .density import charge_conservation, convolve_density, smoothed_density
from .horizon import HorizonReport, find_horizons, optimal_observer_speed
from .io import (
    sha256,
    write_csv,
    write_density_csv,
    write_horizon_json,
    write_json,
    write_probes_csv,
    write_rays_csv,
    write_speed_csv,
)
from .speed import max_gradient, piecewise_speed, solve_speed_fixed_point
from .spin import (
    RatioUnderflowWarning,
    SpinSystem,
    ThermometerConfig,
    evolve_series,
    infer_temperature,
    is_measurable,
    rates_at_temperature,
    steady_state_ratio,
    suppression_factor,
    zeeman_splitting,
)
from .wave import (
    FitError,
    SolverConfig,
    WaveField,
    fit_horizon_exponent,
    run,
    trace_characteristic,
)

__all__ = [
    "PipelineError",
    "Outputs",
    "stage",
    "run_density",
    "run_speed",
    "run_horizon",
    "run_wave",
    "run_rays",
    "run_thermo",
    "run_pipeline",
    "sweep",
    "observer_speed",
    "thermometer_config",
]

# order-of-magnitude GaAs estimate that the formulas below do not reproduce
LITERATURE_GAAS_T_H = 1e-3


class PipelineError(RuntimeError):
    """A stage failed; ``module`` names it."""

    def __init__(self, module: str, exc: BaseException):
        super().__init__(f"{module}: {exc}")
        self.module = module
        self.__cause__ = exc


class stage:
    """Context manager re-raising any model error as :class:`PipelineError`."""

    def __init__(self, module: str):
        self.module = module

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and not isinstance(exc, PipelineError) and isinstance(exc, Exception):
            raise PipelineError(self.module, exc) from exc
        return False


@dataclass
class Outputs:
    directory: Path
    csv: bool = True
    json: bool = True

    def __post_init__(self):
        self.directory = Path(self.directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.files: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.directory / name
        self.files.append(p)
        return p

    @classmethod
    def for_config(cls, cfg: RunConfig, directory=None) -> "Outputs":
        formats = {f.strip() for f in cfg.output["formats"].split(",")}
        return cls(Path(directory) if directory else cfg.output_dir(), "csv" in formats, "json" in formats)


def material_meta(cfg: RunConfig) -> dict:
    grid = cfg.grid1d()
    meta = {f"material.{k}": v for k, v in cfg.echo()["material"].items()}
    meta.update({"grid.x_min": grid.x_min, "grid.x_max": grid.x_max, "grid.n_points": grid.n_points})
    meta["units"] = "x m; n n_max; dn_dx n_max/m; c m/s; dc_dx 1/s"
    return meta


def observer_speed(cfg: RunConfig) -> float:
    v = cfg.observer["v"]
    return optimal_observer_speed(cfg.material) if v == "optimal" else float(v)


def run_density(cfg: RunConfig, out: Outputs | None = None):
    with stage("density_profile"):
        grid = cfg.grid1d()
        k = cfg.material.kappa_s
        profile = smoothed_density(grid, k)
        diag = {"charge_residual_times_kappa_s": charge_conservation(profile, grid) * k}
        try:
            conv = convolve_density(grid, k)
            diag["convolution_max_abs_deviation"] = float(np.max(np.abs(conv.n - profile.n)))
        except ValueError as exc:
            diag["convolution_max_abs_deviation"] = None
            diag["convolution_skipped"] = str(exc)
        if out is not None and out.csv:
            write_density_csv(out.path("density.csv"), profile, material_meta(cfg))
    return profile, diag


def run_speed(cfg: RunConfig, profile, out: Outputs | None = None):
    m = cfg.material
    with stage("saw_speed"):
        fp = solve_speed_fixed_point(profile, m, cfg.speed["tol"], cfg.speed["max_iter"])
        pw = piecewise_speed(m, profile.grid)
        formula = m.kappa_s * m.K2 * m.c0 / 8.0
        g_fp, x_fp = max_gradient(fp)
        g_pw, x_pw = max_gradient(pw)
        diag = {
            "gradient_formula": formula,
            "max_gradient_piecewise": g_pw,
            "max_gradient_piecewise_at": x_pw,
            "max_gradient_fixed_point": g_fp,
            "max_gradient_fixed_point_at": x_fp,
            "max_gradient_fixed_point_at_times_kappa_s": x_fp * m.kappa_s,
            "gradient_ratio_fixed_point_to_formula": g_fp / formula if formula > 0 else None,
            "fixed_point_iterations": fp.iterations_used,
            "fixed_point_residual": fp.residual,
        }
        if out is not None and out.csv:
            meta = material_meta(cfg)
            write_speed_csv(out.path("speed_fixed_point.csv"), fp, meta)
            write_speed_csv(out.path("speed_piecewise.csv"), pw, meta)
    return fp, pw, diag


def _temperature_note(report: HorizonReport) -> list[str]:
    if not report.horizons:
        return []
    T = report.horizons[0].T_H
    return [
        f"Computed T_H = {T:.6g} K from hbar*kappa_g/(2*pi*k_B). The order-of-magnitude "
        f"estimate of {LITERATURE_GAAS_T_H:g} K often quoted for GaAs is not reproduced by "
        f"this formula at these constants (estimate / computed = {LITERATURE_GAAS_T_H / T:.3g}); "
        "the computed value is reported as is."
    ]


def run_horizon(cfg: RunConfig, fp, pw, out: Outputs | None = None):
    with stage("horizon_thermo"):
        v = observer_speed(cfg)
        reports = {}
        for name, sp in (("fixed_point", fp), ("piecewise", pw)):
            rep = find_horizons(sp, v, CODATA)
            rep.notes.extend(_temperature_note(rep))
            rep.notes.append(f"speed profile provenance: {sp.provenance}")
            reports[name] = rep
            if out is not None and out.json:
                write_horizon_json(out.path(f"horizon_{name}.json"), rep)
    return reports


def run_wave(cfg: RunConfig, sp, out: Outputs | None = None):
    m = cfg.material
    w = cfg.wave
    with stage("wave_sim"):
        grid = sp.grid
        scfg = cfg.solver
        if scfg["dt"] is None:
            solver = SolverConfig.from_cfl(grid, sp, scfg["boundary"], scfg["cfl_safety"])
        else:
            solver = SolverConfig(scfg["dt"], scfg["boundary"], scfg["cfl_safety"])
        x = grid.x
        scale = 1.0 / m.kappa_s
        xc, width = w["pulse_center"] * scale, w["pulse_width"] * scale
        u0 = np.exp(-(((x - xc) / width) ** 2))
        # right-moving pulse: u_t = -c u_x
        v0 = sp.c * 2.0 * (x - xc) / width**2 * u0
        wf = WaveField.from_initial(grid, u0, v0, sp, solver)
        t_end = w["t_end"] / (m.kappa_s * m.c0)
        probes = [p * scale for p in w["probes"]]
        wf, series = run(wf, sp, solver, t_end, probes, w["every"])
        diag = {
            "wave_cfl_number": solver.cfl_number(grid, sp),
            "wave_dt": solver.dt,
            "wave_steps": wf.step_count,
            "wave_boundary": solver.boundary,
        }
        if out is not None and out.csv:
            meta = {"dt": solver.dt, "cfl_number": diag["wave_cfl_number"], "boundary": solver.boundary,
                    "pulse_center": xc, "pulse_width": width, "speed_provenance": sp.provenance}
            write_probes_csv(out.path("wave_probes.csv"), series, meta)
    return wf, series, diag


def run_rays(cfg: RunConfig, profiles: dict, reports: dict, out: Outputs | None = None):
    m = cfg.material
    with stage("wave_sim"):
        v = observer_speed(cfg)
        formula = m.kappa_s * m.K2 * m.c0 / 8.0
        t_end = cfg.rays["t_end"]
        if t_end is None:
            t_end = math.log(1e3) / formula if formula > 0 else 1e-6
        diag = {}
        for name, sp in profiles.items():
            rep = reports[name]
            x_h = rep.horizons[0].x_h if rep.horizons else 0.0
            traces, fits = [], []
            for seed in cfg.rays["seeds"]:
                xi0 = x_h + seed / m.kappa_s
                if not sp.x[0] <= xi0 <= sp.x[-1]:
                    continue
                tr = trace_characteristic(sp, v, xi0, "+", t_end)
                traces.append(tr)
                if rep.horizons and 0 < abs(seed) <= 0.1:
                    try:
                        fits.append(fit_horizon_exponent(tr, x_h, 1.0 / m.kappa_s))
                    except FitError:
                        pass
            diag[f"ray_fit_exponents_{name}"] = fits
            if rep.horizons:
                diag[f"surface_gravity_{name}"] = rep.horizons[0].kappa_g
            if out is not None and out.csv:
                meta = {"observer_speed": v, "t_end": t_end, "x_h": x_h, "speed_provenance": name}
                write_rays_csv(out.path(f"rays_{name}.csv"), traces, meta)
    return diag


def thermometer_config(cfg: RunConfig) -> ThermometerConfig:
    t = cfg.thermometer
    return ThermometerConfig(
        B=t["B"], g_factor=t["g_factor"], substrate_gap=t["substrate_gap"],
        base_rate=t["base_rate"], phonon_speed=t["phonon_speed"],
    )


def run_thermo(cfg: RunConfig, T_H: float | None, out: Outputs | None = None):
    with stage("spin_thermo"):
        tc = thermometer_config(cfg)
        dE = zeeman_splitting(tc)
        T = T_H if T_H is not None else 0.0
        g_up, g_down = rates_at_temperature(tc, T)
        report = {
            "B": tc.B,
            "g_factor": tc.g_factor,
            "substrate_gap": tc.substrate_gap,
            "phonon_speed": tc.phonon_speed,
            "base_rate": tc.base_rate,
            "suppression_factor": suppression_factor(tc),
            "T_H": T_H,
            "delta_E": dE,
            "gamma_up": g_up,
            "gamma_down": g_down,
            "thermalization_time": 1.0 / (g_up + g_down) if g_up + g_down > 0 else None,
            "r": None,
            "r_underflow": False,
            "measurable": False,
            "T_H_inferred": None,
            "sensitivity": dE / (CODATA.k_B * T_H) if T_H else None,
        }
        if T_H:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", RatioUnderflowWarning)
                r = steady_state_ratio(T_H, dE)
            report["r"] = r
            report["r_underflow"] = any(issubclass(w.category, RatioUnderflowWarning) for w in caught)
            report["measurable"] = is_measurable(r)
            if 0 < r < 1:
                report["T_H_inferred"], report["sensitivity"] = infer_temperature(r, dE)
        p0 = cfg.thermometer["p_up0"]
        sys = SpinSystem(dE, g_up, g_down, p0, 1.0 - p0)
        t_max = cfg.thermometer["t_max"] or 5.0 * sys.thermalization_time
        t = np.linspace(0.0, t_max, cfg.thermometer["n_samples"])
        p_up, p_down = evolve_series(sys, t)
        if out is not None and out.json:
            write_json(out.path("thermo.json"), report)
        if out is not None and out.csv:
            write_csv(out.path("populations.csv"), {"t": t, "p_up": p_up, "p_down": p_down},
                      {"delta_E": dE, "gamma_up": g_up, "gamma_down": g_down})
    return report


def _versions() -> dict:
    return {
        "sawhorizon": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def run_pipeline(cfg: RunConfig, directory=None) -> dict:
    """Run every stage and write the manifest. Returns the manifest dict."""
    out = Outputs.for_config(cfg, directory)
    profile, diag = run_density(cfg, out)
    fp, pw, d = run_speed(cfg, profile, out)
    diag.update(d)
    reports = run_horizon(cfg, fp, pw, out)
    for name, rep in reports.items():
        diag[f"n_horizons_{name}"] = len(rep.horizons)
        diag[f"T_H_{name}"] = rep.horizons[0].T_H if rep.horizons else None
    if cfg.wave["enabled"]:
        diag.update(run_wave(cfg, fp, out)[2])
    if cfg.rays["enabled"]:
        diag.update(run_rays(cfg, {"fixed_point": fp, "piecewise": pw}, reports, out))
    pw_h = reports["piecewise"].horizons
    thermo = run_thermo(cfg, pw_h[0].T_H if pw_h else None, out)
    diag["thermo_r_underflow"] = thermo["r_underflow"]
    manifest = {
        "created": datetime.now(timezone.utc).isoformat(),
        "versions": _versions(),
        "inputs": cfg.echo(),
        "diagnostics": diag,
        "notes": reports["piecewise"].notes[:1],
        "artifacts": [
            {"file": p.name, "sha256": sha256(p), "bytes": p.stat().st_size} for p in out.files
        ],
    }
    write_json(out.directory / "manifest.json", manifest)
    return manifest


SUMMARY_COLUMNS = (
    "value", "status", "n_horizons", "kappa_g", "T_H",
    "n_horizons_fixed_point", "kappa_g_fixed_point", "T_H_fixed_point", "message",
)


def _sweep_one(args):
    cfg, path, value, directory = args
    row = dict.fromkeys(SUMMARY_COLUMNS, math.nan)
    row.update(value=value, status="ok", message="")
    try:
        manifest = run_pipeline(cfg.with_value(path, value), directory)
        diag = manifest["diagnostics"]
        row["n_horizons"] = diag["n_horizons_piecewise"]
        row["n_horizons_fixed_point"] = diag["n_horizons_fixed_point"]
        for suffix, key in (("", "piecewise"), ("_fixed_point", "fixed_point")):
            T = diag[f"T_H_{key}"]
            row["T_H" + suffix] = T if T is not None else math.nan
            kg = diag.get(f"surface_gravity_{key}")
            if kg is None and T is not None:
                kg = T * 2.0 * math.pi * CODATA.k_B / CODATA.hbar
            row["kappa_g" + suffix] = kg if kg is not None else math.nan
    except Exception as exc:  # recorded per run, the sweep carries on
        row.update(status="error", message=str(exc).replace(",", ";").replace("\n", " "))
    return row


def sweep(cfg: RunConfig, directory=None, jobs: int = 1) -> Path:
    """Run the pipeline once per sweep value and write ``sweep_summary.csv``."""
    if cfg.sweep is None:
        raise PipelineError("cli_io", ValueError("config has no [sweep] section"))
    root = Path(directory) if directory else cfg.output_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = cfg.sweep["parameter"]
    base = replace(cfg, sweep=None)
    tasks = [(base, path, v, root / f"run_{i:03d}") for i, v in enumerate(cfg.sweep["values"])]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))
    else:
        rows = [_sweep_one(t) for t in tasks]
    columns = {c: [r[c] for r in rows] for c in SUMMARY_COLUMNS}
    summary = write_csv(root / "sweep_summary.csv", columns, {"parameter": path})
    write_json(
        root / "sweep_manifest.json",
        {
            "created": datetime.now(timezone.utc).isoformat(),
            "versions": _versions(),
            "parameter": path,
            "values": cfg.sweep["values"],
            "runs": [str(t[3].name) for t in tasks],
            "summary_sha256": sha256(summary),
        },
    )
    return summary

