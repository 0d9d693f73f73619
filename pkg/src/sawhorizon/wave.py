"""
Lab-frame wave propagation and comoving-frame characteristics.

The PDE ``u_tt = d/dx (c^2(x) u_x)`` is advanced with a leapfrog scheme in
flux form, with ``c^2`` averaged arithmetically onto cell faces so the update
stays self-adjoint and conserves a discrete energy.

Sound rays seen by an observer moving at ``v`` follow
``dxi/dt = +-c(xi) - v``; near a horizon they separate exponentially at the
surface gravity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .density import Grid1D
from .speed import SpeedProfile

__all__ = [
    "StabilityError",
    "CFLError",
    "FitError",
    "SolverConfig",
    "WaveField",
    "ProbeSeries",
    "RayTrace",
    "step",
    "run",
    "energy",
    "trace_characteristic",
    "fit_horizon_exponent",
]

BOUNDARIES = ("periodic", "reflecting", "absorbing")


class StabilityError(FloatingPointError):
    """The wave field became non-finite or grew without bound."""


class CFLError(ValueError):
    pass


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Time step and boundary treatment.

    ``check_cfl=False`` lets a deliberately unstable step through (used to
    exercise the blow-up detector). A run aborts once ``max|u|`` exceeds
    ``blowup_factor`` times the initial amplitude.
    """

    dt: float
    boundary: str = "periodic"
    cfl_safety: float = 0.9
    check_cfl: bool = True
    blowup_factor: float = 1e6

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")

    @classmethod
    def from_cfl(
        cls, grid: Grid1D, sp: SpeedProfile, boundary: str = "periodic", cfl_safety: float = 0.9
    ) -> "SolverConfig":
        return cls(cfl_safety * grid.dx / float(np.max(sp.c)), boundary, cfl_safety)

    def cfl_number(self, grid: Grid1D, sp: SpeedProfile) -> float:
        return self.dt * float(np.max(sp.c)) / grid.dx

    def check(self, grid: Grid1D, sp: SpeedProfile) -> None:
        if self.check_cfl and self.cfl_number(grid, sp) > self.cfl_safety * (1 + 1e-12):
            raise CFLError(
                f"CFL number {self.cfl_number(grid, sp):.6g} exceeds {self.cfl_safety:g}"
            )


@dataclass(frozen=True, eq=False)
class WaveField:
    """Two consecutive time levels ``u_prev`` (t - dt) and ``u_curr`` (t)."""

    grid: Grid1D
    u_prev: np.ndarray
    u_curr: np.ndarray
    time: float
    dt: float
    step_count: int = 0
    amplitude_ref: float = 0.0

    @classmethod
    def from_levels(cls, grid: Grid1D, u_prev, u_curr, dt: float, time: float = 0.0) -> "WaveField":
        u_prev = np.asarray(u_prev, dtype=float)
        u_curr = np.asarray(u_curr, dtype=float)
        ref = float(max(np.max(np.abs(u_prev)), np.max(np.abs(u_curr))))
        return cls(grid, u_prev, u_curr, time, dt, 0, ref)

    @classmethod
    def from_initial(
        cls, grid: Grid1D, u0, v0, sp: SpeedProfile, cfg: SolverConfig
    ) -> "WaveField":
        """Start from displacement ``u0`` and velocity ``v0`` at t = 0.

        The level at ``-dt`` comes from a second-order Taylor expansion, which
        makes the first leapfrog step equal to
        ``u0 + dt v0 + dt^2/2 d/dx(c^2 du0/dx)``.
        """
        u0 = np.asarray(u0, dtype=float)
        v0 = np.asarray(v0, dtype=float)
        dt = cfg.dt
        lap = _operator(u0, _face_c2(sp.c, cfg.boundary), grid.dx, cfg.boundary)
        u_prev = u0 - dt * v0 + 0.5 * dt**2 * lap
        return cls(grid, u_prev, u0.copy(), 0.0, dt, 0, float(np.max(np.abs(u0))))

    @property
    def x(self) -> np.ndarray:
        return self.grid.x


def _face_c2(c: np.ndarray, boundary: str) -> np.ndarray:
    c2 = c**2
    if boundary == "periodic":
        return 0.5 * (c2 + np.roll(c2, -1))  # face i+1/2, last one wraps
    return 0.5 * (c2[:-1] + c2[1:])


def _operator(u: np.ndarray, c2f: np.ndarray, dx: float, boundary: str) -> np.ndarray:
    if boundary == "periodic":
        flux = c2f * (np.roll(u, -1) - u)
        return (flux - np.roll(flux, 1)) / dx**2
    flux = c2f * (u[1:] - u[:-1])
    out = np.zeros_like(u)
    out[1:-1] = flux[1:] - flux[:-1]
    # zero flux through the outer faces
    out[0] = flux[0]
    out[-1] = -flux[-1]
    return out / dx**2


def step(wf: WaveField, sp: SpeedProfile, cfg: SolverConfig) -> WaveField:
    """One leapfrog update ``u+ = 2u - u- + dt^2 d/dx(c^2 du/dx)``."""
    if sp.grid != wf.grid:
        raise ValueError("speed profile and wave field live on different grids")
    cfg.check(wf.grid, sp)
    return _step(wf, sp.c, _face_c2(sp.c, cfg.boundary), cfg)


def _step(wf: WaveField, c: np.ndarray, c2f: np.ndarray, cfg: SolverConfig) -> WaveField:
    dt, dx = cfg.dt, wf.grid.dx
    u, um = wf.u_curr, wf.u_prev
    up = 2.0 * u - um + dt**2 * _operator(u, c2f, dx, cfg.boundary)
    if cfg.boundary == "absorbing":
        # first-order one-way wave equations at both ends
        a0 = (c[0] * dt - dx) / (c[0] * dt + dx)
        a1 = (c[-1] * dt - dx) / (c[-1] * dt + dx)
        up[0] = u[1] + a0 * (up[1] - u[0])
        up[-1] = u[-2] + a1 * (up[-2] - u[-1])
    peak = float(np.max(np.abs(up)))
    if not math.isfinite(peak):
        raise StabilityError(f"non-finite field after step {wf.step_count + 1}")
    if wf.amplitude_ref > 0 and peak > cfg.blowup_factor * wf.amplitude_ref:
        raise StabilityError(
            f"field grew by more than {cfg.blowup_factor:g} after step {wf.step_count + 1}"
        )
    return replace(wf, u_prev=u, u_curr=up, time=wf.time + dt, step_count=wf.step_count + 1)


@dataclass(frozen=True, eq=False)
class ProbeSeries:
    positions: np.ndarray
    t: np.ndarray
    values: np.ndarray  # shape (len(t), len(positions))


def run(
    wf: WaveField,
    sp: SpeedProfile,
    cfg: SolverConfig,
    t_end: float,
    probes=(),
    every: int = 1,
) -> tuple[WaveField, ProbeSeries]:
    """Step until ``t_end`` (absolute time), sampling ``u`` at ``probes`` every
    ``every`` steps. Probe values are linearly interpolated in x."""
    if sp.grid != wf.grid:
        raise ValueError("speed profile and wave field live on different grids")
    cfg.check(wf.grid, sp)
    if abs(cfg.dt - wf.dt) > 1e-12 * wf.dt:
        raise ValueError("solver dt differs from the dt the field was initialised with")
    positions = np.asarray(probes, dtype=float).reshape(-1)
    x = wf.x
    n_steps = max(0, int(math.ceil((t_end - wf.time) / cfg.dt - 1e-9)))
    c2f = _face_c2(sp.c, cfg.boundary)
    ts = [wf.time]
    vals = [np.interp(positions, x, wf.u_curr)]
    for k in range(1, n_steps + 1):
        wf = _step(wf, sp.c, c2f, cfg)
        if k % every == 0 or k == n_steps:
            ts.append(wf.time)
            vals.append(np.interp(positions, x, wf.u_curr))
    return wf, ProbeSeries(positions, np.array(ts), np.array(vals).reshape(len(ts), positions.size))


def energy(wf: WaveField, sp: SpeedProfile, boundary: str = "periodic") -> float:
    """Discrete energy ``sum[ u_t^2/2 + c^2 u_x^2/2 ] dx`` at ``t - dt/2``.

    ``u_t`` is the centred difference between the two stored levels and the
    potential term pairs face gradients of both levels, which is the quadratic
    form the leapfrog update conserves exactly for periodic and reflecting
    boundaries.
    """
    dx = wf.grid.dx
    ut = (wf.u_curr - wf.u_prev) / wf.dt
    c2f = _face_c2(sp.c, boundary)
    if boundary == "periodic":
        g1 = np.roll(wf.u_curr, -1) - wf.u_curr
        g0 = np.roll(wf.u_prev, -1) - wf.u_prev
    else:
        g1 = np.diff(wf.u_curr)
        g0 = np.diff(wf.u_prev)
    kinetic = 0.5 * np.sum(ut**2) * dx
    potential = 0.5 * np.sum(c2f * g1 * g0) / dx
    return float(kinetic + potential)


@dataclass(frozen=True, eq=False)
class RayTrace:
    direction: str
    observer_speed: float
    t: np.ndarray
    xi: np.ndarray
    exited: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.xi.tolist()))


def trace_characteristic(
    sp: SpeedProfile,
    v: float,
    xi0: float,
    direction: str,
    t_end: float,
    min_samples: int = 200,
) -> RayTrace:
    """Integrate ``dxi/dt = +-c(xi) - v`` with classical RK4.

    The step is bounded by ``0.01 / |dc/dx|`` at the current point, by one grid
    cell of travel and by ``t_end / min_samples``. A ray leaving the grid is
    truncated at its last interior sample and flagged ``exited``.
    """
    if direction not in ("+", "-"):
        raise ValueError("direction must be '+' or '-'")
    if not t_end > 0:
        raise ValueError("t_end must be > 0")
    x = sp.x
    if not x[0] <= xi0 <= x[-1]:
        raise ValueError(f"xi0 = {xi0!r} lies outside the grid")
    sgn = 1.0 if direction == "+" else -1.0
    c = sp.c
    grad = np.abs(np.nan_to_num(sp.dc_dx))
    dx = sp.grid.dx
    dt_cap = t_end / min_samples

    def rhs(xi):
        return sgn * np.interp(xi, x, c) - v

    ts = [0.0]
    xs = [float(xi0)]
    t, xi = 0.0, float(xi0)
    exited = False
    while t < t_end * (1 - 1e-14):
        kg = float(np.interp(xi, x, grad))
        speed = abs(rhs(xi))
        h = min(dt_cap, t_end - t)
        if kg > 0:
            h = min(h, 0.01 / kg)
        if speed > 0:
            h = min(h, dx / speed)
        k1 = rhs(xi)
        k2 = rhs(xi + 0.5 * h * k1)
        k3 = rhs(xi + 0.5 * h * k2)
        k4 = rhs(xi + h * k3)
        xi_new = xi + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not x[0] <= xi_new <= x[-1]:
            exited = True
            break
        t += h
        xi = xi_new
        ts.append(t)
        xs.append(xi)
    return RayTrace(direction, float(v), np.array(ts), np.array(xs), exited)


def fit_horizon_exponent(trace: RayTrace, x_h: float, window: float | None = None) -> float:
    """Exponential rate at which a ray peels away from (or falls onto) ``x_h``.

    Least-squares slope of ``ln|xi - x_h|`` against ``t`` over samples with
    ``0 < |xi - x_h| < window``. Raises :class:`FitError` for fewer than 10 usable
    samples, a separation that is not monotone, or a separation whose
    logarithm is visibly curved (local rates at the start and end of the
    trace differ by more than a factor 2).
    """
    sep = np.abs(trace.xi - x_h)
    use = sep > 0
    if window is not None:
        use &= sep < window
    t, sep = trace.t[use], sep[use]
    if t.size < 10:
        raise FitError(f"only {t.size} usable samples (need 10)")
    d = np.diff(sep)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise FitError("separation from the horizon is not monotone")
    logsep = np.log(sep)
    third = max(2, t.size // 3)
    early = np.polyfit(t[:third], logsep[:third], 1)[0]
    late = np.polyfit(t[-third:], logsep[-third:], 1)[0]
    if early == 0 or not 0.5 <= late / early <= 2.0:
        raise FitError(f"separation is not exponential (early rate {early:.3e}, late {late:.3e})")
    return float(np.polyfit(t, logsep, 1)[0])
