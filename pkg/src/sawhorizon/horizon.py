"""
Apparent horizons seen by an observer moving at constant speed ``v``.

In the comoving frame the effective line element is
``ds^2 = -[c^2(x) - v^2] dt^2 + dx^2``; horizons sit where ``c(x) = v`` and
their surface gravity is ``|dc/dx|`` there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import CODATA, MaterialParams, PhysicalConstants, validate
from .speed import SpeedProfile

__all__ = [
    "Horizon",
    "HorizonReport",
    "find_horizons",
    "surface_gravity",
    "hawking_temperature",
    "optimal_observer_speed",
]


@dataclass(frozen=True)
class Horizon:
    """One horizon. ``crossing`` reads in the +x direction: ``super_to_sub`` means
    ``c < v`` (waves cannot outrun the observer) on the left and ``c > v`` on the right."""

    x_h: float
    kappa_g: float
    T_H: float
    crossing: str  # "sub_to_super" or "super_to_sub"


@dataclass(frozen=True, eq=False)
class HorizonReport:
    observer_speed: float
    horizons: list[Horizon]
    metric_coefficient: np.ndarray
    grid_x: np.ndarray
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "observer_speed": self.observer_speed,
            "horizons": [
                {"x_h": h.x_h, "kappa_g": h.kappa_g, "T_H": h.T_H, "crossing": h.crossing}
                for h in self.horizons
            ],
            "metric_coefficient": [float(g) for g in self.metric_coefficient],
            "units": {
                "observer_speed": "m/s",
                "x_h": "m",
                "kappa_g": "1/s",
                "T_H": "K",
                "metric_coefficient": "m^2/s^2",
            },
            "notes": list(self.notes),
        }


def _bisect(f, a: float, b: float, xtol: float) -> float:
    fa = f(a)
    for _ in range(200):
        if b - a <= xtol:
            break
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def surface_gravity(sp: SpeedProfile, x_h: float) -> float:
    """``|dc/dx|`` at ``x_h``, linearly interpolated between samples."""
    x = sp.x
    if not x[0] <= x_h <= x[-1]:
        raise ValueError(f"x_h = {x_h!r} lies outside the grid")
    return float(abs(np.interp(x_h, x, sp.dc_dx)))


def hawking_temperature(kappa_g: float, pc: PhysicalConstants = CODATA) -> float:
    """``hbar kappa_g / (2 pi k_B)`` in kelvin."""
    if kappa_g < 0:
        raise ValueError(f"surface gravity must be >= 0, got {kappa_g!r}")
    return pc.hbar * kappa_g / (2.0 * math.pi * pc.k_B)


def optimal_observer_speed(m: MaterialParams) -> float:
    """Observer speed matching the middle of the speed ramp, ``c0 (1 + K2/4)``."""
    validate(m)
    return m.c0 * (1.0 + 0.25 * m.K2)


def find_horizons(
    sp: SpeedProfile, v: float, pc: PhysicalConstants = CODATA
) -> HorizonReport:
    """Locate every crossing of ``c(x) = v`` on the linearly interpolated profile.

    Sign changes of ``c - v`` between samples are bracketed and refined by
    bisection to ``1e-6`` of the grid spacing. A sample lying exactly on
    ``v`` counts once. Flat stretches with ``c == v`` are not horizons.
    """
    if not v > 0:
        raise ValueError("observer speed must be > 0")
    x, c = sp.x, sp.c
    s = c - v
    sign = np.sign(s)
    xtol = sp.grid.dx * 1e-6

    def f(xx):
        return float(np.interp(xx, x, c)) - v

    roots = []
    nz = np.flatnonzero(sign != 0)
    for a, b in zip(nz[:-1], nz[1:]):
        if sign[a] == sign[b]:
            continue
        if b == a + 1:
            x_h = _bisect(f, x[a], x[b], xtol)
        else:
            # exact zeros in between: take the centre of the zero run
            x_h = 0.5 * (x[a + 1] + x[b - 1])
        crossing = "sub_to_super" if sign[a] > 0 else "super_to_sub"
        roots.append((x_h, crossing))

    horizons = []
    for x_h, crossing in roots:
        kg = surface_gravity(sp, x_h)
        horizons.append(Horizon(float(x_h), kg, hawking_temperature(kg, pc), crossing))
    return HorizonReport(float(v), horizons, -(c**2 - v**2), x.copy())
