"""
Dynamic-quantum-dot spin thermometer.

A Zeeman-split electron spin exchanges piezophonons with the horizon's
thermal bath. ``gamma_up`` is the rate out of the upper spin level (phonon
emission) and ``gamma_down`` the rate into it (phonon absorption); the
populations relax to the Boltzmann ratio at the bath temperature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import CODATA, PhysicalConstants

__all__ = [
    "RatioUnderflowWarning",
    "ThermometerConfig",
    "SpinSystem",
    "zeeman_splitting",
    "suppression_factor",
    "rates_at_temperature",
    "evolve",
    "evolve_series",
    "steady_state",
    "steady_state_ratio",
    "infer_temperature",
    "is_measurable",
    "MEASURABLE_WINDOW",
]

# populations ratios outside this window are not resolvable in practice
MEASURABLE_WINDOW = (1e-6, 1.0 - 1e-6)


class RatioUnderflowWarning(RuntimeWarning):
    """exp(-dE / k_B T) is below the smallest positive double."""


@dataclass(frozen=True)
class ThermometerConfig:
    """Thermometer set-up.

    Attributes
    ----------
    B : float
        Magnetic field (T).
    g_factor : float
        Electron g-factor magnitude.
    substrate_gap : float
        Distance between the horizon substrate and the dot substrate (m).
    base_rate : float
        Spontaneous emission rate before the field-decay suppression (1/s).
    phonon_speed : float
        Phonon speed entering ``hbar c k = dE`` (m/s).
    """

    B: float = 1.0
    g_factor: float = 0.44
    substrate_gap: float = 100e-9
    base_rate: float | None = None
    phonon_speed: float = 1000.0

    def __post_init__(self):
        if not self.B > 0:
            raise ValueError(f"B must be > 0, got {self.B!r}")
        if not self.g_factor > 0:
            raise ValueError(f"g_factor must be > 0, got {self.g_factor!r}")
        if not self.substrate_gap >= 0:
            raise ValueError(f"substrate_gap must be >= 0, got {self.substrate_gap!r}")
        if not self.phonon_speed > 0:
            raise ValueError(f"phonon_speed must be > 0, got {self.phonon_speed!r}")
        if self.base_rate is None:
            # total zero-temperature rate of 1/s at B = 1 T
            ref = replace(self, B=1.0, base_rate=1.0)
            object.__setattr__(self, "base_rate", 1.0 / suppression_factor(ref))
        elif not self.base_rate >= 0:
            raise ValueError(f"base_rate must be >= 0, got {self.base_rate!r}")


@dataclass(frozen=True)
class SpinSystem:
    delta_E: float
    gamma_up: float
    gamma_down: float
    p_up: float
    p_down: float

    def __post_init__(self):
        if not self.delta_E > 0:
            raise ValueError("delta_E must be > 0")
        if self.gamma_up < 0 or self.gamma_down < 0:
            raise ValueError("rates must be >= 0")
        if not (0 <= self.p_up <= 1 and 0 <= self.p_down <= 1):
            raise ValueError("populations must lie in [0, 1]")
        if abs(self.p_up + self.p_down - 1) > 1e-12:
            raise ValueError("populations must sum to 1")

    @property
    def total_rate(self) -> float:
        return self.gamma_up + self.gamma_down

    @property
    def thermalization_time(self) -> float:
        return 1.0 / self.total_rate if self.total_rate > 0 else math.inf


def zeeman_splitting(cfg: ThermometerConfig, pc: PhysicalConstants = CODATA) -> float:
    """``g mu_B B`` in joules."""
    return cfg.g_factor * pc.mu_B * cfg.B


def suppression_factor(cfg: ThermometerConfig, pc: PhysicalConstants = CODATA) -> float:
    """Decay of the piezoelectric field across the gap, ``exp(-2 d dE / (hbar c))``."""
    k = zeeman_splitting(cfg, pc) / (pc.hbar * cfg.phonon_speed)
    return math.exp(-2.0 * cfg.substrate_gap * k)


def _bose(delta_E: float, T: float, pc: PhysicalConstants) -> float:
    if T == 0:
        return 0.0
    x = delta_E / (pc.k_B * T)
    if x > 700:  # expm1 overflows; occupation is below 1e-304 anyway
        return 0.0
    return 1.0 / math.expm1(x)


def rates_at_temperature(
    cfg: ThermometerConfig, T: float, pc: PhysicalConstants = CODATA
) -> tuple[float, float]:
    """``(gamma_up, gamma_down)`` at bath temperature ``T``.

    Detailed balance with the Bose occupation ``nbar`` of the phonon mode at the
    Zeeman energy: emission ``~ nbar + 1``, absorption ``~ nbar``.
    """
    if T < 0:
        raise ValueError(f"temperature must be >= 0, got {T!r}")
    rate = cfg.base_rate * suppression_factor(cfg, pc)
    nbar = _bose(zeeman_splitting(cfg, pc), T, pc)
    return rate * (nbar + 1.0), rate * nbar


def steady_state(sys: SpinSystem) -> tuple[float, float]:
    total = sys.total_rate
    if total == 0:
        return sys.p_up, sys.p_down
    p_up = sys.gamma_down / total
    return p_up, 1.0 - p_up


def evolve(sys: SpinSystem, t: float) -> SpinSystem:
    """Closed-form solution of ``dp_up/dt = -gamma_up p_up + gamma_down p_down``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return sys
    p_ss, _ = steady_state(sys)
    p_up = p_ss + (sys.p_up - p_ss) * math.exp(-sys.total_rate * t)
    return replace(sys, p_up=p_up, p_down=1.0 - p_up)


def evolve_series(sys: SpinSystem, t) -> tuple[np.ndarray, np.ndarray]:
    """Populations ``(p_up, p_down)`` at the times ``t``."""
    t = np.asarray(t, dtype=float)
    p_ss, _ = steady_state(sys)
    p_up = p_ss + (sys.p_up - p_ss) * np.exp(-sys.total_rate * t)
    return p_up, 1.0 - p_up


def steady_state_ratio(T_H: float, delta_E: float, pc: PhysicalConstants = CODATA) -> float:
    """Thermal population ratio ``p_up / p_down = exp(-dE / (k_B T_H))``.

    Underflow to 0 is reported with a :class:`RatioUnderflowWarning`.
    """
    if not T_H > 0:
        raise ValueError(f"T_H must be > 0, got {T_H!r}")
    r = math.exp(-delta_E / (pc.k_B * T_H))
    if r == 0.0 and delta_E > 0:
        warnings.warn(
            f"population ratio underflows: dE/(k_B T) = {delta_E / (pc.k_B * T_H):.4g}",
            RatioUnderflowWarning,
            stacklevel=2,
        )
    return r


def infer_temperature(
    r: float, delta_E: float, pc: PhysicalConstants = CODATA
) -> tuple[float, float]:
    """Invert the thermal ratio.

    Returns
    -------
    T_H : float
        ``-dE / (k_B ln r)``.
    sensitivity : float
        ``dE / (k_B T_H)``: relative change of ``r`` per relative change of ``T_H``.
    """
    if not 0 < r < 1:
        raise ValueError(f"ratio must lie in (0, 1), got {r!r}")
    T_H = -delta_E / (pc.k_B * math.log(r))
    return T_H, delta_E / (pc.k_B * T_H)


def is_measurable(r: float) -> bool:
    lo, hi = MEASURABLE_WINDOW
    return lo <= r <= hi
