"""
Physical constants and material parameter sets.

The electrodynamic material constants (mobility, permittivity, elastic and
piezoelectric constants, mass density) only ever enter the SAW speed through
three derived groups:

* ``c0``     base SAW speed sqrt(d / rho_mass)
* ``K2``     piezoelectric coupling e^2 / (eps d)
* ``sigma``  dimensionless conductivity mu q n_max / (omega eps)

so those groups are what :class:`MaterialParams` stores.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields, replace

__all__ = [
    "ParameterError",
    "CouplingWarning",
    "PhysicalConstants",
    "CODATA",
    "MaterialParams",
    "gaas_defaults",
    "validate",
    "speed_contrast",
]


class ParameterError(ValueError):
    """Invalid parameter value. ``field`` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class CouplingWarning(UserWarning):
    """K2 is large enough that small-coupling expansions become unreliable."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    k_B: float = 1.380649e-23  # J/K
    mu_B: float = 9.2740100783e-24  # J/T
    q: float = 1.602176634e-19  # C

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f.name, f"must be finite and > 0, got {value!r}")


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class MaterialParams:
    """Piezoelectric semiconductor substrate.

    Attributes
    ----------
    c0 : float
        SAW speed of the fully screened substrate (m/s).
    K2 : float
        Piezoelectric coupling constant (dimensionless, << 1).
    kappa_s : float
        Inverse screening length (1/m).
    sigma : float
        Dimensionless conductivity scale mu q n_max / (omega eps).
    omega : float
        SAW angular frequency (rad/s).
    n_max : float
        2DEG density amplitude. Arbitrary unit; profiles are stored as n / n_max.
    g_factor : float
        Electron g-factor magnitude.
    name : str
        Free-form label.
    """

    c0: float
    K2: float
    kappa_s: float
    sigma: float = 10.0
    omega: float = 2.0 * math.pi * 1e9
    n_max: float = 1.0
    g_factor: float = 0.44
    name: str = "custom"

    def replace(self, **changes) -> "MaterialParams":
        return replace(self, **changes)


def _require(cond: bool, field: str, message: str) -> None:
    if not cond:
        raise ParameterError(field, message)


def validate(m: MaterialParams) -> MaterialParams:
    """Check physical ranges and return ``m`` unchanged.

    Raises :class:`ParameterError` naming the first offending field. Emits a
    :class:`CouplingWarning` for ``K2 > 0.1``.
    """
    for name in ("c0", "K2", "kappa_s", "sigma", "omega", "n_max", "g_factor"):
        value = getattr(m, name)
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool),
            name,
            f"must be a real number, got {value!r}",
        )
        _require(math.isfinite(value), name, f"must be finite, got {value!r}")
    _require(m.c0 > 0, "c0", f"must be > 0, got {m.c0!r}")
    _require(m.kappa_s > 0, "kappa_s", f"must be > 0, got {m.kappa_s!r}")
    _require(m.omega > 0, "omega", f"must be > 0, got {m.omega!r}")
    _require(m.n_max >= 0, "n_max", f"must be >= 0, got {m.n_max!r}")
    _require(m.sigma >= 0, "sigma", f"must be >= 0, got {m.sigma!r}")
    _require(m.K2 >= 0, "K2", f"must be >= 0, got {m.K2!r}")
    _require(m.g_factor > 0, "g_factor", f"must be > 0, got {m.g_factor!r}")
    _require(isinstance(m.name, str), "name", "must be a string")
    if m.K2 > 0.1:
        warnings.warn(
            f"K2 = {m.K2!r} is not small; piecewise approximations degrade",
            CouplingWarning,
            stacklevel=2,
        )
    return m


def gaas_defaults() -> MaterialParams:
    """GaAs substrate: K2 = 1e-4, c0 = 1e3 m/s, kappa_s = 1e9 1/m."""
    return MaterialParams(
        c0=1e3,
        K2=1e-4,
        kappa_s=1e9,
        sigma=10.0,
        omega=2.0 * math.pi * 1e9,
        n_max=1.0,
        g_factor=0.44,
        name="GaAs",
    )


def speed_contrast(m: MaterialParams) -> tuple[float, float]:
    """SAW speeds deep under the gate and far from it, ``(c0, c0 (1 + K2/2))``."""
    validate(m)
    return m.c0, m.c0 * (1.0 + 0.5 * m.K2)
