"""
SAW speed from the 2DEG density.

The speed at each point solves the local implicit relation

    c = c0 * Re sqrt(1 + K2 / (1 - eps_r)),
    eps_r = sigma * (dn_dx * c / omega + 1j * n),

where ``eps_r`` is the effective permittivity relative to the bare one and the
square root is the principal branch. Densities are in units of ``n_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import MaterialParams, validate
from .density import DensityProfile, Grid1D

__all__ = [
    "SpeedProfile",
    "SingularityError",
    "ConvergenceError",
    "effective_permittivity_ratio",
    "effective_elastic_ratio",
    "solve_speed_fixed_point",
    "piecewise_speed",
    "max_gradient",
    "screened_speed",
    "bare_speed",
]


class SingularityError(ArithmeticError):
    """The stiffening term hit its pole at eps_r == 1."""


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not converge; carries the last iterate."""

    def __init__(self, message: str, c: np.ndarray, residual: float, iterations: int):
        super().__init__(message)
        self.c = c
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class SpeedProfile:
    grid: Grid1D
    c: np.ndarray
    dc_dx: np.ndarray
    provenance: str
    iterations_used: int = 0
    residual: float = 0.0
    residual_history: tuple[float, ...] = ()

    def __post_init__(self):
        if self.c.shape != (self.grid.n_points,) or self.dc_dx.shape != self.c.shape:
            raise ValueError("speed arrays must match the grid size")
        if not np.all(self.c > 0):
            raise ValueError("speeds must be positive")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def speed_at(self, x):
        """Linear interpolation of ``c``."""
        return np.interp(x, self.x, self.c)

    def gradient_at(self, x):
        """Linear interpolation of ``dc_dx``."""
        return np.interp(x, self.x, self.dc_dx)

    @classmethod
    def constant(cls, grid: Grid1D, c: float) -> "SpeedProfile":
        return cls(grid, np.full(grid.n_points, float(c)), np.zeros(grid.n_points), "constant")

    @classmethod
    def from_samples(cls, grid: Grid1D, c, provenance: str = "sampled") -> "SpeedProfile":
        c = np.asarray(c, dtype=float)
        return cls(grid, c, np.gradient(c, grid.dx, edge_order=2), provenance)

    def mirrored(self) -> "SpeedProfile":
        """Profile reflected through x = 0: c'(x) = c(-x)."""
        return SpeedProfile(
            self.grid.reversed_mirror(),
            self.c[::-1].copy(),
            -self.dc_dx[::-1],
            self.provenance,
            self.iterations_used,
            self.residual,
            self.residual_history,
        )


def effective_permittivity_ratio(n, dn_dx, c, m: MaterialParams):
    """Effective permittivity over the bare permittivity.

    Parameters
    ----------
    n : float or ndarray
        Density in units of n_max.
    dn_dx : float or ndarray
        Density gradient (1/m, units of n_max).
    c : float or ndarray
        Local SAW speed (m/s); sets the wavenumber gradient omega / c.
    m : MaterialParams

    Returns
    -------
    complex or ndarray of complex
        ``sigma * (dn_dx * c / omega + 1j * n)``.
    """
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise ValueError("SAW speed must be > 0")
    out = m.sigma * (np.asarray(dn_dx) * c / m.omega + 1j * np.asarray(n))
    return out[()] if out.ndim == 0 else out


def effective_elastic_ratio(eps_ratio, K2: float):
    """Stiffened elastic constant over the bare one, ``1 + K2 / (1 - eps_ratio)``."""
    eps_ratio = np.asarray(eps_ratio, dtype=complex)
    if np.any(eps_ratio == 1.0):
        raise SingularityError("effective permittivity ratio equals 1: stiffening term diverges")
    out = 1.0 + K2 / (1.0 - eps_ratio)
    return out[()] if out.ndim == 0 else out


def _speed_map(c, n, dn_dx, m: MaterialParams):
    eps = effective_permittivity_ratio(n, dn_dx, c, m)
    return m.c0 * np.sqrt(effective_elastic_ratio(eps, m.K2)).real


def screened_speed(m: MaterialParams) -> float:
    """Speed under a uniform gas n = 1: ``c0 Re sqrt(1 + K2 / (1 - i sigma))``."""
    return float(m.c0 * np.sqrt(1.0 + m.K2 / (1.0 - 1j * m.sigma)).real)


def bare_speed(m: MaterialParams) -> float:
    """Speed with no gas: ``c0 sqrt(1 + K2)``."""
    return m.c0 * math.sqrt(1.0 + m.K2)


def _implicit_gradient(c, n, dn_dx, d2n_dx2, m: MaterialParams) -> np.ndarray:
    # chain rule through the implicit relation c = F(n, n', c)
    eps = effective_permittivity_ratio(n, dn_dx, c, m)
    root = np.sqrt(effective_elastic_ratio(eps, m.K2))
    w = m.c0 * m.K2 / (2.0 * root * (1.0 - eps) ** 2) * m.sigma
    explicit = (w * (c * d2n_dx2 / m.omega + 1j * dn_dx)).real
    self_term = (w * dn_dx / m.omega).real
    return explicit / (1.0 - self_term)


def solve_speed_fixed_point(
    profile: DensityProfile,
    m: MaterialParams,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> SpeedProfile:
    """Solve the implicit speed relation pointwise by fixed-point iteration.

    Starts from ``c = c0`` and iterates until the maximum relative change
    drops below ``tol``. The gradient is obtained by differentiating the
    implicit relation, using the analytic density derivatives when the
    profile carries them.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` iterations without convergence.
    SingularityError
        If the effective permittivity ratio hits 1.
    """
    validate(m)
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    n, dn_dx = profile.n, profile.dn_dx
    c = np.full(n.shape, m.c0)
    history = []
    for it in range(1, max_iter + 1):
        c_new = _speed_map(c, n, dn_dx, m)
        if not np.all(np.isfinite(c_new)) or np.any(c_new <= 0):
            raise ConvergenceError("iteration left the physical range", c, math.inf, it)
        residual = float(np.max(np.abs(c_new - c) / c_new))
        history.append(residual)
        c = c_new
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations (residual {residual:.3e})",
            c,
            residual,
            max_iter,
        )
    dc_dx = _implicit_gradient(c, n, dn_dx, profile.d2n_dx2(), m)
    if profile.singular:
        dc_dx[list(profile.singular)] = np.nan
    return SpeedProfile(profile.grid, c, dc_dx, "fixed_point", it, residual, tuple(history))


def piecewise_speed(m: MaterialParams, grid: Grid1D) -> SpeedProfile:
    """Piecewise-linear speed: ``c0`` for x < -2/kappa_s, ``c0 (1 + K2/2)`` beyond
    +2/kappa_s, linear in between."""
    validate(m)
    if grid.dx > 0.1 / m.kappa_s * (1 + 1e-12):
        raise ValueError("grid under-resolved: need at least 10 points per 1/kappa_s")
    x = grid.x
    half = 2.0 / m.kappa_s
    c_in, c_out = m.c0, m.c0 * (1.0 + 0.5 * m.K2)
    slope = m.kappa_s * m.K2 * m.c0 / 8.0
    # ramp anchored at its centre so c(0) = c0 (1 + K2/4) exactly
    c = np.clip(m.c0 * (1.0 + 0.25 * m.K2) + slope * x, c_in, c_out)
    dc_dx = np.where(np.abs(x) <= half, slope, 0.0)
    return SpeedProfile(grid, c, dc_dx, "piecewise")


def max_gradient(sp: SpeedProfile) -> tuple[float, float]:
    """Largest ``|dc/dx|`` and where it sits.

    Ties (a flat-topped maximum, as on the piecewise ramp) resolve to the centre
    of the tied samples. A constant profile gives ``(0, grid midpoint)``.
    """
    g = np.abs(sp.dc_dx)
    finite = np.isfinite(g)
    if not finite.any():
        raise ValueError("profile has no finite gradient samples")
    peak = float(np.max(g[finite]))
    if peak == 0.0:
        return 0.0, sp.grid.midpoint
    tied = np.flatnonzero(finite & (g >= peak * (1.0 - 1e-12)))
    x = sp.x
    return peak, float(0.5 * (x[tied[0]] + x[tied[-1]]))
