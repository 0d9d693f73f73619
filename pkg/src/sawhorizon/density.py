"""
Gate-induced 2DEG density profiles.

Positions are in metres; densities are normalised to the amplitude ``n_max``
so every profile lives in [0, 1]. The gate covers x < 0 and its edge sits at
x = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

__all__ = [
    "Grid1D",
    "DensityProfile",
    "step_density",
    "smoothed_density",
    "convolve_density",
    "charge_conservation",
    "trapezoid",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``x_min, x_min + dx, ..., x_max`` with ``n_points`` samples."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got {self.x_min!r}, {self.x_max!r}")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError(f"n_points must be an integer >= 3, got {self.n_points!r}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, int(self.n_points))

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.x_min + self.x_max)

    @classmethod
    def symmetric(cls, half_width: float, spacing: float) -> "Grid1D":
        """Grid on [-half_width, half_width] containing x = 0 as a sample."""
        n_half = int(round(half_width / spacing))
        return cls(-n_half * spacing, n_half * spacing, 2 * n_half + 1)

    def reversed_mirror(self) -> "Grid1D":
        return Grid1D(-self.x_max, -self.x_min, self.n_points)


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """Sampled density ``n`` (units of n_max) and its derivative ``dn_dx`` (1/m).

    ``singular`` lists sample indices where ``dn_dx`` is not defined
    (the edge of the ideal step).
    """

    grid: Grid1D
    n: np.ndarray
    dn_dx: np.ndarray
    provenance: str
    singular: tuple[int, ...] = field(default=())
    kappa_s: float | None = None

    def __post_init__(self):
        if self.n.shape != (self.grid.n_points,) or self.dn_dx.shape != self.n.shape:
            raise ValueError("profile arrays must match the grid size")
        if self.provenance not in ("analytic", "convolved", "step", "uniform", "sampled"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def d2n_dx2(self) -> np.ndarray:
        """Second derivative, analytic for erf profiles and finite-difference otherwise."""
        if self.provenance == "analytic" and self.kappa_s is not None:
            x = self.x
            k = self.kappa_s
            return 2.0 * k**3 * x / math.sqrt(math.pi) * np.exp(-((k * x) ** 2))
        if self.provenance in ("uniform",):
            return np.zeros_like(self.n)
        return np.gradient(self.dn_dx, self.grid.dx, edge_order=2)

    @classmethod
    def uniform(cls, grid: Grid1D, value: float) -> "DensityProfile":
        if not 0.0 <= value <= 1.0:
            raise ValueError("uniform density must lie in [0, 1]")
        return cls(grid, np.full(grid.n_points, float(value)), np.zeros(grid.n_points), "uniform")

    @classmethod
    def from_samples(cls, grid: Grid1D, n) -> "DensityProfile":
        """Wrap arbitrary samples; the derivative is taken by centred differences."""
        n = np.asarray(n, dtype=float)
        return cls(grid, n, np.gradient(n, grid.dx, edge_order=2), "sampled")


def _edge_indices(x: np.ndarray, tol: float) -> tuple[int, ...]:
    on_edge = np.flatnonzero(np.abs(x) <= tol)
    if on_edge.size:
        return tuple(int(i) for i in on_edge)
    i = int(np.searchsorted(x, 0.0))
    if 0 < i < x.size:
        return (i - 1, i)
    return ()


def _step_values(x: np.ndarray, tol: float) -> np.ndarray:
    n = np.where(x < 0.0, 1.0, 0.0)
    n[np.abs(x) <= tol] = 0.5
    return n


def step_density(grid: Grid1D) -> DensityProfile:
    """Ideal gate-induced density: 1 under the gate, 0 outside, 1/2 at the edge."""
    x = grid.x
    tol = 1e-9 * grid.dx
    return DensityProfile(
        grid,
        _step_values(x, tol),
        np.zeros_like(x),
        "step",
        singular=_edge_indices(x, tol),
    )


def smoothed_density(grid: Grid1D, kappa_s: float) -> DensityProfile:
    """Screened density ``(1 - erf(kappa_s x)) / 2`` with its analytic derivative."""
    if not (math.isfinite(kappa_s) and kappa_s > 0):
        raise ValueError(f"kappa_s must be > 0, got {kappa_s!r}")
    x = grid.x
    n = 0.5 * erfc(kappa_s * x)
    dn_dx = -kappa_s / math.sqrt(math.pi) * np.exp(-((kappa_s * x) ** 2))
    return DensityProfile(grid, n, dn_dx, "analytic", kappa_s=kappa_s)


def gaussian_kernel(kappa_s: float, h: float, half_width: float) -> tuple[np.ndarray, np.ndarray]:
    """Kernel ``A exp(-(kappa_s s)^2)`` on the lattice ``s = k h``, |s| <= half_width.

    Returns ``(s, w)`` where ``w`` already carries the trapezoid weights and
    ``h``, with ``A`` fixed so that ``w.sum() == 1``.
    """
    k_max = int(math.ceil(half_width / h))
    s = h * np.arange(-k_max, k_max + 1)
    w = np.exp(-((kappa_s * s) ** 2)) * h
    w[0] *= 0.5
    w[-1] *= 0.5
    return s, w / w.sum()


def _trapezoid_convolution(x: np.ndarray, kappa_s: float, refine: int, h: float) -> np.ndarray:
    # (G * n0)(x_i) = sum_k w_k n0(x_i - s_k), step sampled on a lattice of spacing h
    reach = 8.0 / kappa_s
    _, w = gaussian_kernel(kappa_s, h, reach)
    k_max = (w.size - 1) // 2
    lattice = x[0] + h * np.arange(-k_max, (x.size - 1) * refine + k_max + 1)
    n0 = _step_values(lattice, 1e-9 * h)
    full = np.convolve(n0, w, mode="valid")
    return full[::refine]


def convolve_density(grid: Grid1D, kappa_s: float) -> DensityProfile:
    """Numerical convolution of the ideal step with the normalised Gaussian kernel.

    Trapezoid-rule convolution evaluated on the grid spacing and on half of it,
    combined by one Richardson step to cancel the leading h^2 error caused by the
    step discontinuity. Independent of the closed-form erf profile.
    """
    if not (math.isfinite(kappa_s) and kappa_s > 0):
        raise ValueError(f"kappa_s must be > 0, got {kappa_s!r}")
    x = grid.x
    dx = grid.dx
    if dx > 0.1 / kappa_s * (1 + 1e-12):
        raise ValueError(f"grid too coarse: dx = {dx:g} m > 0.1/kappa_s")
    if grid.x_min > -8.0 / kappa_s * (1 - 1e-12) or grid.x_max < 8.0 / kappa_s * (1 - 1e-12):
        raise ValueError("grid too narrow: must span at least +-8/kappa_s")
    coarse = _trapezoid_convolution(x, kappa_s, 1, dx)
    fine = _trapezoid_convolution(x, kappa_s, 2, 0.5 * dx)
    n = (4.0 * fine - coarse) / 3.0
    dn_dx = np.gradient(n, dx, edge_order=2)
    return DensityProfile(grid, n, dn_dx, "convolved", kappa_s=kappa_s)


def trapezoid(y: np.ndarray, dx: float) -> float:
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def charge_conservation(profile: DensityProfile, grid: Grid1D) -> float:
    """Trapezoid integral of ``n - n0`` over the grid (units of n_max * m)."""
    if profile.grid != grid:
        raise ValueError("profile and grid do not match")
    n0 = step_density(grid).n
    return trapezoid(profile.n - n0, grid.dx)
