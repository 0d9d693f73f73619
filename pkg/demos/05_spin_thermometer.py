"""
Reading the temperature with a spin
===================================

A Zeeman-split electron spin on a second substrate exchanges phonons with
the horizon. Its population ratio relaxes to exp(-dE / k_B T), from which T
can be read back. At the default 1 T field that ratio is far too small to
measure, so the script also scans for a field that would work.
"""

# %%
import math
import warnings

import numpy as np

from sawhorizon.constants import CODATA, gaas_defaults
from sawhorizon.density import Grid1D
from sawhorizon.horizon import find_horizons, optimal_observer_speed
from sawhorizon.speed import piecewise_speed
from sawhorizon.spin import (
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

m = gaas_defaults()
grid = Grid1D.symmetric(8 / m.kappa_s, 0.01 / m.kappa_s)
T_H = find_horizons(piecewise_speed(m, grid), optimal_observer_speed(m)).horizons[0].T_H
print(f"T_H = {T_H:.4e} K")

# %%
cfg = ThermometerConfig()
dE = zeeman_splitting(cfg)
print(f"dE = {dE:.3e} J, field suppression = {suppression_factor(cfg):.3e}")
print(f"dE / k_B T_H = {dE / (CODATA.k_B * T_H):.4g}")
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", RatioUnderflowWarning)
    r = steady_state_ratio(T_H, dE)
print("ratio:", r, " underflow warned:", bool(caught), " measurable:", is_measurable(r))

# %%
# Relaxation towards the thermal populations takes about a second.
g_up, g_down = rates_at_temperature(cfg, T_H)
spin = SpinSystem(dE, g_up, g_down, 0.5, 0.5)
t = np.linspace(0, 5, 6)
p_up, _ = evolve_series(spin, t)
print("p_up(t):", p_up.round(4), " relaxation time:", spin.thermalization_time, "s")

# %%
# Fields at which the ratio lands inside the measurable window at T_H.
for B in (1e-6, 1e-5, 1e-4, 1e-3):
    c = ThermometerConfig(B=B)
    r = steady_state_ratio(T_H, zeeman_splitting(c))
    line = f"B = {B:.0e} T: r = {r:.3e}"
    if is_measurable(r):
        T, sens = infer_temperature(r, zeeman_splitting(c))
        line += f", inferred T = {T:.4e} K, dr/r per dT/T = {sens:.3g}"
    print(line)
