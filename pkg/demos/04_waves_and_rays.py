"""
Waves and rays near the horizon
===============================

Two views of the same kinematics. In the lab frame a pulse rides over the
speed step. In the frame of the moving observer, sound rays near the horizon
peel away exponentially at the surface-gravity rate.
"""

# %%
import math

import numpy as np

from sawhorizon.constants import gaas_defaults
from sawhorizon.density import Grid1D, smoothed_density
from sawhorizon.horizon import find_horizons, optimal_observer_speed, surface_gravity
from sawhorizon.speed import piecewise_speed, solve_speed_fixed_point
from sawhorizon.wave import SolverConfig, WaveField, energy, fit_horizon_exponent, run, trace_characteristic

m = gaas_defaults()
k = m.kappa_s
grid = Grid1D.symmetric(20 / k, 0.02 / k)
sp = solve_speed_fixed_point(smoothed_density(grid, k), m)

# %%
# A right-moving Gaussian launched on the slow side, absorbing edges.
cfg = SolverConfig.from_cfl(grid, sp, "absorbing")
x = grid.x
u0 = np.exp(-((x * k + 10) / 1.0) ** 2)
v0 = sp.c * 2 * (x + 10 / k) * k**2 * u0
wf = WaveField.from_initial(grid, u0, v0, sp, cfg)
e0 = energy(wf, sp, "absorbing")
wf, probes = run(wf, sp, cfg, 20 / (k * m.c0), probes=[-10 / k, 0.0, 10 / k], every=50)
print("probe peaks (-10, 0, +10)/kappa_s:", probes.values.max(axis=0).round(3))
# the step in c is only 5e-5, so the pulse crosses it with almost no reflection
print("energy after crossing / initial:", energy(wf, sp, "absorbing") / e0)

# %%
# Rays in the comoving frame on the piecewise ramp. Rays seeded just outside
# escape; rays just inside never cross x = 0.
grid = Grid1D.symmetric(8 / k, 0.01 / k)
pw = piecewise_speed(m, grid)
v = optimal_observer_speed(m)
kg = surface_gravity(pw, 0.0)
for seed in (-1e-3, 1e-3):
    tr = trace_characteristic(pw, v, seed / k, "+", math.log(500) / kg)
    print(f"seed {seed:+.0e}/kappa_s -> final xi = {tr.xi[-1] * k:+.3f}/kappa_s,"
          f" fitted rate / kappa_g = {fit_horizon_exponent(tr, 0.0) / kg:.9f}")

# %%
# The same measurement on the self-consistent profile.
fp = solve_speed_fixed_point(smoothed_density(grid, k), m)
h = find_horizons(fp, v).horizons[0]
local = surface_gravity(fp, h.x_h)
for seed in (0.01, 0.05, 0.1):
    tr = trace_characteristic(fp, v, h.x_h + seed / k, "+", math.log(0.5 / seed) / local)
    print(f"seed {seed}/kappa_s: fitted / local slope = {fit_horizon_exponent(tr, h.x_h) / local:.3f}")
