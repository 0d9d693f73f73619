"""
Horizons and their temperature
==============================

An observer moving at v sees a horizon wherever c(x) = v. The slope of c
there plays the role of surface gravity and sets a Hawking temperature
hbar kappa_g / (2 pi k_B).
"""

# %%
from sawhorizon.constants import gaas_defaults
from sawhorizon.density import Grid1D, smoothed_density
from sawhorizon.horizon import find_horizons, optimal_observer_speed
from sawhorizon.speed import piecewise_speed, solve_speed_fixed_point

m = gaas_defaults()
k = m.kappa_s
grid = Grid1D.symmetric(8 / k, 0.01 / k)
v = optimal_observer_speed(m)
print("observer speed:", v, "m/s")

# %%
# The midpoint speed c0(1 + K2/4) puts the horizon on the steepest part of
# the linear ramp.
for name, sp in (
    ("piecewise", piecewise_speed(m, grid)),
    ("fixed point", solve_speed_fixed_point(smoothed_density(grid, k), m)),
):
    for h in find_horizons(sp, v).horizons:
        print(f"{name:12s} x_h = {h.x_h * k:+.3f}/kappa_s  kappa_g = {h.kappa_g:.4e} 1/s"
              f"  T_H = {h.T_H:.4e} K  ({h.crossing})")

# %%
# Too slow an observer sees no horizon at all.
print("v = c0/2:", find_horizons(piecewise_speed(m, grid), m.c0 / 2).horizons)

# %%
# Temperature grows linearly with coupling, screening wavenumber and speed.
for K2 in (1e-4, 1e-3, 1e-2):
    mm = m.replace(K2=K2)
    h = find_horizons(piecewise_speed(mm, grid), optimal_observer_speed(mm)).horizons[0]
    print(f"K2 = {K2:g}: T_H = {h.T_H:.3e} K")
