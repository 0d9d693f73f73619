"""
The gated electron density
==========================

A metallic gate depletes the two-dimensional electron gas on one side of
x = 0. Screening smooths the step into an error-function edge of width
~1/kappa_s. This script builds the profile two ways and checks they agree.
"""

# %%
# A grid of +-8 screening lengths at 0.01/kappa_s spacing.
import numpy as np

from sawhorizon.constants import gaas_defaults
from sawhorizon.density import Grid1D, charge_conservation, convolve_density, smoothed_density, step_density

m = gaas_defaults()
k = m.kappa_s
grid = Grid1D.symmetric(8 / k, 0.01 / k)

# %%
# The closed form ``n = erfc(kappa_s x)/2`` against a direct numerical
# convolution of the bare step with the screening Gaussian.
analytic = smoothed_density(grid, k)
numeric = convolve_density(grid, k)
print("max |analytic - convolved| =", np.max(np.abs(analytic.n - numeric.n)))

# %%
# Smoothing moves charge around but does not create any.
print("charge residual * kappa_s =", charge_conservation(analytic, grid) * k)

# %%
# A few samples across the edge, next to the unsmoothed step.
step = step_density(grid)
for xk in (-2, -1, 0, 1, 2):
    i = int(np.argmin(np.abs(grid.x * k - xk)))
    print(f"x = {xk:+d}/kappa_s   step n = {step.n[i]:.3f}   smoothed n = {analytic.n[i]:.4f}")
