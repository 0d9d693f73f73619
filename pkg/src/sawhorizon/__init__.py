"""
Acoustic black-hole analogue on a gated piezoelectric semiconductor.

Gate-induced 2DEG density -> SAW speed profile -> apparent horizon for a
comoving observer -> Hawking temperature, plus wave/ray dynamics and a
spin-population thermometer.
"""

__version__ = "0.1.0"

from .constants import (  # noqa: E402
    CODATA,
    MaterialParams,
    ParameterError,
    PhysicalConstants,
    gaas_defaults,
    speed_contrast,
    validate,
)
from .density import (  # noqa: E402
    DensityProfile,
    Grid1D,
    charge_conservation,
    convolve_density,
    smoothed_density,
    step_density,
)
from .horizon import (  # noqa: E402
    HorizonReport,
    find_horizons,
    hawking_temperature,
    optimal_observer_speed,
    surface_gravity,
)
from .speed import (  # noqa: E402
    SpeedProfile,
    effective_elastic_ratio,
    effective_permittivity_ratio,
    max_gradient,
    piecewise_speed,
    solve_speed_fixed_point,
)
from .spin import (  # noqa: E402
    SpinSystem,
    ThermometerConfig,
    evolve,
    infer_temperature,
    rates_at_temperature,
    steady_state_ratio,
    suppression_factor,
    zeeman_splitting,
)
from .wave import (  # noqa: E402
    SolverConfig,
    WaveField,
    energy,
    fit_horizon_exponent,
    run,
    step,
    trace_characteristic,
)
