import math

import numpy as np
import pytest
import scipy.constants as sc
from hypothesis import given
from hypothesis import strategies as st

from sawhorizon.constants import MaterialParams
from sawhorizon.density import Grid1D
from sawhorizon.horizon import (
    find_horizons,
    hawking_temperature,
    optimal_observer_speed,
    surface_gravity,
)
from sawhorizon.io import write_horizon_json
from sawhorizon.speed import SpeedProfile, piecewise_speed


def oracle_temperature(kappa):
    return sc.hbar * kappa / (2 * sc.pi * sc.k)


class TestHawkingTemperature:
    def test_zero(self):
        assert hawking_temperature(0.0) == 0.0

    def test_gaas_gradient(self):
        T = hawking_temperature(1.25e7)
        assert T == pytest.approx(oracle_temperature(1.25e7), rel=1e-12)
        assert T == pytest.approx(1.52e-5, rel=5e-3)
        # rounded constants from a hand evaluation
        assert T == pytest.approx(1.0546e-34 * 1.25e7 / (2 * math.pi * 1.3807e-23), rel=1e-4)

    def test_one_kelvin(self):
        kappa = 2 * math.pi * sc.k / sc.hbar
        assert kappa == pytest.approx(8.22e11, rel=1e-3)
        # scipy's hbar is h/2pi unrounded; the stored CODATA value has 10 digits
        assert hawking_temperature(kappa) == pytest.approx(1.0, rel=1e-9)

    def test_negative(self):
        with pytest.raises(ValueError):
            hawking_temperature(-1.0)

    @given(st.floats(0, 1e15), st.floats(0, 1e3))
    def test_linear(self, kappa, a):
        assert hawking_temperature(a * kappa) == pytest.approx(a * hawking_temperature(kappa), rel=1e-14)


class TestObserverSpeed:
    @pytest.mark.parametrize(
        "c0, K2, expected", [(1e3, 1e-4, 1000.025), (1e3, 0.0, 1000.0), (2000.0, 1e-2, 2005.0)]
    )
    def test_values(self, c0, K2, expected):
        m = MaterialParams(c0=c0, K2=K2, kappa_s=1e9)
        assert optimal_observer_speed(m) == pytest.approx(expected, rel=1e-15)


class TestFindHorizons:
    def test_piecewise_optimal(self, piecewise, gaas):
        rep = find_horizons(piecewise, optimal_observer_speed(gaas))
        assert len(rep.horizons) == 1
        h = rep.horizons[0]
        assert h.x_h == 0.0
        assert h.kappa_g == 1.25e7
        assert h.crossing == "super_to_sub"
        assert h.T_H == pytest.approx(oracle_temperature(1.25e7), rel=1e-12)

    def test_below_min_speed(self, piecewise, gaas):
        assert find_horizons(piecewise, gaas.c0 / 2).horizons == []

    def test_root_condition_and_sign_change(self, fixed_point, gaas):
        v = optimal_observer_speed(gaas)
        rep = find_horizons(fixed_point, v)
        assert len(rep.horizons) == 1
        h = rep.horizons[0]
        assert abs(fixed_point.speed_at(h.x_h) - v) / v < 1e-9
        g = rep.metric_coefficient
        x = fixed_point.x
        assert np.sign(g[x < h.x_h][-1]) != np.sign(g[x > h.x_h][0])
        assert h.kappa_g > 0 and h.T_H > 0

    def test_off_centre_observer(self, piecewise, gaas):
        # v a quarter of the way up the ramp sits at x = -1/kappa_s
        v = gaas.c0 * (1 + gaas.K2 / 8)
        h = find_horizons(piecewise, v).horizons[0]
        assert h.x_h * gaas.kappa_s == pytest.approx(-1.0, rel=1e-9)

    def test_mirror_orientation(self, fixed_point, gaas):
        v = optimal_observer_speed(gaas)
        a = find_horizons(fixed_point, v).horizons
        b = find_horizons(fixed_point.mirrored(), v).horizons
        assert len(a) == len(b) == 1
        assert b[0].x_h == pytest.approx(-a[0].x_h, rel=1e-9)
        assert b[0].kappa_g == pytest.approx(a[0].kappa_g, rel=1e-9)
        assert b[0].crossing == "sub_to_super"

    def test_multiple_crossings(self):
        g = Grid1D(0.0, 1.0, 101)
        sp = SpeedProfile.from_samples(g, 1.0 + 0.1 * np.sin(2 * np.pi * g.x))
        rep = find_horizons(sp, 1.0)
        xs = sorted(h.x_h for h in rep.horizons)
        assert len(xs) >= 1
        assert any(abs(x - 0.5) < 1e-6 for x in xs)

    def test_rejects_bad_speed(self, piecewise):
        with pytest.raises(ValueError):
            find_horizons(piecewise, 0.0)


class TestSurfaceGravity:
    def test_piecewise(self, piecewise):
        assert surface_gravity(piecewise, 0.0) == 1.25e7

    def test_constant(self, grid):
        assert surface_gravity(SpeedProfile.constant(grid, 1.0), 0.0) == 0.0

    def test_outside(self, piecewise):
        with pytest.raises(ValueError):
            surface_gravity(piecewise, 1.0)


class TestScaling:
    @pytest.mark.parametrize("field", ["kappa_s", "K2", "c0"])
    def test_temperature_linear_in_each_parameter(self, field):
        base = MaterialParams(c0=1e3, K2=1e-4, kappa_s=1e9)
        doubled = base.replace(**{field: 2 * getattr(base, field)})

        def temperature(m):
            g = Grid1D.symmetric(8 / m.kappa_s, 0.01 / m.kappa_s)
            rep = find_horizons(piecewise_speed(m, g), optimal_observer_speed(m))
            assert len(rep.horizons) == 1
            return rep.horizons[0].T_H

        assert temperature(doubled) / temperature(base) == pytest.approx(2.0, rel=1e-12)


def test_json_has_units(tmp_path, piecewise, gaas):
    import json

    rep = find_horizons(piecewise, optimal_observer_speed(gaas))
    data = json.loads(write_horizon_json(tmp_path / "h.json", rep).read_text())
    assert list(data)[:3] == ["observer_speed", "horizons", "metric_coefficient"]
    assert data["units"]["T_H"] == "K"
    assert data["horizons"][0]["kappa_g"] == 1.25e7
