import math
import warnings

import numpy as np
import pytest
import scipy.constants as sc
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from sawhorizon.constants import CODATA
from sawhorizon.spin import (
    RatioUnderflowWarning,
    SpinSystem,
    ThermometerConfig,
    evolve,
    evolve_series,
    infer_temperature,
    is_measurable,
    rates_at_temperature,
    steady_state,
    steady_state_ratio,
    suppression_factor,
    zeeman_splitting,
)

K_B = CODATA.k_B


@pytest.fixture
def thermo():
    return ThermometerConfig()


def system_at(cfg, T, p_up=1.0):
    g_up, g_down = rates_at_temperature(cfg, T)
    return SpinSystem(zeeman_splitting(cfg), g_up, g_down, p_up, 1.0 - p_up)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [{"B": 0.0}, {"g_factor": -1.0}, {"substrate_gap": -1e-9}, {"phonon_speed": 0.0}, {"base_rate": -1.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ThermometerConfig(**kwargs)

    def test_spin_system_invariants(self):
        with pytest.raises(ValueError):
            SpinSystem(0.0, 1.0, 0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            SpinSystem(1.0, -1.0, 0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            SpinSystem(1.0, 1.0, 0.0, 0.7, 0.7)


class TestZeeman:
    def test_default(self, thermo):
        dE = zeeman_splitting(thermo)
        assert dE == pytest.approx(0.44 * sc.physical_constants["Bohr magneton"][0], rel=1e-12)
        assert dE == pytest.approx(4.08e-24, rel=1e-3)
        assert dE / sc.e * 1e6 == pytest.approx(25.5, rel=1e-2)

    def test_linear_in_field(self, thermo):
        a = zeeman_splitting(thermo)
        b = zeeman_splitting(ThermometerConfig(B=2.0, base_rate=1.0))
        assert b == pytest.approx(2 * a, rel=1e-15)


class TestSuppression:
    def test_no_gap(self):
        assert suppression_factor(ThermometerConfig(substrate_gap=0.0)) == 1.0

    def test_default(self, thermo):
        dE = 0.44 * sc.physical_constants["Bohr magneton"][0]
        exponent = 2 * 100e-9 * dE / (sc.hbar * 1000.0)
        assert round(exponent, 2) == 7.74
        # hbar rounding (6e-10) is amplified by the exponent of ~7.7
        assert suppression_factor(thermo) == pytest.approx(math.exp(-exponent), rel=1e-7)
        assert suppression_factor(thermo) == pytest.approx(4.4e-4, rel=0.02)  # 4.356e-4

    @given(st.floats(0, 1e-6), st.floats(1e-9, 1e-6), st.floats(0.1, 5.0), st.floats(0.1, 5.0))
    def test_monotone(self, d1, dd, b1, db):
        lo = ThermometerConfig(B=b1, substrate_gap=d1, base_rate=1.0)
        assert suppression_factor(ThermometerConfig(B=b1, substrate_gap=d1 + dd, base_rate=1.0)) <= suppression_factor(lo)
        assert suppression_factor(ThermometerConfig(B=b1 + db, substrate_gap=d1, base_rate=1.0)) <= suppression_factor(lo)
        assert 0 < suppression_factor(lo) <= 1


class TestRates:
    def test_zero_temperature(self, thermo):
        g_up, g_down = rates_at_temperature(thermo, 0.0)
        assert g_up == thermo.base_rate * suppression_factor(thermo)
        assert g_down == 0.0

    def test_ln2(self, thermo):
        T = zeeman_splitting(thermo) / (K_B * math.log(2))
        g_up, g_down = rates_at_temperature(thermo, T)
        assert g_down / g_up == pytest.approx(0.5, rel=1e-14)

    def test_default_total_rate(self, thermo):
        g_up, g_down = rates_at_temperature(thermo, 0.0)
        assert g_up + g_down == pytest.approx(1.0, rel=1e-12)
        assert system_at(thermo, 0.0).thermalization_time == pytest.approx(1.0, rel=1e-12)

    def test_negative(self, thermo):
        with pytest.raises(ValueError):
            rates_at_temperature(thermo, -1.0)

    def test_detailed_balance(self, thermo):
        dE = zeeman_splitting(thermo)
        for T in np.logspace(-1, 3, 41):
            s = system_at(thermo, T)
            p_up, p_down = steady_state(s)
            assert abs(p_up / p_down - steady_state_ratio(T, dE)) < 1e-12


class TestEvolve:
    def test_pure_decay(self):
        s = SpinSystem(1.0, 1.0, 0.0, 1.0, 0.0)
        for t in (0.1, 1.0, 3.0):
            assert evolve(s, t).p_up == pytest.approx(math.exp(-t), rel=1e-15)

    def test_zero_time(self):
        s = SpinSystem(1.0, 0.3, 0.2, 0.9, 0.1)
        assert evolve(s, 0.0) is s

    def test_ten_relaxation_times(self):
        s = SpinSystem(1.0, 0.7, 0.3, 1.0, 0.0)
        p_ss, _ = steady_state(s)
        out = evolve(s, 10 / s.total_rate)
        assert abs(out.p_up - p_ss) < 5e-5 * abs(s.p_up - p_ss)

    def test_matches_numerical_ode(self):
        s = SpinSystem(1.0, 0.8, 0.35, 0.1, 0.9)

        def rhs(t, p):
            return [-s.gamma_up * p[0] + s.gamma_down * p[1], s.gamma_up * p[0] - s.gamma_down * p[1]]

        t = np.linspace(0, 5, 26)
        sol = solve_ivp(rhs, (0, 5), [s.p_up, s.p_down], t_eval=t, rtol=1e-12, atol=1e-14, method="DOP853")
        p_up, p_down = evolve_series(s, t)
        np.testing.assert_allclose(p_up, sol.y[0], atol=1e-9)
        np.testing.assert_allclose(p_down, sol.y[1], atol=1e-9)

    def test_relaxation_rate_fit(self):
        s = SpinSystem(1.0, 0.6, 0.15, 1.0, 0.0)
        p_ss, _ = steady_state(s)
        t = np.linspace(0, 5 / s.total_rate, 50)
        p_up, _ = evolve_series(s, t)
        rate = -np.polyfit(t, np.log(np.abs(p_up - p_ss)), 1)[0]
        assert rate == pytest.approx(s.total_rate, rel=0.01)

    @given(
        st.floats(0, 10), st.floats(0, 10), st.floats(0, 1), st.floats(0, 100)
    )
    def test_normalization(self, g_up, g_down, p, t):
        s = evolve(SpinSystem(1.0, g_up, g_down, p, 1.0 - p), t)
        assert s.p_up + s.p_down == 1.0 or abs(s.p_up + s.p_down - 1) <= 1e-15
        assert 0 <= s.p_up <= 1

    def test_negative_time(self):
        with pytest.raises(ValueError):
            evolve(SpinSystem(1.0, 1.0, 0.0, 1.0, 0.0), -1.0)


class TestRatio:
    def test_ln2(self):
        assert steady_state_ratio(1.0, K_B * math.log(2)) == pytest.approx(0.5, rel=1e-15)

    def test_degenerate_limit(self):
        assert steady_state_ratio(1.0, 1e-40) == pytest.approx(1.0, abs=1e-15)

    def test_gaas_underflows(self, thermo):
        dE = zeeman_splitting(thermo)
        T_H = 1.519578e-5
        assert dE / (K_B * T_H) == pytest.approx(1.94e4, rel=0.01)
        with pytest.warns(RatioUnderflowWarning):
            r = steady_state_ratio(T_H, dE)
        assert r == 0.0
        assert not is_measurable(r)

    def test_no_warning_when_representable(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            steady_state_ratio(1.0, 100 * K_B)

    def test_bad_temperature(self):
        with pytest.raises(ValueError):
            steady_state_ratio(0.0, 1e-24)


class TestInfer:
    def test_one_kelvin(self):
        T, sens = infer_temperature(0.5, K_B * math.log(2))
        assert T == pytest.approx(1.0, rel=1e-15)
        assert sens == pytest.approx(math.log(2), rel=1e-15)

    @pytest.mark.parametrize("T", [1e-5, 1e-3, 1.0])
    def test_round_trip(self, T):
        dE = 3 * K_B * T  # keeps r representable at each temperature
        T_back, _ = infer_temperature(steady_state_ratio(T, dE), dE)
        assert T_back == pytest.approx(T, rel=1e-12)

    def test_round_trip_at_default_splitting(self, thermo):
        dE = zeeman_splitting(thermo)
        T_back, _ = infer_temperature(steady_state_ratio(1.0, dE), dE)
        assert T_back == pytest.approx(1.0, rel=1e-12)

    def test_sensitivity(self):
        dE = 10 * K_B
        T, sens = infer_temperature(math.exp(-10), dE)
        assert T == pytest.approx(1.0, rel=1e-14)
        assert sens == pytest.approx(10.0, rel=1e-14)
        # finite-difference check of dr/r = sens dT/T
        eps = 1e-6
        dr = steady_state_ratio(T * (1 + eps), dE) / steady_state_ratio(T, dE) - 1
        assert dr / eps == pytest.approx(sens, rel=1e-4)

    @pytest.mark.parametrize("r", [0.0, 1.0, -0.5, 2.0])
    def test_out_of_range(self, r):
        with pytest.raises(ValueError):
            infer_temperature(r, 1e-24)

    def test_measurable_window(self):
        assert is_measurable(0.5)
        assert not is_measurable(1e-7)
        assert not is_measurable(1.0)
