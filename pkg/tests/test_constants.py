import math

import pytest
import scipy.constants as sc
from hypothesis import given
from hypothesis import strategies as st

from sawhorizon.constants import (
    CODATA,
    CouplingWarning,
    MaterialParams,
    ParameterError,
    PhysicalConstants,
    gaas_defaults,
    speed_contrast,
    validate,
)


def test_codata_values_match_scipy():
    assert CODATA.hbar == pytest.approx(sc.hbar, rel=1e-15)
    assert CODATA.k_B == pytest.approx(sc.k, rel=1e-15)
    assert CODATA.mu_B == pytest.approx(sc.physical_constants["Bohr magneton"][0], rel=1e-15)
    assert CODATA.q == pytest.approx(sc.e, rel=1e-15)


def test_constants_must_be_positive():
    with pytest.raises(ParameterError) as info:
        PhysicalConstants(hbar=-1.0)
    assert info.value.field == "hbar"


def test_gaas_defaults():
    m = gaas_defaults()
    assert (m.K2, m.c0, m.kappa_s) == (1e-4, 1e3, 1e9)
    assert m.g_factor == 0.44
    assert m.sigma == 10.0
    assert m.omega == 2 * math.pi * 1e9
    assert m.n_max == 1.0
    assert gaas_defaults() == m
    assert validate(m) is m


@pytest.mark.parametrize(
    "params, expected",
    [
        (dict(), (1000.0, 1000.05)),
        (dict(K2=0.0), (1000.0, 1000.0)),
        (dict(c0=2000.0, K2=1e-2), (2000.0, 2010.0)),
    ],
)
def test_speed_contrast(params, expected):
    m = gaas_defaults().replace(**params)
    assert speed_contrast(m) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "field, value",
    [("c0", 0.0), ("c0", -1.0), ("kappa_s", 0.0), ("omega", -2.0), ("n_max", -1.0),
     ("sigma", -0.5), ("K2", -1e-4), ("c0", float("nan")), ("kappa_s", float("inf"))],
)
def test_validation_names_the_field(field, value):
    m = gaas_defaults().replace(**{field: value})
    with pytest.raises(ParameterError) as info:
        validate(m)
    assert info.value.field == field
    with pytest.raises(ParameterError):
        speed_contrast(m)


def test_large_coupling_warns():
    with pytest.warns(CouplingWarning):
        validate(gaas_defaults().replace(K2=0.2))


@given(
    c0=st.floats(1.0, 1e5),
    K2=st.floats(0.0, 0.1),
)
def test_contrast_ratio_is_exact(c0, K2):
    c_in, c_out = speed_contrast(MaterialParams(c0=c0, K2=K2, kappa_s=1e9))
    assert c_out / c_in == pytest.approx(1 + K2 / 2, rel=1e-15)
    assert c_out >= c_in


@pytest.mark.filterwarnings("ignore::sawhorizon.constants.CouplingWarning")
@given(
    st.sampled_from(["c0", "K2", "kappa_s", "sigma", "omega", "n_max", "g_factor"]),
    st.floats(allow_nan=True, allow_infinity=True),
)
def test_validation_is_total(field, value):
    m = gaas_defaults().replace(**{field: value})
    try:
        validate(m)
    except ParameterError as exc:
        assert exc.field == field
