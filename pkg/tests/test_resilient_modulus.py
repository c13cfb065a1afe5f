import math

import pytest
from hypothesis import given, strategies as st

from rigidpave.errors import DomainError, ParameterError
from rigidpave.hydrostatics import MoistureState
from rigidpave.resilient_modulus import (
    ATMOSPHERIC_KPA,
    MeMoistureParams,
    MrCoefficients,
    StressState,
    mr_me_ratio,
    mr_nchrp,
    mr_suction,
)

PA = ATMOSPHERIC_KPA
DRY = MoistureState(theta=0.0, saturation=0.0, suction_kpa=0.0, f=1.0)


def test_nchrp_exponents_vanish():
    assert mr_nchrp(MrCoefficients(500.0, 0.0, 0.0), StressState()) == pytest.approx(500.0 * PA, rel=1e-15)


def test_nchrp_linear_case():
    s = StressState(i1=2 * PA, tau_oct=10.0)
    assert mr_nchrp(MrCoefficients(1.0, 1.0, 0.0), s) == pytest.approx(2 * PA, rel=1e-15)


def test_nchrp_oracle_27_4034():
    # 30-digit evaluation at I1 = 208, tau = 48.6 kPa
    assert mr_nchrp(MrCoefficients(689.3, 0.66, -0.03), StressState()) == pytest.approx(110960.65314182491, rel=1e-12)


def test_nchrp_domain():
    with pytest.raises(DomainError):
        mr_nchrp(MrCoefficients(1.0, 0.5, 0.0), StressState(i1=-10.0))


def test_me_identity_and_asymptote():
    p = MeMoistureParams(a=-0.6, b=0.4, k_m=6.0, s_opt=0.8, mr_opt=1e5)
    assert mr_me_ratio(p, 0.8) == pytest.approx(1e5, rel=1e-12)
    assert mr_me_ratio(p, 1e6) == pytest.approx(1e5 * 10**-0.6, rel=1e-12)
    assert mr_me_ratio(p, -1e6) == pytest.approx(1e5 * 10**0.4, rel=1e-12)


def test_me_oracle():
    p = MeMoistureParams(a=-0.6, b=0.4, k_m=6.0, s_opt=0.8, mr_opt=1e5)
    assert mr_me_ratio(p, 0.9) == pytest.approx(71042.63686933218, rel=1e-12)


def test_me_parameter_bounds():
    with pytest.raises(ParameterError):
        MeMoistureParams(a=0.1, b=0.4, k_m=6.0, s_opt=0.8, mr_opt=1e5)
    with pytest.raises(ParameterError):
        MeMoistureParams(a=-0.1, b=-0.4, k_m=6.0, s_opt=0.8, mr_opt=1e5)


@given(
    st.floats(-3, -0.01), st.floats(0.01, 3), st.floats(-50, 50), st.floats(0, 100), st.floats(1, 1e6)
)
def test_me_identity_property(a, b, km, s_opt, mr_opt):
    p = MeMoistureParams(a, b, km, s_opt, mr_opt)
    assert abs(mr_me_ratio(p, s_opt) / mr_opt - 1) <= 1e-12


def test_suction_reduces_to_nchrp_without_plus_one():
    c = MrCoefficients(689.3, 0.66, 0.0)
    assert mr_suction(c, StressState(), DRY) == pytest.approx(689.3 * PA * (208 / PA) ** 0.66, rel=1e-14)


def test_suction_oracle_21_4025():
    m = MoistureState(theta=0.065, saturation=0.3985, suction_kpa=751.0, f=1.0)
    c = MrCoefficients(945.55, 0.67, -0.29)
    assert mr_suction(c, StressState(), m) == pytest.approx(274348.1354674139, rel=1e-12)


def test_suction_plus_one_flag():
    c = MrCoefficients(689.3, 0.66, -0.03)
    assert mr_suction(c, StressState(), DRY, shear_plus_one=True) == pytest.approx(
        mr_nchrp(c, StressState()), rel=1e-14
    )


def test_suction_errors():
    c = MrCoefficients(100.0, 0.5, -0.2)
    with pytest.raises(DomainError):
        mr_suction(c, StressState(i1=1.0), MoistureState(0.1, 1.0, -100.0, 10.0))
    with pytest.raises(DomainError):
        mr_suction(c, StressState(tau_oct=0.0), DRY)


@given(
    st.floats(10, 2000), st.floats(0.01, 1.5), st.floats(-0.5, 0.5),
    st.floats(0.01, 0.4), st.floats(0, 5000), st.floats(0.1, 5000),
)
def test_suction_monotone(k1, k2, k3, theta, s1, ds):
    c = MrCoefficients(k1, k2, k3)
    lo = mr_suction(c, StressState(), MoistureState(theta, 0.5, s1, 1.0))
    hi = mr_suction(c, StressState(), MoistureState(theta, 0.5, s1 + ds, 1.0))
    assert 0 < lo < hi


def test_table6_direction_27_4034():
    c = MrCoefficients(689.3, 0.66, -0.03)
    wet = mr_suction(c, StressState(), MoistureState(0.174, 1.0, 1.43, 1 / 0.174))
    dry = mr_suction(c, StressState(), MoistureState(0.009, 0.0514, 315.0, 1.0))
    assert dry > wet
