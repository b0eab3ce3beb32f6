import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zgkn_dirac.errors import AxisSingularity, InvalidQuantumNumbers
from zgkn_dirac.geometry import ModelParams, OblatePoint
from zgkn_dirac.operator import (check_m_equals_l_chi, clifford_defect, frak_m, frak_m_from_coefficients,
                                 gamma_tables, radial_potential, separated_coefficients, separated_dirac_residual,
                                 validate_kappa)


def test_clifford_algebra():
    assert clifford_defect() == 0.0
    g = gamma_tables()
    assert np.allclose(g.alpha[2], np.diag([1, 1, 1, 1]) @ g.gamma[0] @ g.gamma[2])


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5).filter(lambda r: abs(r) > 1e-2), st.floats(0.05, math.pi - 0.05), st.floats(0, 2))
def test_m_two_ways(r, th, a):
    p, params = OblatePoint(r, th), ModelParams(a, 0.0)
    m1, mp1 = frak_m(p, params)
    m2, mp2 = frak_m_from_coefficients(p, params)
    assert np.allclose(m1, m2, atol=1e-10)
    assert np.allclose(mp1, mp2, atol=1e-10)


def test_m_equals_l_chi_second_order():
    p, params = OblatePoint(0.6, 1.0), ModelParams(0.9, 0.0)
    coarse = check_m_equals_l_chi(p, params, h=1e-3)
    fine = check_m_equals_l_chi(p, params, h=5e-4)
    assert 3.0 < coarse / fine < 5.0


@pytest.mark.parametrize("kappa", [0.5, -1.5, 2.5])
def test_separated_equations_reproduce_dirac(kappa):
    rng = np.random.default_rng(7)
    params = ModelParams(0.7, 0.05)
    for _ in range(20):
        p = OblatePoint(rng.uniform(-3, 3), rng.uniform(0.1, 3.0))
        R = rng.normal(size=2) + 1j * rng.normal(size=2)
        S = rng.normal(size=2)
        res = separated_dirac_residual(p, params, E=rng.uniform(-1, 1), lam=rng.normal(), kappa=kappa, R=R, S=S)
        assert res < 1e-12


def test_kappa_validation():
    assert validate_kappa(0.5) == 0.5
    assert validate_kappa(-3.5) == -3.5
    with pytest.raises(InvalidQuantumNumbers):
        validate_kappa(1.0)
    assert validate_kappa(1.0, allow_integer=True) == 1
    with pytest.raises(InvalidQuantumNumbers):
        validate_kappa(0.3)
    with pytest.raises(InvalidQuantumNumbers):
        validate_kappa(0.0, allow_integer=True)


def test_axis_guard():
    with pytest.raises(AxisSingularity):
        frak_m(OblatePoint(1.0, 0.0), ModelParams(0.5, 0.0))


def test_coefficients_at_ring_plane():
    c = separated_coefficients(0.0, math.pi / 2, 0.3, 1.0, 0.5, ModelParams(0.2, 0.1))
    assert c.w == pytest.approx(-0.2 * 0.5 / 0.04)
    assert c.lambda_over_varpi == pytest.approx(5.0)
    assert c.ma_cos == pytest.approx(0.0, abs=1e-16)
    assert radial_potential(1e6, 0.5, ModelParams(0.2, 0.1)) == pytest.approx(0.1 / 1e6, rel=1e-6)
