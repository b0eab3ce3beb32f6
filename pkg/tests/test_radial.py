import math

import numpy as np
import pytest

from zgkn_dirac.errors import OutOfGap, TruncationTooSmall
from zgkn_dirac.geometry import ModelParams
from zgkn_dirac.radial import (RadialSolveRequest, asymptotic_omega, bound_sheet, default_r_infinity,
                               profile_grid, radial_profile, radial_rhs, reduce_mismatch, shoot_radial, start_phase)

P = ModelParams(0.05, 0.2)


def test_asymptotic_phases_are_fixed_points():
    for E in (-0.7, 0.0, 0.9):
        for side, r in (("plus_inf", 1e9), ("minus_inf", -1e9)):
            om = asymptotic_omega(E, side)
            assert radial_rhs(r, om, E, 1.0, 0.5, P) == pytest.approx(0.0, abs=1e-7)


def test_start_phase_balances_rhs_to_second_order():
    E, lam = 0.6, -1.3
    for r in (200.0, -200.0):
        assert abs(radial_rhs(r, start_phase(E, lam, P, r), E, lam, 0.5, P)) < 1e-3
        assert abs(radial_rhs(2 * r, start_phase(E, lam, P, 2 * r), E, lam, 0.5, P)) < 0.3e-3


def test_gap_and_ring_guards():
    with pytest.raises(OutOfGap):
        RadialSolveRequest(1.0, 1.0, 0.5, P)
    with pytest.raises(OutOfGap):
        asymptotic_omega(-1.2, "plus_inf")
    with pytest.raises(ValueError):
        RadialSolveRequest(0.5, 1.0, 0.5, ModelParams(0.0, 0.2))
    with pytest.raises(ValueError):
        asymptotic_omega(0.5, "left")


def test_reduce_mismatch():
    for raw in (0.0, 3.0, -3.0, 7.0, -20.0, math.pi):
        defect, n = reduce_mismatch(raw)
        assert -math.pi < defect <= math.pi
        assert defect + 2 * math.pi * n == pytest.approx(raw)


def test_default_truncation_grows_near_threshold():
    assert default_r_infinity(0.0) == 50.0
    k2 = 1 - 0.9999 ** 2
    assert default_r_infinity(0.9999) == pytest.approx(30 / math.sqrt(k2))
    assert default_r_infinity(0.9999, -0.01) == pytest.approx(30 / math.sqrt(k2) + 0.02 / k2)


@pytest.mark.parametrize("E,lam,kappa", [(0.3, 1.2, 0.5), (0.95, -0.9, -0.5), (0.7, 2.4, 1.5)])
def test_defect_antisymmetry(E, lam, kappa):
    d = shoot_radial(RadialSolveRequest(E, lam, kappa, P)).defect
    d_partner = shoot_radial(RadialSolveRequest(-E, -lam, -kappa, P)).defect
    assert d == pytest.approx(-d_partner, abs=1e-9)


def test_truncation_check_passes_with_default_and_fails_when_tiny():
    shoot_radial(RadialSolveRequest(0.5, 1.0, 0.5, P), check_truncation=True)
    with pytest.raises(TruncationTooSmall):
        shoot_radial(RadialSolveRequest(0.5, 1.0, 0.5, P, R_infinity=3.0), check_truncation=True)


def test_profile_layout_and_decay():
    E = 0.8
    r, _, lnR = radial_profile(E, 1.0, 0.5, P, n_nodes=301)
    assert r.size == 2 * 302 - 1
    assert np.all(np.diff(r) > 0) and r[301] == 0.0
    np.testing.assert_array_equal(profile_grid(10.0, 5, 0.05)[-1], 0.0)
    assert abs(np.interp(1 / math.sqrt(1 - E * E), r, lnR)) < 0.05
    # far tails decay like exp(-sqrt(1 - E^2) |r|)
    k = math.sqrt(1 - E * E)
    for lo, hi in ((-40.0, -30.0), (30.0, 40.0)):
        slope = (np.interp(hi, r, lnR) - np.interp(lo, r, lnR)) / (hi - lo)
        assert abs(slope) == pytest.approx(k, rel=0.05)


def test_bound_sheet():
    assert bound_sheet(0.5, P) == 1
    assert bound_sheet(-0.5, P) == -1
    assert bound_sheet(0.5, ModelParams(0.05, -0.2)) == -1
