import math

import numpy as np
import pytest

from zgkn_dirac.angular import (AngularSolveRequest, angular_eigenvalue, angular_profile, branch_eigenvalues,
                                branch_index, branch_label, endpoint_phases, matrix_eigenvalues, solve_branch)
from zgkn_dirac.geometry import ModelParams

FLAT = ModelParams(0.0, 0.0)
SPIN = ModelParams(0.3, 0.0)


@pytest.mark.parametrize("kappa", [0.5, -0.5, 1.5])
def test_flat_eigenvalues_are_half_integers_shifted(kappa):
    lams = sorted(branch_eigenvalues(0.2, kappa, FLAT, window=4.6).values())
    base = abs(kappa) + 0.5
    expected = sorted([-(base + j) for j in range(5) if base + j < 4.6] + [base + j for j in range(5) if base + j < 4.6])
    assert lams == pytest.approx(expected, abs=1e-9)


def test_labels_follow_signed_index():
    eig = branch_eigenvalues(0.0, 0.5, FLAT, window=3.5)
    assert eig[branch_label(0.5, 0)] == pytest.approx(1.0, abs=1e-9)
    assert eig[branch_label(0.5, -1)] == pytest.approx(-1.0, abs=1e-9)
    for kappa in (0.5, -0.5):
        for n in range(-3, 3):
            assert branch_index(kappa, branch_label(kappa, n)) == n


def test_energy_reflection_partner():
    # (E, kappa, n) and (-E, -kappa, -1-n) carry opposite angular eigenvalues
    E, kappa = 0.4, 0.5
    for n in (-2, -1, 0, 1):
        lam = solve_branch(E, kappa, SPIN, branch_label(kappa, n))
        partner = solve_branch(-E, -kappa, SPIN, branch_label(-kappa, -1 - n))
        assert partner == pytest.approx(-lam, abs=1e-10)


@pytest.mark.parametrize("kappa", [0.5, -0.5])
def test_shooting_agrees_with_matrix_oracle(kappa):
    E = 0.5
    shot = sorted(branch_eigenvalues(E, kappa, SPIN, window=4.0).values())
    oracle = matrix_eigenvalues(E, kappa, SPIN, n=2000, count=10)
    for lam in shot:
        assert min(abs(oracle - lam)) < 1e-6


def test_solution_and_profile():
    sol = angular_eigenvalue(AngularSolveRequest(0.3, -0.5, SPIN, branch=branch_label(-0.5, -1)), n_nodes=200)
    assert sol.mismatch_residual < 1e-9
    theta, Theta, lnS = sol.theta_nodes, sol.Theta_profile, sol.lnS_profile
    assert theta.size == 201 and theta[100] == pytest.approx(math.pi / 2)
    assert lnS[100] == 0.0
    left, right = endpoint_phases(-0.5)
    assert Theta[0] == pytest.approx(left, abs=1e-5)
    assert (Theta[-1] - right) / (2 * math.pi) == pytest.approx(round((Theta[-1] - right) / (2 * math.pi)), abs=1e-5)
    # regular solution vanishes at both axis ends
    assert lnS[0] < -5 and lnS[-1] < -5


def test_odd_node_count_is_rounded_up():
    theta, _, _ = angular_profile(1.0, 0.0, 0.5, FLAT, n_nodes=11)
    assert theta.size == 13
    assert np.all(np.diff(theta) > 0)
