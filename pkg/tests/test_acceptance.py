"""Acceptance checks, one per criterion; each prints a PASS/FAIL line to the terminal."""
import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest

from zgkn_dirac.angular import branch_eigenvalues, matrix_eigenvalues
from zgkn_dirac.cli import main
from zgkn_dirac.fields import electric_potential
from zgkn_dirac.geometry import (ALPHA_S, ETA, ModelParams, OblatePoint, frame_vectors, from_cylindrical,
                                 metric_tensor, mhat)
from zgkn_dirac.operator import check_m_equals_l_chi
from zgkn_dirac.spectrum import (check_sufficient_conditions, refine_eigenpair, sommerfeld_energy)
from zgkn_dirac.wavefunction import marginal_density, normalize, reconstruct


@pytest.fixture
def verdict(capsys):
    def report(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return report


def _off_ring_points(rng, count, a_max=2.0, min_rho=0.2, axis_margin=0.05):
    pts = []
    while len(pts) < count:
        r, th = rng.uniform(-5, 5), rng.uniform(axis_margin, math.pi - axis_margin)
        a = rng.uniform(0.0, a_max)
        if math.hypot(r, a * math.cos(th)) >= min_rho:
            pts.append((OblatePoint(r, th), ModelParams(a, 0.0)))
    return pts


def test_criterion_01_sommerfeld_oracle(verdict):
    mpmath.mp.dps = 40
    alpha = 1 / 137.036
    exact = max(abs(sommerfeld_energy(n, n, alpha) - float(mpmath.sqrt(1 - mpmath.mpf(alpha) ** 2 / n ** 2)))
                for n in (1, 2, 3))
    expansion = max(abs(sommerfeld_energy(n, k, alpha) - (1 - alpha ** 2 / (2 * n * n)))
                    for n in range(1, 8) for k in range(1, n + 1))
    verdict(1, exact <= 1e-14 and expansion <= alpha ** 4,
            f"closed form vs mpmath {exact:.1e} (<= 1e-14); expansion gap {expansion:.2e} (<= {alpha ** 4:.2e})")


def test_criterion_02_angular_oracle(verdict):
    flat = ModelParams(0.0, 0.0)
    shot = np.array(sorted(branch_eigenvalues(0.0, 0.5, flat, window=5.6).values()))
    matrix = matrix_eigenvalues(0.0, 0.5, flat, n=2000, count=12)
    diff = max(float(np.min(np.abs(matrix - lam))) for lam in shot)
    unit = min(abs(shot - 1.0)), min(abs(shot + 1.0))
    verdict(2, diff <= 1e-6 and max(unit) <= 1e-9 and shot.size == 10,
            f"{shot.size} branches, shooting vs 2000-point matrix {diff:.1e} (<= 1e-6); "
            f"|lambda -+ 1| = {max(unit):.1e}")


def test_criterion_03_sommerfeld_cross_check(verdict, hydrogen_report, hydrogen_top_reports):
    ground = math.sqrt(1 - ALPHA_S ** 2)
    top = max(hydrogen_report.energies)
    rel = abs(top - ground) / ground
    devs = []
    for a in (1e-2, 1e-3, 1e-4):
        near = [E for E in hydrogen_top_reports[a].energies if abs(E - ground) < 1e-6]
        devs.append(max(abs(E - ground) for E in near))
    monotone = devs[0] > devs[1] > devs[2]
    verdict(3, rel <= 1e-3 and monotone,
            f"most positive E = {top:.15f}, relative offset {rel:.1e} (<= 1e-3); ground-level deviation "
            f"along a = 1e-2, 1e-3, 1e-4: {devs[0]:.1e}, {devs[1]:.1e}, {devs[2]:.1e}")


def test_criterion_04_energy_reflection_symmetry(verdict, hydrogen_report):
    d = hydrogen_report.symmetry_defect
    verdict(4, d is not None and d <= 1e-8 and len(hydrogen_report.eigenpairs) > 0,
            f"{len(hydrogen_report.eigenpairs)} eigenvalues, symmetry defect {d:.1e} (<= 1e-8)")


def test_criterion_05_gap(verdict, hydrogen_report):
    worst = max(abs(E) for E in hydrogen_report.energies)
    c = check_sufficient_conditions(ModelParams(5e-4, ALPHA_S))
    verdict(5, worst < 1 and hydrogen_report.gap_ok and c.cond1 and c.cond2 and abs(c.threshold - 0.031607) < 5e-7,
            f"max |E| = {worst:.17g}; conditions ({c.cond1}, {c.cond2}), threshold {c.threshold:.6f}")


def test_criterion_06_m_equals_l_chi(verdict):
    rng = np.random.default_rng(2024)
    # the finite-difference error grows like h^2 / sin(theta)^3 towards the axis
    pts = _off_ring_points(rng, 100, axis_margin=0.2)
    worst = max(check_m_equals_l_chi(p, params, h=1e-4) for p, params in pts)
    ratios = [check_m_equals_l_chi(p, params, h=2e-3) / check_m_equals_l_chi(p, params, h=1e-3)
              for p, params in pts if params.a > 0.05]
    order = math.log2(float(np.median(ratios)))
    verdict(6, worst <= 1e-6 and abs(order - 2) < 0.2,
            f"max residual at h = 1e-4: {worst:.1e} (<= 1e-6); observed order {order:.2f}")


def test_criterion_07_frame_and_inner_product(verdict):
    rng = np.random.default_rng(7)
    pts = _off_ring_points(rng, 1000)
    ortho = max(float(np.max(np.abs(frame_vectors(p, q) @ metric_tensor(p, q) @ frame_vectors(p, q).T - ETA)))
                for p, q in pts)
    eig_err, lowest = 0.0, math.inf
    for p, q in pts:
        x = q.a * math.sin(p.theta) / math.hypot(p.r, q.a)
        ev = np.linalg.eigvalsh(mhat(p, q).matrix)
        eig_err = max(eig_err, float(np.max(np.abs(ev - [1 - x, 1 - x, 1 + x, 1 + x]))))
        lowest = min(lowest, float(ev[0]))
    verdict(7, ortho <= 1e-12 and eig_err <= 1e-14 and lowest > 0,
            f"orthonormality {ortho:.1e} (<= 1e-12); M-hat eigenvalues {eig_err:.1e} (<= 1e-14); "
            f"smallest eigenvalue {lowest:.3f}")


def _cyl_potential(params, rho, z):
    r, th = from_cylindrical(rho, z, params.a, 1)
    return electric_potential(r, th, params)


def _laplacian_max(params, h):
    # five-point cylindrical Laplacian on a patch of the upper sheet away from the ring
    worst = 0.0
    for rho in np.arange(1.5, 2.5 + 1e-12, 0.25):
        for z in np.arange(0.5, 1.5 + 1e-12, 0.25):
            f = lambda dr, dz: _cyl_potential(params, rho + dr, z + dz)
            c = f(0, 0)
            d2 = (f(h, 0) - 2 * c + f(-h, 0)) / h ** 2 + (f(0, h) - 2 * c + f(0, -h)) / h ** 2
            d1 = (f(h, 0) - f(-h, 0)) / (2 * h * rho)
            worst = max(worst, abs(d2 + d1))
    return worst


def test_criterion_08_fields(verdict):
    params = ModelParams(1.0, 1.0)
    lap = [_laplacian_max(params, h) for h in (0.04, 0.02, 0.01)]
    orders = [math.log2(lap[i] / lap[i + 1]) for i in range(2)]
    rng = np.random.default_rng(3)
    anti = 0.0
    for _ in range(1000):
        r, th = rng.uniform(0.05, 10), rng.uniform(0.0, math.pi)
        if math.hypot(r, math.cos(th)) < 0.2:
            continue
        v = electric_potential(r, th, params)
        anti = max(anti, abs(electric_potential(-r, math.pi - th, params) + v) / abs(v))
    # sixth-order one-sided first derivatives at the disc, theta = pi/4
    th, h = math.pi / 4, 2e-3
    w = np.array([-49 / 20, 6, -15 / 2, 20 / 3, -15 / 4, 6 / 5, -1 / 6])
    right = sum(wk * electric_potential(k * h, th, params) for k, wk in enumerate(w)) / h
    left = -sum(wk * electric_potential(-k * h, th, params) for k, wk in enumerate(w)) / h
    exact = params.charge / (params.a * math.cos(th)) ** 2
    slope_gap = max(abs(right - left), abs(right - exact))
    ok = all(abs(o - 2) < 0.1 for o in orders) and anti <= 1e-14 and slope_gap <= 1e-10
    verdict(8, ok,
            f"Laplacian residual {lap[0]:.1e} -> {lap[1]:.1e} -> {lap[2]:.1e}, orders {orders[0]:.2f}, "
            f"{orders[1]:.2f}; sheet antisymmetry {anti:.1e} relative; disc slopes (left, right, exact) differ by {slope_gap:.1e}")


def test_criterion_09_bound_state_profile(verdict, hydrogen_report, hydrogen_params):
    positive = [p for p in hydrogen_report.eigenpairs if p.E > 0]
    pair = min(positive, key=lambda p: (p.E, p.kappa, p.n_theta))
    state = normalize(reconstruct(pair, hydrogen_params))
    mirrored = replace(pair, E=-pair.E, lam=-pair.lam, kappa=-pair.kappa, n_theta=-1 - pair.n_theta)
    partner = normalize(reconstruct(mirrored, hydrogen_params))
    rho, rho_p = marginal_density(state), marginal_density(partner)
    same_grid = np.array_equal(partner.r_nodes, -state.r_nodes[::-1])
    reflect = float(np.max(np.abs(rho_p[::-1] - rho)) / np.max(rho))
    w_minus = state.sheet_weights[0]
    verdict(9, same_grid and w_minus <= 1e-3 and reflect <= 1e-6,
            f"E = {pair.E:.15f}, w_minus = {w_minus:.1e} (<= 1e-3); reflected partner density "
            f"differs by {reflect:.1e} of the peak (<= 1e-6)")


def test_criterion_10_robustness(verdict, hydrogen_report, hydrogen_params, tmp_path):
    shifts = [abs(refine_eigenpair(p, hydrogen_params, r_scale=2.0, rel_tol=5e-11, abs_tol=5e-13).E - p.E)
              for p in hydrogen_report.eigenpairs]
    args = ["spectrum", "--a", "1e-3", "--kappa", "0.5,-0.5", "--E-window", "0.99999,0.999995"]
    files = []
    for threads in (1, 3):
        out = tmp_path / f"threads{threads}.json"
        assert main([*args, "--threads", str(threads), "-o", str(out)]) == 0
        files.append(out.read_bytes())
    same = files[0] == files[1]
    verdict(10, max(shifts) < 1e-9 and same,
            f"{len(shifts)} eigenvalues re-solved at 2 R_infinity and half tolerances, largest shift "
            f"{max(shifts):.1e} (< 1e-9); JSON identical across 1 and 3 threads: {same}")
