"""Joint ``(E, lambda)`` eigenvalue search and the analytic hydrogen oracles.

For each angular branch the angular eigenvalue ``lambda(E)`` is followed by
continuation along an energy grid.  The unreduced radial mismatch
``D(E) = Omega_left(0) - Omega_right(0)`` is then evaluated, and bound
states sit where ``D`` crosses a multiple of ``2 pi``.  Away from a level
``D`` is nearly flat, and through a level it drops by ``2 pi`` over a very
narrow energy interval.  The reduced defect therefore hardly changes sign, and
levels are detected by counting crossings of the continuous ``D``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .angular import branch_label, shoot_angular, solve_branch
from .errors import InvalidQuantumNumbers, NoBranchFound, ZgknError
from .geometry import ALPHA_S, ModelParams
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, find_root
from .operator import validate_kappa
from .radial import TWO_PI, default_r_infinity, radial_mismatch, reduce_mismatch

E_STEP = 1e-3
E_EDGE = 1e-7
E_TOL = 1e-14
DEDUP_TOL = 1e-9
MAX_BISECTIONS = 60

#: edges of the essential spectrum, in units of mc^2; fixed, not computed
ESSENTIAL_EDGES = (-1.0, 1.0)


def sommerfeld_energy(n: int, kappa_s: int, alpha: float) -> float:
    """Dirac-Coulomb level in units of ``mc^2`` for principal number ``n`` and ``kappa_s = j + 1/2``."""
    if int(n) != n or int(kappa_s) != kappa_s or n < 1 or not 1 <= kappa_s <= n:
        raise InvalidQuantumNumbers(f"need integers 1 <= kappa_s <= n, got n={n}, kappa_s={kappa_s}")
    if not 0 < alpha < kappa_s:
        raise InvalidQuantumNumbers(f"need 0 < alpha < kappa_s, got alpha={alpha}")
    root = math.sqrt(kappa_s * kappa_s - alpha * alpha)
    if n == kappa_s:
        return root / kappa_s
    return 1.0 / math.sqrt(1.0 + (alpha / (n - kappa_s + root)) ** 2)


def bohr_energy(n: int, alpha: float, mu: float = 1.0) -> float:
    """Nonrelativistic binding energy ``-mu alpha^2 / (2 n^2)``."""
    if n < 1:
        raise InvalidQuantumNumbers(f"n must be positive, got {n}")
    return -mu * alpha * alpha / (2.0 * n * n)


def reduced_mass(m: float, m_p: float) -> float:
    return m * m_p / (m + m_p)


class SufficientConditions(NamedTuple):
    cond1: bool
    cond2: bool
    threshold: float


def check_sufficient_conditions(params: ModelParams) -> SufficientConditions:
    """The two smallness conditions that guarantee a nonempty point spectrum."""
    two_a = 2 * abs(params.a)
    threshold = math.sqrt(max(two_a * (1 - two_a), 0.0))
    return SufficientConditions(two_a < 1, abs(params.gamma) < threshold, threshold)


def max_nuclear_charge(a: float) -> int:
    """Largest integer ``Z`` with ``Z alpha_S`` below the coupling threshold at ring radius ``a``."""
    threshold = check_sufficient_conditions(ModelParams(a, 0.0)).threshold
    z = math.floor(threshold / ALPHA_S)
    return max(0, z - 1 if z * ALPHA_S >= threshold else z)


@dataclass(frozen=True)
class EigenPair:
    E: float
    lam: float
    kappa: float
    n_theta: int
    winding: int
    residuals: tuple[float, float]  # (Newton step in lambda, half-width in E that brackets the level)


@dataclass
class ScanMetadata:
    E_window: tuple[float, float]
    E_step: float
    grid_points: int
    evaluations: int = 0
    refinements: int = 0
    failures: list = field(default_factory=list)
    rel_tol: float = DEFAULT_RTOL
    abs_tol: float = DEFAULT_ATOL
    r_infinity_scale: float = 1.0


@dataclass
class SpectrumReport:
    params: ModelParams
    channels: list
    eigenpairs: list
    symmetry_defect: float | None
    gap_ok: bool
    scan: ScanMetadata
    conditions: SufficientConditions
    overridden: bool = False

    @property
    def energies(self) -> list[float]:
        return [p.E for p in self.eigenpairs]


def energy_grid(window: tuple[float, float], step: float = E_STEP, edge: float = E_EDGE) -> np.ndarray:
    """Uniform grid over ``window`` clipped to ``[-1 + edge, 1 - edge]``; symmetric windows give symmetric grids."""
    lo = max(window[0], -1 + edge)
    hi = min(window[1], 1 - edge)
    if not lo < hi:
        raise ValueError(f"empty energy window {window}")
    n = max(1, math.ceil((hi - lo) / step - 1e-9))
    grid = np.linspace(lo, hi, n + 1)
    if lo == -hi:
        grid = 0.5 * (grid - grid[::-1])
    return grid


class _Branch:
    """One ``(kappa, n_theta)`` cell: the composed mismatch ``D(E)`` with lambda continuation."""

    def __init__(self, params, kappa, n_theta, rel_tol, abs_tol, r_scale):
        self.params, self.kappa, self.n_theta = params, kappa, n_theta
        self.k = branch_label(kappa, n_theta)
        self.tol = dict(rel_tol=rel_tol, abs_tol=abs_tol)
        self.r_scale = r_scale
        self.evaluations = 0
        self.lam_at: dict[float, float] = {}

    def lam(self, E, guess=None):
        lam = solve_branch(E, self.kappa, self.params, self.k, guess=guess, **self.tol)
        self.lam_at[E] = lam
        return lam

    def mismatch(self, E, lam):
        self.evaluations += 1
        R = self.r_scale * default_r_infinity(E, self.params.gamma)
        left, right = radial_mismatch(E, lam, self.kappa, self.params, R, **self.tol)
        return left - right

    def D(self, E, guess):
        return self.mismatch(E, self.lam(E, guess))


def _interp_guess(E, lo, hi, lam_lo, lam_hi):
    t = (E - lo) / (hi - lo) if hi != lo else 0.0
    return lam_lo + t * (lam_hi - lam_lo)


def _crossings(d_lo, d_hi):
    """Multiples ``n`` of ``2 pi`` lying between ``d_lo`` and ``d_hi``."""
    lo, hi = sorted((d_lo, d_hi))
    return list(range(math.ceil(lo / TWO_PI), math.floor(hi / TWO_PI) + 1))


def _scan_branch(params, kappa, n_theta, grid, rel_tol, abs_tol, r_scale):
    """Eigenpairs of one branch over ``grid``; returns ``(pairs, evaluations, refinements, failures)``."""
    br = _Branch(params, kappa, n_theta, rel_tol, abs_tol, r_scale)
    failures = []
    samples = []  # (E, lam, D)
    guess = None
    for E in grid:
        E = float(E)
        try:
            lam = br.lam(E, guess)
            samples.append((E, lam, br.mismatch(E, lam)))
            guess = lam
        except ZgknError as exc:
            failures.append((kappa, n_theta, E, type(exc).__name__))
            guess = None

    refinements = 0
    pairs = []
    stack = [(samples[i], samples[i + 1]) for i in range(len(samples) - 1)][::-1]
    while stack:
        (E0, l0, d0), (E1, l1, d1) = stack.pop()
        levels = _crossings(d0, d1)
        if not levels:
            continue
        if len(levels) > 1 and E1 - E0 > 4 * np.spacing(E1) and refinements < 10_000:
            # split until each cell holds a single crossing
            Em = 0.5 * (E0 + E1)
            try:
                lm = br.lam(Em, _interp_guess(Em, E0, E1, l0, l1))
                mid = (Em, lm, br.mismatch(Em, lm))
            except ZgknError as exc:
                failures.append((kappa, n_theta, Em, type(exc).__name__))
                continue
            refinements += 1
            stack.append((mid, (E1, l1, d1)))
            stack.append(((E0, l0, d0), mid))
            continue
        for n in levels:
            pair = _solve_level(br, n, (E0, l0, d0), (E1, l1, d1))
            if pair is not None:
                pairs.append(pair)
    return pairs, br.evaluations, refinements, failures


def _solve_level(br: _Branch, n, lo, hi):
    (E0, l0, d0), (E1, l1, d1) = lo, hi
    target = TWO_PI * n

    def g(E):
        return br.D(E, _interp_guess(E, E0, E1, l0, l1)) - target

    g0, g1 = d0 - target, d1 - target
    if g0 == 0.0:
        E = E0
    elif g1 == 0.0:
        E = E1
    else:
        E = find_root(g, E0, E1, x_tol=E_TOL, g_lo=g0, g_hi=g1)
    lam = br.lam(E, _interp_guess(E, E0, E1, l0, l1))
    return EigenPair(E=E, lam=lam, kappa=br.kappa, n_theta=br.n_theta, winding=n,
                     residuals=_residuals(br, E, lam, n))


def _residuals(br: _Branch, E, lam, n):
    """``(angular, radial)`` residuals, both measured as distances to the exact root.

    The angular one is the Newton step ``|F - 2 pi k| / F'`` in lambda.  The
    mismatch jumps by ``2 pi`` over an energy interval far narrower than any
    useful step, so a Newton step in ``E`` is meaningless; the radial residual is
    instead the smallest half-width ``delta`` for which ``D(E - delta)`` and
    ``D(E + delta)`` verifiably straddle ``2 pi n``.
    """
    k, kappa, params = br.k, br.kappa, br.params
    h_l = 1e-7
    f0 = shoot_angular(lam, E, kappa, params, **br.tol) - TWO_PI * k
    slope_l = (shoot_angular(lam + h_l, E, kappa, params, **br.tol)
               - shoot_angular(lam - h_l, E, kappa, params, **br.tol)) / (2 * h_l)
    ang = abs(f0 / slope_l) if slope_l else math.inf
    target = TWO_PI * n
    delta = max(1e-13, 4 * float(np.spacing(E)))
    rad = math.inf
    while delta < 1e-6:
        below = br.mismatch(E - delta, lam) - target
        above = br.mismatch(min(E + delta, 1 - 1e-16), lam) - target
        if (below > 0) != (above > 0) or below == 0 or above == 0:
            rad = delta
            break
        delta *= 4
    return (float(ang), float(rad))


def symmetry_defect(energies: Sequence[float]) -> float | None:
    """``max_i min_j |E_i + E_j|`` over a computed set; ``None`` for an empty set."""
    E = np.asarray(sorted(energies), dtype=float)
    if E.size == 0:
        return None
    return float(np.max(np.min(np.abs(E[:, None] + E[None, :]), axis=1)))


def _dedup(pairs):
    out = []
    for p in sorted(pairs, key=lambda p: (p.kappa, p.n_theta, p.E)):
        if out and (out[-1].kappa, out[-1].n_theta) == (p.kappa, p.n_theta) and abs(out[-1].E - p.E) <= DEDUP_TOL:
            continue
        out.append(p)
    return out


def branch_indices(max_branches: int) -> list[int]:
    """Signed angular indices ``-max_branches .. max_branches - 1``."""
    return list(range(-max_branches, max_branches))


def point_spectrum(params: ModelParams, channels: Sequence[float], E_window: tuple[float, float] = (-1.0, 1.0),
                   max_branches: int = 1, max_eigenvalues: int | None = None, override: bool = False,
                   rel_tol: float = DEFAULT_RTOL, abs_tol: float = DEFAULT_ATOL, r_scale: float = 1.0,
                   E_step: float = E_STEP, threads: int = 1) -> SpectrumReport:
    """Bound states in ``E_window`` for every ``kappa`` in ``channels`` and every branch up to ``max_branches``.

    When the sufficient conditions fail and ``override`` is not set, no search is
    made and the report is empty.  ``max_eigenvalues`` keeps the most bound
    states (smallest ``|E|``).  Cells run on ``threads`` workers and are merged
    in a fixed order, so the report does not depend on the thread count.
    """
    kappas = [float(validate_kappa(k)) for k in channels]
    conditions = check_sufficient_conditions(params)
    grid = energy_grid(E_window, E_step)
    scan = ScanMetadata(E_window=(float(grid[0]), float(grid[-1])), E_step=E_step, grid_points=len(grid),
                        rel_tol=rel_tol, abs_tol=abs_tol, r_infinity_scale=r_scale)
    allowed = (conditions.cond1 and conditions.cond2) or override
    cells = [(k, n) for k in kappas for n in branch_indices(max_branches)] if allowed else []

    def run(cell):
        kappa, n_theta = cell
        try:
            return _scan_branch(params, kappa, n_theta, grid, rel_tol, abs_tol, r_scale)
        except ZgknError as exc:
            return [], 0, 0, [(kappa, n_theta, None, type(exc).__name__)]

    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]

    pairs = []
    for found, evals, refinements, failures in results:
        pairs.extend(found)
        scan.evaluations += evals
        scan.refinements += refinements
        scan.failures.extend(failures)
    pairs = _dedup(pairs)
    if max_eigenvalues is not None:
        pairs = sorted(pairs, key=lambda p: (abs(p.E), p.E, p.kappa, p.n_theta))[:max_eigenvalues]
    pairs.sort(key=lambda p: (p.E, p.kappa, p.n_theta))
    symmetric = sorted(kappas) == sorted(-k for k in kappas)
    return SpectrumReport(
        params=params,
        channels=kappas,
        eigenpairs=pairs,
        symmetry_defect=symmetry_defect([p.E for p in pairs]) if symmetric else None,
        gap_ok=all(abs(p.E) < 1 for p in pairs),
        scan=scan,
        conditions=conditions,
        overridden=override and not (conditions.cond1 and conditions.cond2),
    )


def refine_eigenpair(pair: EigenPair, params: ModelParams, r_scale: float = 1.0, rel_tol: float = DEFAULT_RTOL,
                     abs_tol: float = DEFAULT_ATOL, width: float = 1e-8) -> EigenPair:
    """Re-solve a known eigenpair under different truncation or tolerances, bracketing near ``pair.E``."""
    br = _Branch(params, pair.kappa, pair.n_theta, rel_tol, abs_tol, r_scale)
    target = TWO_PI * pair.winding
    lo, hi = pair.E - width, min(pair.E + width, 1 - 1e-15)
    for _ in range(40):
        l_lo, l_hi = br.lam(lo, pair.lam), br.lam(hi, pair.lam)
        d_lo, d_hi = br.mismatch(lo, l_lo), br.mismatch(hi, l_hi)
        if (d_lo > target) != (d_hi > target):
            return _solve_level(br, pair.winding, (lo, l_lo, d_lo), (hi, l_hi, d_hi))
        lo, hi = pair.E - 4 * (pair.E - lo), min(pair.E + 4 * (hi - pair.E), 1 - 1e-15)
    raise NoBranchFound(f"could not re-bracket the level near E={pair.E}")


class ComparisonRow(NamedTuple):
    E: float
    kappa: float
    n_theta: int
    n: int
    kappa_s: int
    E_sommerfeld: float
    deviation: float
    relative_deviation: float


def sommerfeld_levels(alpha: float, n_max: int) -> list[tuple[int, int, float]]:
    return [(n, k, sommerfeld_energy(n, k, alpha)) for n in range(1, n_max + 1) for k in range(1, n + 1)]


def sommerfeld_comparison(params: ModelParams, spectrum: SpectrumReport,
                          levels: Sequence[tuple[int, int]] | None = None) -> list[ComparisonRow]:
    """Pair each computed positive eigenvalue with the nearest Sommerfeld level (``alpha = |gamma|``).

    No quantum-number correspondence is assumed: the nearest level in energy wins.
    """
    alpha = abs(params.gamma)
    if levels is None:
        levels = [(n, k) for n, k, _ in sommerfeld_levels(alpha, 20)]
    table = [(n, k, sommerfeld_energy(n, k, alpha)) for n, k in levels]
    rows = []
    for p in spectrum.eigenpairs:
        if p.E <= 0:
            continue
        n, k, Es = min(table, key=lambda t: (abs(t[2] - p.E), t[0], t[1]))
        rows.append(ComparisonRow(p.E, p.kappa, p.n_theta, n, k, Es, p.E - Es, (p.E - Es) / Es))
    return rows
