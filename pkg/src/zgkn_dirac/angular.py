"""Angular Pruefer problem: eigenvalues ``lambda`` of T_ang for fixed ``(E, kappa)``.

With ``S1 = S cos(Theta/2)``, ``S2 = S sin(Theta/2)`` the eigenvalue equation
becomes a first-order equation for the phase ``Theta`` alone.  Regularity at
the axis fixes ``Theta`` modulo 2 pi at both ends:

* ``kappa > 0``: ``Theta(0) = 0`` and ``Theta(pi) = -pi``;
* ``kappa < 0``: ``Theta(0) = -pi`` and ``Theta(pi) = 0``.

The phase from the left end minus the phase from the right end, evaluated at
``theta = pi/2``, is an increasing function of ``lambda``; eigenvalues are the
points where it equals ``2 pi k``.  The integer ``k`` labels the branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AxisSingularity, NoBranchFound, OutOfGap
from .geometry import ModelParams
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, OdeProblem, find_root, integrate, integrate_grid

THETA_START = 1e-6
MATCH_THETA = 0.5 * math.pi
LAMBDA_STEP = 0.25
LAMBDA_TOL = 1e-12
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class AngularSolveRequest:
    E: float
    kappa: float
    params: ModelParams
    branch: int = 0
    lambda_bracket: tuple[float, float] | None = None

    def __post_init__(self):
        if not abs(self.E) < 1:
            raise OutOfGap(f"|E| = {abs(self.E)} is not inside the gap")


@dataclass
class AngularSolution:
    lam: float
    branch: int
    theta_nodes: np.ndarray = field(default_factory=lambda: np.empty(0))
    Theta_profile: np.ndarray = field(default_factory=lambda: np.empty(0))
    lnS_profile: np.ndarray = field(default_factory=lambda: np.empty(0))
    mismatch_residual: float = 0.0


def angular_rhs(theta: float, Theta: float, E: float, lam: float, kappa: float, params: ModelParams) -> float:
    s = math.sin(theta)
    if abs(s) < 1e-14:
        raise AxisSingularity(f"theta={theta} lies on the symmetry axis")
    a = params.a
    return 2.0 * (lam - a * math.cos(theta) * math.cos(Theta) + (a * E * s - kappa / s) * math.sin(Theta))


def _make_rhs(E, lam, kappa, a):
    sin, cos = math.sin, math.cos

    def rhs(th, Th):
        s = sin(th)
        return 2.0 * (lam - a * cos(th) * cos(Th) + (a * E * s - kappa / s) * sin(Th))

    return rhs


def _make_pair_rhs(E, lam, kappa, a):
    sin, cos = math.sin, math.cos

    def rhs(th, y):
        s, c = sin(th), cos(th)
        f = a * E * s - kappa / s
        sT, cT = sin(y[0]), cos(y[0])
        return np.array([2.0 * (lam - a * c * cT + f * sT), -a * c * sT - f * cT])

    return rhs


def endpoint_phases(kappa: float) -> tuple[float, float]:
    """Regular values of ``Theta`` at ``theta = 0`` and ``theta = pi``."""
    return (0.0, -math.pi) if kappa > 0 else (-math.pi, 0.0)


def frobenius_starts(lam: float, kappa: float, params: ModelParams, theta0: float = THETA_START):
    """``(Theta(theta0), Theta(pi - theta0))`` from the leading regular series term at each axis end."""
    a = params.a
    k = abs(kappa)
    left0, right0 = endpoint_phases(kappa)
    if kappa > 0:
        left = left0 + 2 * (lam - a) * theta0 / (1 + 2 * k)
        right = right0 - 2 * (lam - a) * theta0 / (1 + 2 * k)
    else:
        left = left0 + 2 * (lam + a) * theta0 / (1 + 2 * k)
        right = right0 - 2 * (lam + a) * theta0 / (1 + 2 * k)
    return left, right


def shoot_angular(lam: float, E: float, kappa: float, params: ModelParams,
                  rel_tol: float = DEFAULT_RTOL, abs_tol: float = DEFAULT_ATOL,
                  theta0: float = THETA_START) -> float:
    """Unreduced phase mismatch ``Theta_left(pi/2) - Theta_right(pi/2)``."""
    rhs = _make_rhs(E, lam, kappa, params.a)
    left0, right0 = frobenius_starts(lam, kappa, params, theta0)
    left = integrate(OdeProblem(rhs, theta0, MATCH_THETA, left0, rel_tol, abs_tol)).final_state[1]
    right = integrate(OdeProblem(rhs, math.pi - theta0, MATCH_THETA, right0, rel_tol, abs_tol)).final_state[1]
    return left - right


def default_lambda_window(E: float, kappa: float, params: ModelParams) -> float:
    return 20 + 2 * abs(kappa) + 2 * abs(params.a) * (1 + abs(E))


def scan_branches(E: float, kappa: float, params: ModelParams, window: float | None = None,
                  step: float = LAMBDA_STEP, **tol) -> list[tuple[int, float, float, float, float]]:
    """Brackets ``(k, lo, hi, F(lo) - 2 pi k, F(hi) - 2 pi k)`` for every branch crossing in the window."""
    lam_max = default_lambda_window(E, kappa, params) if window is None else window
    n = int(round(2 * lam_max / step))
    lams = np.linspace(-lam_max, lam_max, n + 1)
    F = [shoot_angular(float(x), E, kappa, params, **tol) for x in lams]
    out = []
    for i in range(n):
        f_lo, f_hi = F[i], F[i + 1]
        k_lo, k_hi = sorted((math.floor(f_lo / TWO_PI), math.floor(f_hi / TWO_PI)))
        for k in range(k_lo + 1, k_hi + 1):
            out.append((k, float(lams[i]), float(lams[i + 1]), f_lo - TWO_PI * k, f_hi - TWO_PI * k))
    return out


def branch_eigenvalues(E: float, kappa: float, params: ModelParams, window: float | None = None,
                       **tol) -> dict[int, float]:
    """All angular eigenvalues in ``[-window, window]`` keyed by branch label."""
    result = {}
    for k, lo, hi, g_lo, g_hi in scan_branches(E, kappa, params, window, **tol):
        result[k] = _refine(k, lo, hi, g_lo, g_hi, E, kappa, params, **tol)
    return dict(sorted(result.items(), key=lambda kv: kv[1]))


def _refine(k, lo, hi, g_lo, g_hi, E, kappa, params, **tol) -> float:
    def g(x):
        return shoot_angular(x, E, kappa, params, **tol) - TWO_PI * k

    return find_root(g, lo, hi, x_tol=LAMBDA_TOL, g_lo=g_lo, g_hi=g_hi)


def solve_branch(E: float, kappa: float, params: ModelParams, branch: int, guess: float | None = None,
                 width: float = 0.05, **tol) -> float:
    """Eigenvalue of branch ``branch``; brackets outward from ``guess`` when one is given."""
    if guess is None:
        eig = branch_eigenvalues(E, kappa, params, **tol)
        if branch not in eig:
            raise NoBranchFound(f"branch {branch} not found for E={E}, kappa={kappa}")
        return eig[branch]

    def g(x):
        return shoot_angular(x, E, kappa, params, **tol) - TWO_PI * branch

    lo, hi = guess - width, guess + width
    g_lo, g_hi = g(lo), g(hi)
    grow = 0
    while g_lo > 0 or g_hi < 0:
        grow += 1
        if grow > 40:
            raise NoBranchFound(f"could not bracket branch {branch} near lambda={guess}")
        if g_lo > 0:
            lo, hi, g_hi = lo - 2 * (hi - lo), lo, g_lo
            g_lo = g(lo)
        else:
            lo, hi, g_lo = hi, hi + 2 * (hi - lo), g_hi
            g_hi = g(hi)
    return find_root(g, lo, hi, x_tol=LAMBDA_TOL, g_lo=g_lo, g_hi=g_hi)


def branch_label(kappa: float, n_theta: int) -> int:
    """Mismatch label ``k`` of the angular branch with signed index ``n_theta``.

    ``n_theta = 0, 1, 2, ...`` follow the ``a = 0`` eigenvalues ``+1, +2, +3, ...``
    and ``n_theta = -1, -2, ...`` follow ``-1, -2, ...``.  Flipping the sign of
    ``kappa`` and ``lambda`` maps ``n_theta`` to ``-1 - n_theta``.
    """
    return n_theta + (1 if kappa > 0 else 0)


def branch_index(kappa: float, k: int) -> int:
    """Inverse of :func:`branch_label`."""
    return k - (1 if kappa > 0 else 0)


def angular_eigenvalue(request: AngularSolveRequest, n_nodes: int = 512, with_profile: bool = True,
                       **tol) -> AngularSolution:
    """Solve one angular branch and, optionally, reconstruct ``Theta`` and ``ln S`` on a uniform grid."""
    E, kappa, params, k = request.E, request.kappa, request.params, request.branch
    if request.lambda_bracket is not None:
        lo, hi = request.lambda_bracket

        def g(x):
            return shoot_angular(x, E, kappa, params, **tol) - TWO_PI * k

        lam = find_root(g, lo, hi, x_tol=LAMBDA_TOL)
    else:
        lam = solve_branch(E, kappa, params, k, **tol)
    residual = shoot_angular(lam, E, kappa, params, **tol) - TWO_PI * k
    sol = AngularSolution(lam=lam, branch=k, mismatch_residual=abs(residual))
    if with_profile:
        sol.theta_nodes, sol.Theta_profile, sol.lnS_profile = angular_profile(lam, E, kappa, params, n_nodes, **tol)
    return sol


def angular_profile(lam: float, E: float, kappa: float, params: ModelParams, n_nodes: int = 512,
                    theta0: float = THETA_START, **tol):
    """``(theta, Theta, ln S)`` on ``n_nodes`` points spanning ``[theta0, pi - theta0]``.

    ``ln S`` is anchored to zero at ``pi/2`` from both sides, the right half
    being shifted by ``2 pi k`` in ``Theta`` so the phase is continuous.
    """
    rtol = tol.get("rel_tol", DEFAULT_RTOL)
    atol = tol.get("abs_tol", DEFAULT_ATOL)
    if n_nodes % 2:
        n_nodes += 1
    half = n_nodes // 2
    left_grid = np.linspace(theta0, MATCH_THETA, half + 1)
    right_grid = np.linspace(math.pi - theta0, MATCH_THETA, half + 1)
    rhs = _make_pair_rhs(E, lam, kappa, params.a)
    l0, r0 = frobenius_starts(lam, kappa, params, theta0)
    left = np.array(integrate_grid(rhs, left_grid, np.array([l0, 0.0]), rtol, atol))
    right = np.array(integrate_grid(rhs, right_grid, np.array([r0, 0.0]), rtol, atol))
    shift = left[-1, 0] - right[-1, 0]
    right[:, 0] += shift
    left[:, 1] -= left[-1, 1]
    right[:, 1] -= right[-1, 1]
    theta = np.concatenate([left_grid, right_grid[-2::-1]])
    Theta = np.concatenate([left[:, 0], right[-2::-1, 0]])
    lnS = np.concatenate([left[:, 1], right[-2::-1, 1]])
    return theta, Theta, lnS


def _pencil_eigenvalues(E, kappa, a, n, x_max, count):
    from scipy.sparse import bmat, diags
    from scipy.sparse.linalg import eigsh

    h = 2 * x_max / n
    xh = -x_max + h * (np.arange(n) + 0.5)      # S2 nodes
    if kappa > 0:
        xi = -x_max + h * np.arange(1, n + 1)   # S1 nodes, S1 = 0 at the left end
    else:
        xi = -x_max + h * np.arange(n)          # S1 nodes, S1 = 0 at the right end

    def sin_t(x):
        return 1 / np.cosh(x)

    def cos_t(x):
        return -np.tanh(x)

    def fs(x):
        return a * E * sin_t(x) ** 2 - kappa

    # S1 at x pairs with S2 at x - h/2 (weight 1/h) and x + h/2 (weight -1/h)
    to_left = 1 / h - 0.5 * fs(xi - 0.25 * h)
    to_right = -1 / h - 0.5 * fs(xi + 0.25 * h)
    if kappa > 0:
        C = diags([to_left, to_right[:-1]], [0, 1], shape=(n, n))
    else:
        C = diags([to_right, to_left[1:]], [0, -1], shape=(n, n))
    A = bmat([[diags(-a * cos_t(xi) * sin_t(xi)), C], [C.T, diags(a * cos_t(xh) * sin_t(xh))]]).tocsc()
    B = diags(np.concatenate([sin_t(xi), sin_t(xh)])).tocsc()
    # shift away from zero so the factorization never meets an exact eigenvalue
    vals = eigsh(A, k=count, M=B, sigma=0.123456789, which="LM", return_eigenvectors=False)
    return np.sort(vals)


def matrix_eigenvalues(E: float, kappa: float, params: ModelParams, n: int = 4000,
                       x_max: float = 24.0, count: int = 10, extrapolate: bool = True) -> np.ndarray:
    """Eigenvalues near zero of a finite-difference discretization of T_ang (independent oracle).

    Works in ``x = log(tan(theta/2))``, where ``d/dtheta = sech(x) d/dx`` and the
    axis behaviour ``sin(theta)**(+-kappa)`` becomes ``exp(+-kappa x)``.  Multiplying
    T_ang by ``sin(theta)`` gives a symmetric pencil ``A u = lambda B u`` with
    ``B = diag(sin(theta))``.  On ``[-x_max, x_max]`` the two components sit on
    staggered integer and half-integer nodes; each end carries a Dirichlet
    condition on the component that is subdominant there (``S2`` at the axis
    end where ``Theta -> 0``, ``S1`` where ``Theta -> -pi``), which excludes the
    borderline non-normalizable solution at ``|kappa| = 1/2``.  Central
    differences use pair-midpoint coefficients, keeping ``A`` symmetric and the
    scheme second order; with ``extrapolate`` the grids ``n`` and ``2n`` are
    combined by Richardson extrapolation.
    """
    a = params.a
    pad = 4
    coarse = _pencil_eigenvalues(E, kappa, a, n, x_max, count + pad)
    if not extrapolate:
        return coarse[pad // 2: pad // 2 + count]
    fine = _pencil_eigenvalues(E, kappa, a, 2 * n, x_max, count + pad)
    matched = np.array([coarse[np.argmin(np.abs(coarse - v))] for v in fine])
    return ((4 * fine - matched) / 3)[pad // 2: pad // 2 + count]
