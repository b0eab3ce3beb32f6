"""Radial Pruefer problem on the whole line ``r in (-inf, inf)``.

With ``R1 = R exp(i Omega/2)`` and ``R2 = R exp(-i Omega/2)`` the radial
eigenvalue equation becomes

    Omega'  = 2 (r/varpi) cos(Omega) + 2 (lam/varpi) sin(Omega) - 2 w(r) - 2 E
    ln(R)'  = (r/varpi) sin(Omega) - (lam/varpi) cos(Omega)

with ``w = (-a kappa + gamma r) / varpi**2``.  For ``|E| < 1`` the phase has
hyperbolic fixed points ``-arccos(E)`` at ``+inf`` and ``-pi + arccos(E)`` at
``-inf``.  Both are attracting in the direction of integration towards
``r = 0``, so the start values need only be approximate.  Near the disc a
bound solution can be the subdominant one for an inward solve; the phase at
``r = 0`` then carries amplified integration error, but the steep ``2 pi``
jump of the mismatch through a level keeps the eigenvalue itself well
determined.  Profiles avoid the problem by matching on the bound sheet.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfGap, TruncationTooSmall
from .geometry import ModelParams
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, OdeProblem, integrate, integrate_grid

TWO_PI = 2 * math.pi
MIN_RING_RADIUS = 1e-6
TRUNCATION_SENSITIVITY = 1e-8


def default_r_infinity(E: float, gamma: float = 0.0) -> float:
    """Thirty decay lengths beyond the outer Coulomb turning point ``2 |gamma| / k^2``, ``k = sqrt(1 - E^2)``."""
    k2 = 1.0 - E * E
    return max(50.0, 30.0 / math.sqrt(k2) + 2.0 * abs(gamma) / k2)


@dataclass(frozen=True)
class RadialSolveRequest:
    E: float
    lam: float
    kappa: float
    params: ModelParams
    R_infinity: float | None = None
    rel_tol: float = DEFAULT_RTOL
    abs_tol: float = DEFAULT_ATOL

    def __post_init__(self):
        if not abs(self.E) < 1:
            raise OutOfGap(f"|E| = {abs(self.E)} is not inside the gap")
        if abs(self.params.a) < MIN_RING_RADIUS:
            raise ValueError(f"|a| = {abs(self.params.a)} is below {MIN_RING_RADIUS}; use the Sommerfeld oracle")

    @property
    def r_inf(self) -> float:
        return default_r_infinity(self.E, self.params.gamma) if self.R_infinity is None else float(self.R_infinity)


@dataclass
class RadialMatch:
    defect: float
    winding: int
    mismatch: float  # unreduced Omega_left(0) - Omega_right(0)
    omega_left: float
    omega_right: float
    r_nodes: np.ndarray = field(default_factory=lambda: np.empty(0))
    Omega_profile: np.ndarray = field(default_factory=lambda: np.empty(0))
    lnR_profile: np.ndarray = field(default_factory=lambda: np.empty(0))


def radial_rhs(r: float, Omega: float, E: float, lam: float, kappa: float, params: ModelParams) -> float:
    a, g = params.a, params.gamma
    v2 = r * r + a * a
    v = math.sqrt(v2)
    w = (-a * kappa + g * r) / v2
    return 2.0 * ((r * math.cos(Omega) + lam * math.sin(Omega)) / v - w - E)


def _make_rhs(E, lam, kappa, a, g):
    sqrt, sin, cos = math.sqrt, math.sin, math.cos
    ak = a * kappa
    a2 = a * a

    def rhs(r, Om):
        v2 = r * r + a2
        return 2.0 * ((r * cos(Om) + lam * sin(Om)) / sqrt(v2) - (g * r - ak) / v2 - E)

    return rhs


def _make_pair_rhs(E, lam, kappa, a, g):
    sqrt, sin, cos = math.sqrt, math.sin, math.cos
    ak = a * kappa
    a2 = a * a

    def rhs(r, y):
        v2 = r * r + a2
        v = sqrt(v2)
        s, c = sin(y[0]), cos(y[0])
        return np.array([2.0 * ((r * c + lam * s) / v - (g * r - ak) / v2 - E), (r * s - lam * c) / v])

    return rhs


def asymptotic_omega(E: float, side: str) -> float:
    """Fixed point of the phase equation at ``r = -inf`` (``"minus_inf"``) or ``r = +inf`` (``"plus_inf"``)."""
    if not abs(E) < 1:
        raise OutOfGap(f"|E| = {abs(E)} is not inside the gap")
    if side == "plus_inf":
        return -math.acos(E)
    if side == "minus_inf":
        return -math.pi + math.acos(E)
    raise ValueError(f"side must be 'minus_inf' or 'plus_inf', got {side!r}")


def start_phase(E: float, lam: float, params: ModelParams, r: float) -> float:
    """Asymptotic phase plus the ``1/|r|`` correction that balances the rhs at ``r``."""
    sign = 1.0 if r > 0 else -1.0
    star = asymptotic_omega(E, "plus_inf" if r > 0 else "minus_inf")
    d = sign * lam - params.gamma / math.sin(star)
    return star + d / abs(r)


def reduce_mismatch(raw: float) -> tuple[float, int]:
    """Split ``raw`` into ``defect + 2 pi winding`` with ``defect`` in ``(-pi, pi]``."""
    winding = math.ceil((raw - math.pi) / TWO_PI)
    return raw - TWO_PI * winding, int(winding)


def radial_mismatch(E: float, lam: float, kappa: float, params: ModelParams, r_inf: float | None = None,
                    rel_tol: float = DEFAULT_RTOL, abs_tol: float = DEFAULT_ATOL) -> tuple[float, float]:
    """``(Omega_left(0), Omega_right(0))`` with continuously tracked phases."""
    R = default_r_infinity(E, params.gamma) if r_inf is None else r_inf
    rhs = _make_rhs(E, lam, kappa, params.a, params.gamma)
    left0 = start_phase(E, lam, params, -R)
    right0 = start_phase(E, lam, params, R)
    # a cap on the step keeps the solver from stepping over the ring-scale structure near r = 0
    cap = 0.25 * R
    left = integrate(OdeProblem(rhs, -R, 0.0, left0, rel_tol, abs_tol), max_step=cap).final_state[1]
    right = integrate(OdeProblem(rhs, R, 0.0, right0, rel_tol, abs_tol), max_step=cap).final_state[1]
    return left, right


def shoot_radial(request: RadialSolveRequest, check_truncation: bool = False,
                 profile_nodes: int | None = None) -> RadialMatch:
    """Match the two inward solutions at ``r = 0``.

    With ``check_truncation`` the solve is repeated at ``2 R_infinity`` and
    :class:`TruncationTooSmall` is raised when the defect moves by more than
    ``1e-8``.  With ``profile_nodes`` the phase and ``ln R`` are also sampled
    on ``profile_nodes`` log-spaced ``|r|`` nodes per sheet (see
    :func:`radial_profile`).
    """
    E, lam, kappa, params = request.E, request.lam, request.kappa, request.params
    R = request.r_inf
    tol = dict(rel_tol=request.rel_tol, abs_tol=request.abs_tol)
    left, right = radial_mismatch(E, lam, kappa, params, R, **tol)
    raw = left - right
    if check_truncation:
        l2, r2 = radial_mismatch(E, lam, kappa, params, 2 * R, **tol)
        if abs((l2 - r2) - raw) > TRUNCATION_SENSITIVITY:
            raise TruncationTooSmall(
                f"defect moved by {abs((l2 - r2) - raw):.3e} when R_infinity was doubled from {R}")
    defect, winding = reduce_mismatch(raw)
    match = RadialMatch(defect=defect, winding=winding, mismatch=raw, omega_left=left, omega_right=right)
    if profile_nodes:
        match.r_nodes, match.Omega_profile, match.lnR_profile = radial_profile(
            E, lam, kappa, params, R, profile_nodes, **tol)
    return match


def profile_grid(R: float, n: int, a: float) -> np.ndarray:
    """Inward grid from ``R`` to ``0``: ``n`` log-spaced nodes down to ``min(a, 1)/100``, then zero."""
    r_min = min(abs(a), 1.0) * 1e-2
    return np.concatenate([np.geomspace(R, r_min, n), [0.0]])


def bound_sheet(E: float, params: ModelParams) -> int:
    """Sheet carrying the bulk of a state at energy ``E``: the one where ``gamma r`` attracts it."""
    return -1 if E * params.gamma < 0 else 1


def radial_profile(E: float, lam: float, kappa: float, params: ModelParams, R: float | None = None,
                   n_nodes: int = 2001, rel_tol: float = DEFAULT_RTOL, abs_tol: float = DEFAULT_ATOL):
    """``(r, Omega, ln R)`` on both sheets, ordered by increasing ``r``.

    The grid holds ``n_nodes`` log-spaced ``|r|`` nodes per sheet plus ``r = 0``.
    Profiles are matched at ``r_m = s / sqrt(1 - E^2)`` on the bound sheet ``s``
    (the nearest node is moved there) rather than at the disc.  Between the
    disc and ``|r| ~ 1`` the bound solution is the subdominant power law when
    integrated inwards, so an inward solve carries its errors amplified by
    about ``(1/a)^(2|lambda|)``.
    The solve from the far side of the disc reaches ``r_m`` stably, and so does
    the solve from the near end.  ``ln R`` is zero at ``r_m`` and the far
    half's phase is shifted by the multiple of ``2 pi`` that makes it continuous.
    """
    R = default_r_infinity(E, params.gamma) if R is None else R
    rhs = _make_pair_rhs(E, lam, kappa, params.a, params.gamma)
    inward = profile_grid(R, n_nodes, params.a)
    r = np.concatenate([-inward, inward[-2::-1]])
    sheet = bound_sheet(E, params)
    r_m = sheet / math.sqrt(1.0 - E * E)
    m = int(np.argmin(np.abs(r - r_m)))
    # the anchor must not move with the grid, so the nearest node is moved onto r_m
    r[m] = r_m
    # "near" integrates from the end on the bound sheet, "far" from the other end through the disc
    if sheet > 0:
        far_grid, near_grid = r[: m + 1], r[m:][::-1]
    else:
        far_grid, near_grid = r[m:][::-1], r[: m + 1]
    far = np.array(integrate_grid(rhs, far_grid, np.array([start_phase(E, lam, params, far_grid[0]), 0.0]),
                                  rel_tol, abs_tol))
    near = np.array(integrate_grid(rhs, near_grid, np.array([start_phase(E, lam, params, near_grid[0]), 0.0]),
                                   rel_tol, abs_tol))
    near[:, 0] += TWO_PI * round((far[-1, 0] - near[-1, 0]) / TWO_PI)
    far[:, 1] -= far[-1, 1]
    near[:, 1] -= near[-1, 1]
    if sheet > 0:
        Omega = np.concatenate([far[:, 0], near[-2::-1, 0]])
        lnR = np.concatenate([far[:, 1], near[-2::-1, 1]])
    else:
        Omega = np.concatenate([near[:, 0], far[-2::-1, 0]])
        lnR = np.concatenate([near[:, 1], far[-2::-1, 1]])
    return r, Omega, lnR
