"""Dirac-operator ingredients in the Cartan frame of the zGKN slice.

Weyl representation throughout: ``gamma^0`` swaps the two Weyl spinors and
``alpha^k = gamma^0 gamma^k = diag(sigma_k, -sigma_k)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AxisSingularity, InvalidQuantumNumbers
from .geometry import SIGMA_1, SIGMA_2, SIGMA_3, ETA, ModelParams, OblatePoint, _check_ring, frame_data

AXIS_GUARD = 1e-14

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)


@dataclass(frozen=True)
class GammaTables:
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    alpha: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def gamma_tables() -> GammaTables:
    g0 = np.block([[_Z2, _I2], [_I2, _Z2]])
    gk = [np.block([[_Z2, -s], [s, _Z2]]) for s in (SIGMA_1, SIGMA_2, SIGMA_3)]
    gammas = (g0, *gk)
    alphas = (np.eye(4, dtype=complex), *(g0 @ g for g in gk))
    return GammaTables(gamma=gammas, alpha=alphas)


def clifford_defect(tables: GammaTables | None = None) -> float:
    """Largest entry of ``{gamma^mu, gamma^nu} - 2 eta^{mu nu}`` over all 16 pairs."""
    g = (tables or gamma_tables()).gamma
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = g[mu] @ g[nu] + g[nu] @ g[mu]
            worst = max(worst, float(np.max(np.abs(anti - 2 * ETA[mu, nu] * np.eye(4)))))
    return worst


def validate_kappa(kappa: float, allow_integer: bool = False) -> Fraction:
    """Admissible azimuthal numbers: half-odd integers, or any nonzero half-integer with ``allow_integer``."""
    k = Fraction(kappa).limit_denominator(4)
    if k == 0 or abs(float(k) - kappa) > 1e-12 or (2 * k).denominator != 1:
        raise InvalidQuantumNumbers(f"kappa={kappa} is not a nonzero half-integer")
    if not allow_integer and k.denominator != 2:
        raise InvalidQuantumNumbers(f"kappa={kappa} is an integer; pass allow_integer=True to admit it")
    return k


def _check_axis(theta: float):
    if abs(math.sin(theta)) < AXIS_GUARD:
        raise AxisSingularity(f"theta={theta} lies on the symmetry axis")


def frak_m(p: OblatePoint, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """The lower-order matrices ``(m, m')`` of the frame Dirac operator; ``m' = -m^dagger``."""
    r, th, a = p.r, p.theta, params.a
    _check_axis(th)
    abs_rho = _check_ring(r, th, a)
    varpi = math.hypot(r, a)
    rho_c = complex(r, -a * math.cos(th))
    diag = r / varpi + varpi / rho_c
    off = math.cos(th) / math.sin(th) + 1j * a * math.sin(th) / rho_c
    m = np.array([[diag, off], [off, -diag]], dtype=complex) / (2 * abs_rho)
    return m, -m.conj().T


def frak_m_from_coefficients(p: OblatePoint, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Same matrices assembled from the rotation coefficients A..F and Pauli matrices."""
    _check_axis(p.theta)
    f = frame_data(p, params)
    m = 0.5 * ((-2 * f.C + f.F + 1j * f.B) * SIGMA_1 + (-f.A + 2 * f.E + 1j * f.D) * SIGMA_3)
    mp = 0.5 * ((2 * f.C - f.F + 1j * f.B) * SIGMA_1 + (f.A - 2 * f.E + 1j * f.D) * SIGMA_3)
    return m, mp


def chi(r: float, theta: float, a: float) -> complex:
    """``chi = log(varpi rho* sin(theta)) / 2`` on the principal branch."""
    return 0.5 * cmath.log(math.hypot(r, a) * complex(r, -a * math.cos(theta)) * math.sin(theta))


def chi_rescaling(r: float, theta: float, a: float) -> np.ndarray:
    """Diagonal matrix relating the frame bispinor to the separable one, ``Psi = D Psi_hat``."""
    c = chi(r, theta, a)
    return np.diag([cmath.exp(-c), cmath.exp(-c), cmath.exp(-c.conjugate()), cmath.exp(-c.conjugate())])


def _l_on_scalar(f, r: float, theta: float, a: float, h: float, primed: bool) -> np.ndarray:
    """Apply the frame operator l (or l') to a t- and phi-independent scalar by central differences."""
    abs_rho = math.hypot(r, a * math.cos(theta))
    varpi = math.hypot(r, a)
    dr = (f(r + h, theta) - f(r - h, theta)) / (2 * h)
    dth = (f(r, theta + h) - f(r, theta - h)) / (2 * h)
    if primed:
        mat = np.array([[-varpi * dr, -dth], [-dth, varpi * dr]])
    else:
        mat = np.array([[varpi * dr, dth], [dth, -varpi * dr]])
    return mat / abs_rho


def check_m_equals_l_chi(p: OblatePoint, params: ModelParams, h: float = 1e-4) -> float:
    """Max deviation between ``m`` and ``l chi`` (and ``m'`` and ``l' chi*``) by finite differences."""
    m, mp = frak_m(p, params)
    a = params.a
    lchi = _l_on_scalar(lambda r, t: chi(r, t, a), p.r, p.theta, a, h, primed=False)
    lpchi = _l_on_scalar(lambda r, t: chi(r, t, a).conjugate(), p.r, p.theta, a, h, primed=True)
    return float(max(np.max(np.abs(lchi - m)), np.max(np.abs(lpchi - mp))))


def m_zero(theta: float, r: float, params: ModelParams) -> np.ndarray:
    """Coefficient of the time derivative, ``varpi gamma^0 + a sin(theta) gamma^2``."""
    g = gamma_tables().gamma
    return math.hypot(r, params.a) * g[0] + params.a * math.sin(theta) * g[2]


def derivative_matrices(p: OblatePoint, params: ModelParams) -> dict[str, np.ndarray]:
    """Matrices ``M^mu`` with ``|rho| gamma^mu e_mu = M^mu d_mu``, keyed by coordinate name."""
    g = gamma_tables().gamma
    a, r, th = params.a, p.r, p.theta
    _check_axis(th)
    varpi = math.hypot(r, a)
    s = math.sin(th)
    return {
        "t": varpi * g[0] + a * s * g[2],
        "r": varpi * g[3],
        "theta": g[1],
        "phi": (a / varpi) * g[0] + g[2] / s,
    }


def separated_dirac_residual(p: OblatePoint, params: ModelParams, E: float, lam: float, kappa: float,
                             R: np.ndarray, S: np.ndarray) -> float:
    """Residual of the transformed Dirac equation for a separated bispinor at one point.

    ``R = (R1, R2)`` and ``S = (S1, S2)`` are arbitrary values at the point; their
    derivatives are taken from ``T_rad R = E R`` and ``T_ang S = lam S``.  A zero
    residual for random inputs confirms that the separated operators reproduce the
    full equation.  The separated pair is consistent with the phase factor
    ``exp(+i(E t - kappa phi))`` and the charge product ``e Q = -gamma``, i.e. the
    charge conjugate of the labelling ``exp(-i(E t - kappa phi))``, ``e Q = gamma``.
    """
    r, th, a = p.r, p.theta, params.a
    R1, R2 = R
    S1, S2 = S
    dR1, dR2 = radial_derivatives(r, R1, R2, E, lam, kappa, params)
    dS1, dS2 = angular_derivatives(th, S1, S2, E, lam, kappa, params)
    psi = np.array([R1 * S1, R2 * S2, R2 * S1, R1 * S2])
    d_r = np.array([dR1 * S1, dR2 * S2, dR2 * S1, dR1 * S2])
    d_th = np.array([R1 * dS1, R2 * dS2, R2 * dS1, R1 * dS2])
    d_t = 1j * E * psi
    d_phi = -1j * kappa * psi
    M = derivative_matrices(p, params)
    g = gamma_tables().gamma
    _check_ring(r, th, a)
    # i e |rho| gamma^0 Atilde_0 with Atilde_0 = -Q r / (|rho| varpi) and e Q = -gamma
    coupling = params.gamma * r / math.hypot(r, a) * g[0]
    rho = complex(r, a * math.cos(th))
    frak_r = np.diag([rho, rho, rho.conjugate(), rho.conjugate()])
    lhs = (M["t"] @ d_t + M["r"] @ d_r + M["theta"] @ d_th + M["phi"] @ d_phi
           + 1j * coupling @ psi + 1j * frak_r @ psi)
    return float(np.max(np.abs(lhs)) / max(1.0, float(np.max(np.abs(psi)))))


@dataclass(frozen=True)
class SeparatedCoefficients:
    w: float
    mr_over_varpi: float
    lambda_over_varpi: float
    ma_cos: float
    angular_f: float


def radial_potential(r: float, kappa: float, params: ModelParams) -> float:
    """``w(r) = (-a kappa + gamma r) / varpi^2``; the diagonal of T_rad is ``-w``."""
    a = params.a
    return (-a * kappa + params.gamma * r) / (r * r + a * a)


def angular_f(theta: float, E: float, kappa: float, params: ModelParams) -> float:
    """``a E sin(theta) - kappa / sin(theta)``."""
    s = math.sin(theta)
    if abs(s) < AXIS_GUARD:
        raise AxisSingularity(f"theta={theta} lies on the symmetry axis")
    return params.a * E * s - kappa / s


def separated_coefficients(r: float | None, theta: float | None, E: float, lam: float, kappa: float,
                           params: ModelParams) -> SeparatedCoefficients:
    nan = math.nan
    if r is not None:
        varpi = math.hypot(r, params.a)
        w, mr, lv = radial_potential(r, kappa, params), r / varpi, lam / varpi
    else:
        w = mr = lv = nan
    if theta is not None:
        mac, f = params.a * math.cos(theta), angular_f(theta, E, kappa, params)
    else:
        mac = f = nan
    return SeparatedCoefficients(w=w, mr_over_varpi=mr, lambda_over_varpi=lv, ma_cos=mac, angular_f=f)


def radial_derivatives(r, R1, R2, E, lam, kappa, params):
    """Solve ``T_rad (R1, R2) = E (R1, R2)`` for ``(R1', R2')``."""
    varpi = math.hypot(r, params.a)
    w = radial_potential(r, kappa, params)
    p, q = r / varpi, lam / varpi
    dR1 = -1j * ((E + w) * R1 + (p + 1j * q) * R2)
    dR2 = 1j * ((E + w) * R2 + (p - 1j * q) * R1)
    return dR1, dR2


def angular_derivatives(theta, S1, S2, E, lam, kappa, params):
    """Solve ``T_ang (S1, S2) = lam (S1, S2)`` for ``(S1', S2')``."""
    mac = params.a * math.cos(theta)
    f = angular_f(theta, E, kappa, params)
    dS1 = lam * S2 + f * S1 - mac * S2
    dS2 = -lam * S1 - f * S2 - mac * S1
    return dS1, dS2
