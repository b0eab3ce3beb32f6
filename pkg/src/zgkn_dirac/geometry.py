"""Oblate spheroidal geometry of the double-sheeted zero-G Kerr-Newman slice.

Units: hbar = c = m = 1.  Lengths are in Compton wavelengths, the ring
radius ``a`` included.  Coordinates are ``(t, r, theta, phi)`` with ``r``
ranging over the whole real line; ``r > 0`` and ``r < 0`` are the two sheets,
glued through the disc ``r = 0`` spanned by the ring.  Metric signature is
(+, -, -, -).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RingSingularity

ALPHA_S = 1 / 137.036
RING_GUARD = 1e-14

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class ModelParams:
    """Ring radius ``a`` and coupling ``gamma = eQ/(hbar c)``.

    ``gamma`` plays the role of ``Z * alpha_S`` for a nucleus of charge Z.
    """

    a: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.gamma)):
            raise ValueError("a and gamma must be finite")

    @classmethod
    def from_Z(cls, a: float, Z: float) -> "ModelParams":
        return cls(a=a, gamma=Z * ALPHA_S)

    @property
    def charge(self) -> float:
        # e = 1 in the coupling units, so the field-source charge is gamma itself
        return self.gamma


@dataclass(frozen=True)
class OblatePoint:
    r: float
    theta: float
    phi: float = 0.0

    @property
    def sheet(self) -> int:
        return 1 if self.r > 0 else (-1 if self.r < 0 else 0)


@dataclass(frozen=True)
class FrameData:
    varpi: float
    rho: complex
    abs_rho: float
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float


@dataclass(frozen=True)
class MhatMatrix:
    matrix: np.ndarray
    lambda_plus: float
    lambda_minus: float


def _check_ring(r: float, theta: float, a: float, guard: float = RING_GUARD) -> float:
    abs_rho = math.hypot(r, a * math.cos(theta))
    if abs_rho <= guard:
        raise RingSingularity(f"point (r={r}, theta={theta}) lies on the ring singularity")
    return abs_rho


def frame_data(p: OblatePoint, params: ModelParams) -> FrameData:
    r, th, a = p.r, p.theta, params.a
    abs_rho = _check_ring(r, th, a)
    varpi = math.hypot(r, a)
    s, c = math.sin(th), math.cos(th)
    rho3 = abs_rho ** 3
    # F carries cot(theta) and is infinite on the axis; report inf there
    F = varpi ** 2 * c / (rho3 * s) if s != 0.0 else math.copysign(math.inf, c)
    return FrameData(
        varpi=varpi,
        rho=complex(r, a * c),
        abs_rho=abs_rho,
        A=a * a * r * s * s / (varpi * rho3),
        B=a * r * s / rho3,
        C=a * a * s * c / rho3,
        D=a * c * varpi / rho3,
        E=r * varpi / rho3,
        F=F,
    )


def metric_line_element(p: OblatePoint, params: ModelParams) -> tuple[float, float, float, float]:
    """Diagonal metric coefficients ``(g_tt, g_rr, g_thth, g_phph)``."""
    r, th, a = p.r, p.theta, params.a
    _check_ring(r, th, a)
    rho2 = r * r + a * a * math.cos(th) ** 2
    varpi2 = r * r + a * a
    return 1.0, -rho2 / varpi2, -rho2, -varpi2 * math.sin(th) ** 2


def metric_tensor(p: OblatePoint, params: ModelParams) -> np.ndarray:
    """Full 4x4 metric in (t, r, theta, phi) order."""
    return np.diag(metric_line_element(p, params))


def coframe(p: OblatePoint, params: ModelParams) -> np.ndarray:
    """Cartan co-frame: row ``alpha`` holds the components of omega^alpha on (dt, dr, dtheta, dphi)."""
    r, th, a = p.r, p.theta, params.a
    abs_rho = _check_ring(r, th, a)
    varpi = math.hypot(r, a)
    s = math.sin(th)
    w = np.zeros((4, 4))
    w[0, 0] = varpi / abs_rho
    w[0, 3] = -varpi / abs_rho * a * s * s
    w[1, 2] = abs_rho
    w[2, 0] = -a * s / abs_rho
    w[2, 3] = s * varpi ** 2 / abs_rho
    w[3, 1] = abs_rho / varpi
    return w


def frame_vectors(p: OblatePoint, params: ModelParams) -> np.ndarray:
    """Orthonormal frame dual to :func:`coframe`; row ``mu`` holds e_mu on (d_t, d_r, d_theta, d_phi)."""
    r, th, a = p.r, p.theta, params.a
    abs_rho = _check_ring(r, th, a)
    varpi = math.hypot(r, a)
    s = math.sin(th)
    e = np.zeros((4, 4))
    e[0, 0] = varpi / abs_rho
    e[0, 3] = a / (varpi * abs_rho)
    e[1, 2] = 1 / abs_rho
    e[2, 0] = a * s / abs_rho
    e[2, 3] = 1 / (abs_rho * s) if s != 0.0 else math.inf
    e[3, 1] = varpi / abs_rho
    return e


ALPHA_0 = np.eye(4, dtype=complex)
ALPHA_2 = np.block([[SIGMA_2, np.zeros((2, 2))], [np.zeros((2, 2)), -SIGMA_2]])


def mhat(p: OblatePoint, params: ModelParams) -> MhatMatrix:
    """Weight matrix of the bispinor inner product after the chi rescaling."""
    r, th, a = p.r, p.theta, params.a
    _check_ring(r, th, a)
    x = a * math.sin(th) / math.hypot(r, a)
    return MhatMatrix(matrix=ALPHA_0 + x * ALPHA_2, lambda_plus=1 + x, lambda_minus=1 - x)


def mhat_offdiag(r, theta, a):
    """Vectorized ``a sin(theta) / varpi``: the alpha^2 weight of M-hat."""
    return a * np.sin(theta) / np.hypot(r, a)


def volume_density(p: OblatePoint, params: ModelParams) -> float:
    """Coordinate density of the slice volume, ``|rho|^2 sin(theta)``."""
    r, th, a = p.r, p.theta, params.a
    return (r * r + (a * math.cos(th)) ** 2) * math.sin(th)


def to_cylindrical(r, theta, a):
    """Map oblate (r, theta) on either sheet to that sheet's Euclidean (rho_cyl, z)."""
    return np.hypot(r, a) * np.sin(theta), r * np.cos(theta)


def from_cylindrical(rho_cyl, z, a, sheet: int):
    """Inverse of :func:`to_cylindrical` on the chosen sheet (``+1`` or ``-1``)."""
    rho_cyl = np.asarray(rho_cyl, dtype=float)
    z = np.asarray(z, dtype=float)
    s = rho_cyl ** 2 + z ** 2 - a * a
    r2 = 0.5 * (s + np.sqrt(s * s + 4 * a * a * z * z))
    r = sheet * np.sqrt(r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_t = np.where(r2 > 0, z / np.where(r == 0, 1.0, r), 0.0)
        # on the disc r = 0, cos(theta) follows from rho_cyl = a sin(theta) and the side of approach
        disc = r2 <= 0
        cos_t = np.where(disc, sheet * np.sqrt(np.clip(1 - (rho_cyl / a) ** 2 if a else 0.0, 0, 1)), cos_t)
    return r, np.arccos(np.clip(cos_t, -1.0, 1.0))
