"""Electromagnetic potential and Appell fields on the double-sheeted slice.

All quantities are single valued functions of the oblate coordinates
``(r, theta)`` with ``r`` in the whole real line, so nothing jumps across the
disc ``r = 0``; only the ring ``r = 0, theta = pi/2`` is singular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ModelParams, OblatePoint, _check_ring

FIELD_GUARD = 1e-6


@dataclass(frozen=True)
class PotentialValue:
    A_t: float
    A_phi: float
    Atilde0: float
    Atilde2: float


@dataclass(frozen=True)
class FieldSample:
    point: OblatePoint
    phi_el: float
    E_vec: tuple[float, float]  # (cylindrical-radial, axial)
    B_vec: tuple[float, float]
    sheet: int


def potential(p: OblatePoint, params: ModelParams) -> PotentialValue:
    """Coordinate and frame components of the zGKN four-potential."""
    r, th, a, Q = p.r, p.theta, params.a, params.charge
    abs_rho = _check_ring(r, th, a)
    rho2 = abs_rho * abs_rho
    varpi = math.hypot(r, a)
    return PotentialValue(
        A_t=-Q * r / rho2,
        A_phi=Q * a * r * math.sin(th) ** 2 / rho2,
        Atilde0=-Q * r / (abs_rho * varpi),
        Atilde2=0.0,
    )


def generalized_potential(p: OblatePoint, Q: float, I: float, params: ModelParams) -> PotentialValue:
    """Potential with an independent ring current ``I`` (anomalous magnetic moment).

    ``I * pi * a == Q`` recovers :func:`potential`.
    """
    r, th, a = p.r, p.theta, params.a
    abs_rho = _check_ring(r, th, a)
    rho2 = abs_rho * abs_rho
    rho3 = rho2 * abs_rho
    varpi = math.hypot(r, a)
    s = math.sin(th)
    excess = Q - I * math.pi * a
    # coordinate components: Q a -> I pi a^2 in the d(phi) term
    return PotentialValue(
        A_t=-Q * r / rho2,
        A_phi=I * math.pi * a * a * r * s * s / rho2,
        Atilde0=-Q * r / (abs_rho * varpi) - excess * a * a * r * s * s / (varpi * rho3),
        Atilde2=-excess * a * r * s / rho3,
    )


def electric_potential(r, theta, params: ModelParams):
    """``Q r / |rho|^2``, the real part of the Appell potential (vectorized)."""
    a, Q = params.a, params.charge
    return Q * r / (r * r + (a * np.cos(theta)) ** 2)


def _field_components(r: float, th: float, a: float, Q: float):
    """(E_cyl, E_z, B_cyl, B_z) from closed-form (r, theta) partials."""
    s, c = math.sin(th), math.cos(th)
    varpi = math.hypot(r, a)
    rho_c = complex(r, -a * c)  # rho* = r - i a cos(theta)
    d_r = -Q / rho_c ** 2
    d_th = -Q * 1j * a * s / rho_c ** 2
    # E + iB = -grad(Phi); grad via the inverse-transpose Jacobian of (rho_cyl, z)(r, theta)
    j11, j12 = r * s / varpi, varpi * c
    j21, j22 = c, -r * s
    det = j11 * j22 - j12 * j21
    g_cyl = (j22 * d_r - j21 * d_th) / det
    g_z = (-j12 * d_r + j11 * d_th) / det
    return -g_cyl.real, -g_z.real, -g_cyl.imag, -g_z.imag


def appell_field(p: OblatePoint, params: ModelParams, current: float | None = None) -> FieldSample:
    """Electric and magnetic field from the complex potential ``Q / (r - i a cos(theta))``.

    With ``current`` given, the magnetic part is rescaled to the dipole strength
    ``I pi a`` instead of ``Q a``; the electric part is unchanged.
    """
    r, th, a, Q = p.r, p.theta, params.a, params.charge
    _check_ring(r, th, a)
    e_cyl, e_z, b_cyl, b_z = _field_components(r, th, a, Q)
    if current is not None and Q != 0:
        scale = current * math.pi * a / Q
        b_cyl, b_z = b_cyl * scale, b_z * scale
    phi = Q * r / (r * r + (a * math.cos(th)) ** 2)
    return FieldSample(point=p, phi_el=phi, E_vec=(e_cyl, e_z), B_vec=(b_cyl, b_z), sheet=p.sheet)


def field_grid(r_range: tuple[float, float], theta_range: tuple[float, float],
               resolution: tuple[int, int], params: ModelParams, guard: float = FIELD_GUARD,
               current: float | None = None) -> list[FieldSample | None]:
    """Row-major (r outer, theta inner) grid of field samples.

    Cells within ``guard`` of the ring (measured by ``|rho|``) are returned as
    ``None`` rather than evaluated.
    """
    nr, nth = resolution
    rs = np.linspace(r_range[0], r_range[1], nr)
    ths = np.linspace(theta_range[0], theta_range[1], nth)
    out: list[FieldSample | None] = []
    for r in rs:
        for th in ths:
            if math.hypot(r, params.a * math.cos(th)) <= guard:
                out.append(None)
                continue
            out.append(appell_field(OblatePoint(float(r), float(th)), params, current=current))
    return out
