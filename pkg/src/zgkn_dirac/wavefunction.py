"""Bound-state bispinors rebuilt from the Pruefer variables, and their M-hat norms.

The separated bispinor at ``t = phi = 0`` is

    R S (cos(Theta/2) e^{i Omega/2}, sin(Theta/2) e^{-i Omega/2},
         cos(Theta/2) e^{-i Omega/2}, sin(Theta/2) e^{i Omega/2})

and its M-hat density reduces to ``2 R^2 S^2 (1 - (a sin(theta)/varpi) sin(Theta) sin(Omega))``.
The density therefore splits into an ``r`` part and a ``theta`` part, so the
norm is a sum of two products of one-dimensional integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .angular import angular_profile
from .errors import ZeroNorm
from .geometry import ModelParams
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL, simpson
from .radial import default_r_infinity, radial_profile
from .spectrum import EigenPair

R_NODES = 2001
THETA_NODES = 512
_LOG_TINY = -745.0  # exp() underflows to zero below this


@dataclass
class BoundState:
    eigenpair: EigenPair
    params: ModelParams
    r_nodes: np.ndarray
    theta_nodes: np.ndarray
    R: np.ndarray
    Omega: np.ndarray
    S: np.ndarray
    Theta: np.ndarray
    norm: float = math.nan
    sheet_weights: tuple[float, float] = (math.nan, math.nan)
    underflow: bool = False
    _angular: tuple[float, float] = field(default=(math.nan, math.nan), repr=False)  # theta integrals


def _exp_clamped(log_values: np.ndarray) -> tuple[np.ndarray, bool]:
    # keep the matching-point anchor (grid independent) unless that would overflow
    top = float(np.max(log_values))
    shifted = log_values - top if top > 600 else log_values
    tiny = shifted < _LOG_TINY
    return np.where(tiny, 0.0, np.exp(np.maximum(shifted, _LOG_TINY))), bool(np.any(tiny))


def _angular_integrals(theta, S, Theta):
    """``(int S^2, int S^2 sin(theta) sin(Theta))`` over ``theta``."""
    s2 = S * S
    return float(simpson(s2, theta)), float(simpson(s2 * np.sin(theta) * np.sin(Theta), theta))


def marginal_density(state: BoundState) -> np.ndarray:
    """Density integrated over ``theta`` and ``phi`` at every radial node."""
    a = state.params.a
    plain, coupled = state._angular
    R2 = state.R * state.R
    x = a * np.sin(state.Omega) / np.hypot(state.r_nodes, a)
    return 4 * math.pi * R2 * (plain - x * coupled)


def reconstruct(pair: EigenPair, params: ModelParams, n_r: int = R_NODES, n_theta: int = THETA_NODES,
                R_infinity: float | None = None, rel_tol: float = DEFAULT_RTOL,
                abs_tol: float = DEFAULT_ATOL) -> BoundState:
    """Profiles of ``pair`` on ``n_r`` log-spaced ``|r|`` nodes per sheet and ``n_theta`` angular nodes.

    ``ln R`` is anchored at the radial matching node and ``ln S`` at ``theta = pi/2``, so the raw
    norm does not depend on the grids; :func:`normalize` fixes the overall constant.
    """
    R_inf = default_r_infinity(pair.E, params.gamma) if R_infinity is None else R_infinity
    r, Omega, lnR = radial_profile(pair.E, pair.lam, pair.kappa, params, R_inf, n_r, rel_tol, abs_tol)
    theta, Theta, lnS = angular_profile(pair.lam, pair.E, pair.kappa, params, n_theta,
                                        rel_tol=rel_tol, abs_tol=abs_tol)
    R, flag_r = _exp_clamped(lnR)
    S, flag_s = _exp_clamped(lnS)
    state = BoundState(eigenpair=pair, params=params, r_nodes=r, theta_nodes=theta, R=R, Omega=Omega,
                       S=S, Theta=Theta, underflow=flag_r or flag_s)
    state._angular = _angular_integrals(theta, S, Theta)
    state.norm = state_norm(state)
    return state


def state_norm(state: BoundState) -> float:
    return float(simpson(marginal_density(state), state.r_nodes))


def components(state: BoundState) -> np.ndarray:
    """Bispinor on the ``(r, theta)`` grid at ``t = phi = 0``; shape ``(4, n_r, n_theta)``."""
    R = state.R[:, None]
    half_om = 0.5 * state.Omega[:, None]
    S = state.S[None, :]
    c, s = np.cos(0.5 * state.Theta)[None, :], np.sin(0.5 * state.Theta)[None, :]
    up, down = np.exp(1j * half_om), np.exp(-1j * half_om)
    return np.stack([R * S * c * up, R * S * s * down, R * S * c * down, R * S * s * up])


def normalize(state: BoundState) -> BoundState:
    """Rescale ``R`` so that the M-hat norm is one, and fill in the sheet weights."""
    norm = state_norm(state)
    if not norm > 0 or not math.isfinite(norm):
        raise ZeroNorm(f"cannot normalize a state of norm {norm}")
    out = replace(state, R=state.R / math.sqrt(norm))
    out.norm = state_norm(out)
    out.sheet_weights = sheet_weights(out)
    return out


def sheet_weights(state: BoundState) -> tuple[float, float]:
    """Probabilities ``(w_minus, w_plus)`` on the ``r < 0`` and ``r > 0`` sheets."""
    rho = marginal_density(state)
    r = state.r_nodes
    mid = int(np.searchsorted(r, 0.0))
    w_minus = float(simpson(rho[: mid + 1], r[: mid + 1]))
    w_plus = float(simpson(rho[mid:], r[mid:]))
    total = w_minus + w_plus
    return w_minus / total, w_plus / total


def abs2_profile(state: BoundState, r_grid=None) -> list[tuple[float, float]]:
    """``(r, density)`` rows of the theta- and phi-integrated density; interpolated onto ``r_grid`` if given."""
    rho = marginal_density(state)
    if r_grid is None:
        return [(float(r), float(d)) for r, d in zip(state.r_nodes, rho)]
    grid = np.asarray(r_grid, dtype=float)
    return [(float(r), float(d)) for r, d in zip(grid, np.interp(grid, state.r_nodes, rho))]


def profile_peak(state: BoundState) -> float:
    """Radial position of the largest marginal density."""
    return float(state.r_nodes[int(np.argmax(marginal_density(state)))])
