"""Numerical kernels: adaptive Runge-Kutta integration, Brent root finding, quadrature.

The integrator works on plain Python floats as well as on numpy arrays.  The
Pruefer phase equations are scalar, and keeping them out of numpy makes the
inner loop several times faster.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import MaxIterations, NoSignChange, NonFiniteRhs, StepUnderflow, TooFewSamples

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between 5th order and embedded 4th order weights
_E1 = 71 / 57600
_E3 = -71 / 16695
_E4 = 71 / 1920
_E5 = -17253 / 339200
_E6 = 22 / 525
_E7 = -1 / 40

_SAFETY = 0.9
_PI_ALPHA = 0.7 / 5
_PI_BETA = 0.4 / 5
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class OdeProblem:
    rhs: Callable
    t_start: float
    t_end: float
    y0: float | np.ndarray
    rel_tol: float = DEFAULT_RTOL
    abs_tol: float = DEFAULT_ATOL

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.t_start == self.t_end:
            raise ValueError("empty integration interval")


@dataclass
class Trajectory:
    nodes: list = field(default_factory=list)
    n_rhs: int = 0

    @property
    def final_state(self):
        return self.nodes[-1]

    @property
    def t(self) -> np.ndarray:
        return np.array([n[0] for n in self.nodes])

    @property
    def y(self) -> np.ndarray:
        return np.array([n[1] for n in self.nodes])


def _is_scalar(y) -> bool:
    return isinstance(y, (float, int))


def _check_finite(k, scalar: bool):
    if scalar:
        if not math.isfinite(k):
            raise NonFiniteRhs(f"rhs returned {k}")
    elif not np.all(np.isfinite(k)):
        raise NonFiniteRhs("rhs returned non-finite values")


def integrate(problem: OdeProblem, dense: bool = False, first_step: float | None = None,
              max_step: float | None = None) -> Trajectory:
    """Integrate ``problem`` with the Dormand-Prince 5(4) pair and PI step control.

    The local error of every accepted step satisfies
    ``|err| <= abs_tol + rel_tol * max(|y_old|, |y_new|)`` componentwise.
    With ``dense`` set, every accepted step is recorded in ``nodes``;
    otherwise only the two endpoints are.
    """
    f = problem.rhs
    t0, t1 = float(problem.t_start), float(problem.t_end)
    rtol, atol = problem.rel_tol, problem.abs_tol
    scalar = _is_scalar(problem.y0)
    y = float(problem.y0) if scalar else np.array(problem.y0, dtype=float)

    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    h_min = 1e-14 * span
    h_max = span if max_step is None else min(span, abs(max_step))

    k1 = f(t0, y)
    _check_finite(k1, scalar)
    n_rhs = 1

    if first_step is None:
        # classical starting heuristic (Hairer, Norsett & Wanner II.4)
        d0 = abs(y) if scalar else float(np.max(np.abs(y)))
        d1 = abs(k1) if scalar else float(np.max(np.abs(k1)))
        scale = atol + rtol * d0
        h = 0.01 * scale / d1 if d1 > 1e-300 else 1e-6 * span
        h = min(max(h, 1e-6 * span), 0.1 * h_max)
    else:
        h = min(abs(first_step), h_max)

    t = t0
    nodes = [(t0, y)]
    err_prev = 1.0
    rejected_last = False

    while direction * (t1 - t) > 0:
        if h < h_min:
            raise StepUnderflow(f"step size {h:.3e} below {h_min:.3e} at t={t:.16g}")
        if h > abs(t1 - t):
            h = abs(t1 - t)
        hs = direction * h

        k2 = f(t + _C2 * hs, y + hs * (_A21 * k1))
        k3 = f(t + _C3 * hs, y + hs * (_A31 * k1 + _A32 * k2))
        k4 = f(t + _C4 * hs, y + hs * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = f(t + _C5 * hs, y + hs * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = f(t + hs, y + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        y_new = y + hs * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        t_new = t1 if h == abs(t1 - t) else t + hs
        k7 = f(t_new, y_new)
        n_rhs += 6

        if scalar:
            if not (math.isfinite(k2) and math.isfinite(k3) and math.isfinite(k4)
                    and math.isfinite(k5) and math.isfinite(k6) and math.isfinite(k7)):
                err = math.inf
            else:
                e = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
                err = abs(e) / (atol + rtol * max(abs(y), abs(y_new)))
        else:
            stages = np.stack([k2, k3, k4, k5, k6, k7])
            if not np.all(np.isfinite(stages)):
                err = math.inf
            else:
                e = hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
                sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
                err = float(np.max(np.abs(e) / sc))

        if err <= 1.0:
            t, y, k1 = t_new, y_new, k7
            if dense:
                nodes.append((t, y))
            err = max(err, 1e-10)
            factor = _SAFETY * err ** -_PI_ALPHA * err_prev ** _PI_BETA
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            if rejected_last:
                factor = min(factor, 1.0)
            h = min(h * factor, h_max)
            err_prev = err
            rejected_last = False
        else:
            if not math.isfinite(err):
                if rejected_last and h * 0.5 < h_min:
                    raise NonFiniteRhs(f"rhs non-finite near t={t:.16g}")
                h *= 0.25
            else:
                h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            rejected_last = True

    if not dense:
        nodes.append((t, y))
    return Trajectory(nodes=nodes, n_rhs=n_rhs)


def find_root(g: Callable[[float], float], lo: float, hi: float, x_tol: float = 1e-12,
              max_iter: int = 200, g_lo: float | None = None, g_hi: float | None = None) -> float:
    """Brent's method on the bracket [lo, hi].

    Already-known endpoint values may be passed as ``g_lo``/``g_hi`` to save
    two evaluations.
    """
    a, b = float(lo), float(hi)
    fa = g(a) if g_lo is None else g_lo
    fb = g(b) if g_hi is None else g_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise NoSignChange(f"g({a})={fa:.3e} and g({b})={fb:.3e} have the same sign")

    c, fc = a, fa
    d = e = b - a
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2 * eps * abs(b) + 0.5 * x_tol
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) >= tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2 * m * s
                q = 1 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2 * m * q * (q - r) - (b - a) * (r - 1))
                q = (q - 1) * (r - 1) * (s - 1)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2 * p < min(3 * m * q - abs(tol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else math.copysign(tol, m)
        fb = g(b)
    raise MaxIterations(f"no convergence in {max_iter} iterations on [{lo}, {hi}]")


def quadrature(samples: Sequence[tuple[float, float]] | np.ndarray) -> float:
    """Composite trapezoidal rule over ``(t, f)`` samples."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise TooFewSamples("need at least two (t, f) samples")
    t, f = arr[:, 0], arr[:, 1]
    dt = np.diff(t)
    if not (np.all(dt > 0) or np.all(dt < 0)):
        raise ValueError("sample abscissae must be strictly monotone")
    return float(np.trapezoid(f, t))


def trapezoid(f: np.ndarray, t: np.ndarray, axis: int = -1) -> float | np.ndarray:
    return np.trapezoid(f, t, axis=axis)


def simpson(f: np.ndarray, t: np.ndarray, axis: int = -1) -> float | np.ndarray:
    """Composite Simpson rule on a possibly nonuniform grid."""
    from scipy.integrate import simpson as _simpson

    return _simpson(f, x=t, axis=axis)


def integrate_grid(rhs: Callable, grid: Sequence[float], y0, rel_tol: float = DEFAULT_RTOL,
                   abs_tol: float = DEFAULT_ATOL) -> list:
    """States at every node of a monotone ``grid`` (first node is the initial point).

    Each segment is a separate adaptive solve seeded with the previous step size,
    so node values carry full integrator accuracy without interpolation.
    """
    out = [y0]
    y = y0
    h = None
    for t_a, t_b in zip(grid[:-1], grid[1:]):
        traj = integrate(OdeProblem(rhs, float(t_a), float(t_b), y, rel_tol, abs_tol), dense=True,
                         first_step=h)
        nodes = traj.nodes
        if len(nodes) >= 2:
            h = abs(nodes[-1][0] - nodes[-2][0])
        y = nodes[-1][1]
        out.append(y)
    return out
