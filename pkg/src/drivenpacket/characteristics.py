"""Characteristic-curve solver for first-order linear advection equations.

Solves problems of the fixed normal form

    dC/dt + alpha(k, t) * dC/dk = beta(k, t) * C,      C(k, 0) = F(k)

by tracing, for every output wavenumber k, the characteristic curve
dk/ds = alpha(k, s) backward from (k, t) to s = 0 with RK4, while
accumulating the exponent integral of beta along the same curve in the
same RK4 state. The solution is then

    C(k, t) = F(k0) * exp( integral_0^t beta(k(s), s) ds )

with k0 the foot point of the curve. Tracing is done per grid point, with
no interpolation from an advected grid, so evaluations across points are
independent and embarrassingly parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import MomentumGrid, SpectralState


class NonFiniteCoefficientError(RuntimeError):
    """A coefficient function produced NaN or infinity along a characteristic."""


class ExponentOverflowError(RuntimeError):
    """The real part of the accumulated exponent exceeded the configured cap."""


@dataclass(frozen=True)
class AdvectionProblem:
    """Coefficient functions and initial profile of one advection equation.

    alpha maps (k, t) to a real drift (array or scalar, broadcastable
    against k); beta maps (k, t) to a complex growth rate; both must be
    reentrant. rate_scale is the problem's characteristic frequency, used
    only to size the default step count.
    """

    alpha: Callable
    beta: Callable
    initial_profile: Callable
    rate_scale: float = 1.0


def default_steps(t: float, rate_scale: float = 1.0) -> int:
    return max(1, math.ceil(200.0 * abs(t) * max(abs(rate_scale), 1.0)))


def _rk4_backward(alpha, beta, k, t: float, steps: int):
    """Joint RK4 on (k, I), dI/ds = beta, from s = t down to s = 0.

    Returns (foot points, integral of beta over [0, t] along the curve).
    beta may be None to trace positions only.
    """
    h = -t / steps
    s = t
    k = np.asarray(k, dtype=float)
    acc = np.zeros(k.shape, dtype=complex) if beta is not None else None
    for i in range(steps):
        a1 = alpha(k, s)
        k2 = k + 0.5 * h * a1
        a2 = alpha(k2, s + 0.5 * h)
        k3 = k + 0.5 * h * a2
        a3 = alpha(k3, s + 0.5 * h)
        k4 = k + h * a3
        a4 = alpha(k4, s + h)
        if beta is not None:
            b1 = beta(k, s)
            b2 = beta(k2, s + 0.5 * h)
            b3 = beta(k3, s + 0.5 * h)
            b4 = beta(k4, s + h)
            acc = acc + (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        k = k + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        s = t + (i + 1) * h
    if not np.all(np.isfinite(k)):
        raise NonFiniteCoefficientError(
            f"characteristic trace produced non-finite positions (t={t}, steps={steps})"
        )
    if acc is None:
        return k, None
    # integrating from t to 0 picks up the negated integral
    exponent = -acc
    if not (np.all(np.isfinite(exponent.real)) and np.all(np.isfinite(exponent.imag))):
        raise NonFiniteCoefficientError(
            f"exponent accumulation produced non-finite values (t={t}, steps={steps})"
        )
    return k, exponent


def trace_characteristic_backward(alpha, k, t: float, steps: int):
    """Foot point k0 at s = 0 of the characteristic through (k, t)."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    scalar = np.isscalar(k) or np.ndim(k) == 0
    foot, _ = _rk4_backward(alpha, None, np.atleast_1d(k), t, steps)
    return float(foot[0]) if scalar else foot


def trace_characteristic_forward(alpha, k0, t: float, steps: int):
    """Position at time t of the characteristic starting from k0 at s = 0."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    scalar = np.isscalar(k0) or np.ndim(k0) == 0
    # reuse the backward stepper by flipping the time axis
    rev = lambda k, s: -np.asarray(alpha(k, t - s))
    foot, _ = _rk4_backward(rev, None, np.atleast_1d(k0), t, steps)
    return float(foot[0]) if scalar else foot


def evolve_linear_pde(
    problem: AdvectionProblem,
    grid: MomentumGrid,
    t: float,
    steps: int | None = None,
    exponent_cap: float = 50.0,
) -> SpectralState:
    """Solve the problem on the grid at time t via characteristic tracing."""
    if steps is None:
        steps = default_steps(t, problem.rate_scale)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    k = grid.points
    if t == 0:
        return SpectralState(grid, np.asarray(problem.initial_profile(k), dtype=complex), 0.0)
    foot, exponent = _rk4_backward(problem.alpha, problem.beta, k, t, steps)
    max_re = float(np.max(exponent.real))
    if max_re > exponent_cap:
        raise ExponentOverflowError(
            f"accumulated exponent real part {max_re:.3g} exceeds cap {exponent_cap:.3g} at t={t}"
        )
    values = np.asarray(problem.initial_profile(foot), dtype=complex) * np.exp(exponent)
    return SpectralState(grid, values, t)
