"""Classical side of the model: xdot = v, vdot = -(A/m) cos(omega t).

Closed-form trajectories, the two characteristic integrals of the flow,
three energy-like invariants built from them, and an independent
Runge-Kutta oracle used to confirm that the invariants really are constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams

CONSTANT_KINDS = ("K1", "K2", "K3")


@dataclass(frozen=True)
class ClassicalState:
    x: float
    v: float
    t: float

    def __post_init__(self):
        for name in ("x", "v", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def exact_trajectory(params: PhysicalParams, x0: float, v0: float, t: float) -> ClassicalState:
    """Closed-form solution: v = v0 - (A/m w) sin wt, x = x0 + v0 t + (A/m w^2)(cos wt - 1)."""
    m, A, w = params.m, params.A, params.omega
    v = v0 - (A / (m * w)) * math.sin(w * t)
    x = x0 + v0 * t + (A / (m * w * w)) * (math.cos(w * t) - 1.0)
    return ClassicalState(x, v, t)


def rk4_trajectory(params: PhysicalParams, x0: float, v0: float, t: float, dt: float) -> ClassicalState:
    """Classical RK4 integration; global error O(dt^4). Oracle for exact_trajectory."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    m, A, w = params.m, params.A, params.omega
    x, v, s = float(x0), float(v0), 0.0
    remaining = t
    while remaining > 0:
        h = dt if remaining >= dt else remaining
        a1 = -(A / m) * math.cos(w * s)
        amid = -(A / m) * math.cos(w * (s + 0.5 * h))
        a4 = -(A / m) * math.cos(w * (s + h))
        # stages for xdot = v, vdot = a(s); a has no (x, v) dependence
        k1x, k1v = v, a1
        k2x, k2v = v + 0.5 * h * k1v, amid
        k3x, k3v = v + 0.5 * h * k2v, amid
        k4x, k4v = v + h * k3v, a4
        x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v += (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        s += h
        remaining -= h
    return ClassicalState(x, v, t)


def rk4_orbit(params: PhysicalParams, x0, v0, t_end: float, dt: float, sample_stride: int = 1):
    """Integrate a batch of initial conditions, sampling every sample_stride steps.

    Returns (times, xs, vs) with xs, vs shaped (n_samples, n_conditions).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    m, A, w = params.m, params.A, params.omega
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    v = np.atleast_1d(np.asarray(v0, dtype=float)).copy()
    nsteps = max(1, int(round(t_end / dt)))
    h = t_end / nsteps
    times = [0.0]
    xs = [x.copy()]
    vs = [v.copy()]
    s = 0.0
    for i in range(1, nsteps + 1):
        a1 = -(A / m) * math.cos(w * s)
        amid = -(A / m) * math.cos(w * (s + 0.5 * h))
        a4 = -(A / m) * math.cos(w * (s + h))
        k1x = v
        k2x = v + 0.5 * h * a1
        k3x = v + 0.5 * h * amid
        k4x = v + h * amid
        x = x + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + (h / 6.0) * (a1 + 4 * amid + a4)
        s = i * h
        if i % sample_stride == 0 or i == nsteps:
            times.append(s)
            xs.append(x.copy())
            vs.append(v.copy())
    return np.array(times), np.array(xs), np.array(vs)


def characteristic_values(params: PhysicalParams, state: ClassicalState):
    """The two integrals of the flow; both stay constant along trajectories.

    C1 = v + (A/m w) sin wt
    C2 = t*C1 + (A/m w^2)(cos wt - 1) - x
    """
    m, A, w = params.m, params.A, params.omega
    c1 = state.v + (A / (m * w)) * math.sin(w * state.t)
    c2 = state.t * c1 + (A / (m * w * w)) * (math.cos(w * state.t) - 1.0) - state.x
    return c1, c2


def constant_of_motion(kind: str, params: PhysicalParams, state: ClassicalState) -> float:
    """Energy-unit invariant built directly from (C1, C2).

    K1 = (m/2) C1^2,  K2 = (m/2) C1^2 - A C2,  K3 = (m w / 2) C1 C2.
    Computed from the generating combination rather than expanded
    polynomials, so d/dt K = 0 holds by construction.
    """
    c1, c2 = characteristic_values(params, state)
    m, A, w = params.m, params.A, params.omega
    if kind == "K1":
        return 0.5 * m * c1 * c1
    if kind == "K2":
        return 0.5 * m * c1 * c1 - A * c2
    if kind == "K3":
        return 0.5 * m * w * c1 * c2
    raise ValueError(f"unknown constant kind {kind!r}; expected one of {CONSTANT_KINDS}")


def k1_expanded(params: PhysicalParams, state: ClassicalState, variant: str = "derived") -> float:
    """Expanded polynomial form of K1, for auditing the published printing.

    The derived expansion carries A^2/(2 m w^2) on the sin^2 term and equals
    constant_of_motion("K1", ...) identically; the published variant keeps
    the A/(2 m w^2) coefficient it was printed with. The two are compared in
    audit output, never asserted equal.
    """
    m, A, w = params.m, params.A, params.omega
    v, t = state.v, state.t
    s = math.sin(w * t)
    base = 0.5 * m * v * v + (v * A / w) * s
    if variant == "derived":
        return base + (A * A / (2.0 * m * w * w)) * s * s
    if variant == "published":
        return base + (A / (2.0 * m * w * w)) * s * s
    raise ValueError(f"unknown variant {variant!r}; expected 'derived' or 'published'")
