"""Velocity quantization driven by the three classical invariants.

Each invariant K_i(x, v, t), with v replaced by the velocity operator
(hbar k / m on momentum eigenstates) and x by i d/dk, generates its own
Schrodinger-type evolution for the momentum coefficients:

    S1:  dC/dt = -(i/hbar) q1(k,t) C                      (no advection)
    S2:  dC/dt - (A/hbar) dC/dk = -(i/hbar) B(k,t) C
    S3:  dC/dt + (w/2)(k + (A/hbar w) sin wt) dC/dk
            = (-w/4 - (i/hbar) f3(k,t)) C

The S3 equation comes from symmetrizing the classical product x*v into
(x vhat + vhat x)/2; the symmetrization contributes the -w/4 amplitude
term, which exactly offsets the e^{w t/2} stretching of the characteristic
map so the evolution is unitary. The published closed forms for these
schemes are kept as "published" variants for auditing; the "derived"
variants are defined by the equations above and solved with the
characteristic tracer.

Symbol audit: where the quadratic expansion of an invariant demands an
A^2 coefficient, the derived symbols use A^2; the variants as published
(A on the sin^2 term of q1 and B, a missing 1/m on B's last term, the
e^{+w t/4} amplitude and the oscillator map g of S3) are evaluated
verbatim so their deviations can be quantified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .core import MomentumGrid, PhysicalParams, SpectralState
from .characteristics import AdvectionProblem, default_steps, evolve_linear_pde, _rk4_backward
from .reference import first_derivative

SCHEMES = ("S1", "S2", "S3")
FORMULA_VARIANTS = ("derived", "published")


def _check_scheme(scheme):
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def _check_variant(variant):
    if variant not in FORMULA_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {FORMULA_VARIANTS}")


# ---------------------------------------------------------------------------
# diagonal symbols


def _s1_symbol(params, k, t, variant):
    m, A, w, hb = params.m, params.A, params.omega, params.hbar
    s = np.sin(w * t)
    quad_coeff = A * A if variant == "derived" else A
    return (
        hb * hb * k * k / (2.0 * m)
        + (A * hb * k / (m * w)) * s
        + (quad_coeff / (2.0 * m * w * w)) * s * s
    )


def _s2_symbol(params, k, t, variant):
    m, A, w, hb = params.m, params.A, params.omega, params.hbar
    s = np.sin(w * t)
    c = np.cos(w * t)
    tail_m = m if variant == "derived" else 1.0
    return (
        _s1_symbol(params, k, t, variant)
        - A * hb * k * t / m
        - (A * A * t / (m * w)) * s
        + (A * A / (tail_m * w * w)) * (1.0 - c)
    )


def _s3_symbol(params, k, t):
    # the published printing of this symbol already matches the expansion
    m, A, w, hb = params.m, params.A, params.omega, params.hbar
    s = np.sin(w * t)
    c = np.cos(w * t)
    return (
        (m * w * t / 2.0)
        * (hb * hb * k * k / (m * m) + (2.0 * A * hb * k / (m * m * w)) * s + (A * A / (m * m * w * w)) * s * s)
        + (A * hb * k / (2.0 * m * w)) * (c - 1.0)
        + (A * A / (2.0 * m * w * w)) * s * (c - 1.0)
    )


def diagonal_symbol(scheme: str, params: PhysicalParams, k, t, variant: str = "derived"):
    """Real multiplicative part of the scheme's coefficient equation."""
    _check_scheme(scheme)
    _check_variant(variant)
    k = np.asarray(k, dtype=float)
    if scheme == "S1":
        return _s1_symbol(params, k, t, variant)
    if scheme == "S2":
        return _s2_symbol(params, k, t, variant)
    return _s3_symbol(params, k, t)


def scheme_problem(scheme: str, params: PhysicalParams, profile) -> AdvectionProblem:
    """Derived advection problem (normal form) for one scheme."""
    _check_scheme(scheme)
    m, A, w, hb = params.m, params.A, params.omega, params.hbar

    if scheme == "S1":
        alpha = lambda k, s: np.zeros_like(np.asarray(k, dtype=float))
        beta = lambda k, s: -1j / hb * _s1_symbol(params, np.asarray(k), s, "derived")
    elif scheme == "S2":
        alpha = lambda k, s: np.full_like(np.asarray(k, dtype=float), -A / hb)
        beta = lambda k, s: -1j / hb * _s2_symbol(params, np.asarray(k), s, "derived")
    else:
        alpha = lambda k, s: 0.5 * w * (np.asarray(k, dtype=float) + (A / (hb * w)) * np.sin(w * s))
        beta = lambda k, s: -0.25 * w - 1j / hb * _s3_symbol(params, np.asarray(k), s)
    return AdvectionProblem(alpha, beta, profile, rate_scale=w)


# ---------------------------------------------------------------------------
# published closed forms


def published_scheme3_map_shift(params: PhysicalParams, t: float) -> float:
    """g(t) - g(0) with g(t) = (A / 5 hbar w)(2 cos wt + A sin wt), verbatim."""
    A, hb, w = params.A, params.hbar, params.omega
    g = lambda s: (A / (5.0 * hb * w)) * (2.0 * math.cos(w * s) + A * math.sin(w * s))
    return g(t) - g(0.0)


def published_phase_s1(params: PhysicalParams, k, t: float):
    """The S1 phase polynomial exactly as published (note the t^2/2 term)."""
    m, A, w = params.m, params.A, params.omega
    hb = params.hbar
    k = np.asarray(k, dtype=float)
    return (
        hb * k * k * t / (2.0 * m)
        - (k * A / (m * w * w)) * (math.cos(w * t) - 1.0)
        + (A / (2.0 * m * w * w)) * (t * t / 2.0 - math.sin(2.0 * w * t) / (4.0 * w))
    )


def derived_phase_s1(params: PhysicalParams, k, t: float):
    """S1 phase from direct quadrature of the diagonal symbol: (1/hbar) int q1 ds."""
    k = np.asarray(k, dtype=float)
    val, _ = quad_vec(lambda s: _s1_symbol(params, k, s, "derived"), 0.0, t)
    return val / params.hbar


def _published_phase_s2(params, k, t):
    A, hb = params.A, params.hbar

    def integrand(s):
        return _s2_symbol(params, k + A * t / hb - A * s / hb, s, "published")

    val, _ = quad_vec(integrand, 0.0, t)
    return val / hb


def _published_phase_s3(params, k, t):
    # verbatim phase quadrature, including the bare e^{-w t/2} inside the
    # argument (not multiplied by k) exactly as the closed form was given
    w, hb = params.omega, params.hbar
    gt = published_scheme3_map_shift(params, t)

    def integrand(s):
        gs = published_scheme3_map_shift(params, s)
        arg = np.exp(0.5 * w * s) * (k - math.exp(-0.5 * w * t) + gt - gs)
        return _s3_symbol(params, arg, s)

    val, _ = quad_vec(integrand, 0.0, t)
    return val / hb


def evolve_scheme(
    scheme: str,
    profile,
    grid: MomentumGrid,
    params: PhysicalParams,
    t: float,
    variant: str = "derived",
    steps: int | None = None,
    exponent_cap: float = 50.0,
) -> SpectralState:
    """Propagate the initial profile to time t under one invariant scheme."""
    _check_scheme(scheme)
    _check_variant(variant)
    if variant == "derived":
        problem = scheme_problem(scheme, params, profile)
        return evolve_linear_pde(problem, grid, t, steps=steps, exponent_cap=exponent_cap)

    k = grid.points
    m, A, w, hb = params.m, params.A, params.omega, params.hbar
    if scheme == "S1":
        values = np.asarray(profile(k), dtype=complex) * np.exp(
            -1j * published_phase_s1(params, k, t)
        )
    elif scheme == "S2":
        values = np.asarray(profile(k + A * t / hb), dtype=complex) * np.exp(
            -1j * _published_phase_s2(params, k, t)
        )
    else:
        if 0.25 * w * t > exponent_cap:
            raise ValueError(
                f"published S3 amplitude exponent {0.25 * w * t:.3g} exceeds cap {exponent_cap:.3g}"
            )
        arg = k * math.exp(-0.5 * w * t) + published_scheme3_map_shift(params, t)
        values = np.asarray(profile(arg), dtype=complex) * np.exp(
            0.25 * w * t - 1j * _published_phase_s3(params, k, t)
        )
    return SpectralState(grid, values, t)


# ---------------------------------------------------------------------------
# the S3 characteristic map


@dataclass(frozen=True)
class Scheme3CharMap:
    """Backward map k -> k0 = scale * k + shift of the S3 characteristic flow."""

    scale: float
    shift: float
    t: float


def scheme3_char_map(
    params: PhysicalParams, t: float, steps: int | None = None, variant: str = "derived"
) -> Scheme3CharMap:
    """Foot-point map of the S3 flow dk/ds = (w/2) k + (A/2 hbar) sin(w s).

    The derived variant integrates the characteristic equation backward
    with RK4 (the flow is affine in k, so the map is exactly
    scale * k + shift); the published variant evaluates the printed
    oscillator map instead.
    """
    _check_variant(variant)
    w = params.omega
    scale = math.exp(-0.5 * w * t)
    if variant == "published":
        return Scheme3CharMap(scale, published_scheme3_map_shift(params, t), t)
    if steps is None:
        steps = default_steps(t, w)
    problem = scheme_problem("S3", params, lambda k: k)
    # the flow is affine in k, so the foot of k = 0 is exactly the shift
    feet, _ = _rk4_backward(problem.alpha, None, np.array([0.0]), t, steps)
    return Scheme3CharMap(scale, float(feet[0]), t)


# ---------------------------------------------------------------------------
# generator consistency and uncertainty


def _sinc_profile(state: SpectralState):
    """Lift grid samples to a smooth profile by Whittaker interpolation.

    Spectrally accurate for profiles that decay inside the grid, which is
    the precondition for every evolution here anyway.
    """
    pts = state.grid.points
    dk = state.grid.spacing
    c = state.values

    def profile(k):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        return np.sinc((k[:, None] - pts[None, :]) / dk) @ c

    return profile


def weyl_generator_check(
    params: PhysicalParams,
    t: float,
    test_state: SpectralState,
    time_delta: float | None = None,
) -> float:
    """Residual of i hbar dC/dt = (generator) C for the derived S3 evolution.

    The generator (diagonal symbol, the symmetrization amplitude term, and
    the advection term via the sixth-order stencil) is applied to the
    evolved state at time t and compared against a fourth-order finite
    difference of the evolution in time. The max is taken over interior
    grid points; it vanishes at the discretization order under grid
    refinement.
    """
    grid = test_state.grid
    if grid.n < 64:
        raise ValueError(f"grid too coarse for the generator check: n={grid.n}")
    m, A, w, hb = params.m, params.A, params.omega, params.hbar
    if time_delta is None:
        time_delta = 1e-3 / max(abs(w), 1.0)
    profile = _sinc_profile(test_state)
    steps = max(64, default_steps(max(abs(t), 1.0), w))

    def at(tau):
        return evolve_scheme("S3", profile, grid, params, tau, "derived", steps=steps).values

    d = time_delta
    dc_dt = (-at(t + 2 * d) + 8.0 * at(t + d) - 8.0 * at(t - d) + at(t - 2 * d)) / (12.0 * d)

    k = grid.points
    c_t = at(t)
    advect = 0.5 * w * (k + (A / (hb * w)) * math.sin(w * t)) * first_derivative(c_t, grid.spacing)
    generator = _s3_symbol(params, k, t) * c_t - 1j * hb * (0.25 * w * c_t + advect)
    residual = np.abs(1j * hb * dc_dt - generator)
    return float(np.max(residual[4:-4]))


def uncertainty_bound(params: PhysicalParams) -> float:
    """Robertson bound for position and velocity: hbar / (2m).

    Follows from the commutator [x, vhat] = i hbar / m.
    """
    return params.hbar / (2.0 * params.m)


def published_uncertainty_bound(params: PhysicalParams) -> float:
    """The bound as published, hbar / m; kept only as an audit constant.

    The minimal Gaussian attains hbar / (2m) and therefore violates this
    value, so nothing in the library asserts it.
    """
    return params.hbar / params.m
