"""Independent numerical oracles for the closed-form evolutions.

Two deliberately different discretizations are kept here so that agreement
between them and the characteristic solver cannot come from a shared bug:

* splitstep_evolve works in position space with Strang splitting and FFTs,
  exactly norm-preserving per step and second-order in the step size;
* mol_evolve integrates the momentum-space coefficient equations directly
  (method of lines: RK4 in time, sixth-order finite differences in k).

Both refuse to continue when probability reaches the grid edges, since the
coefficient equations advect in open k-space and wrap-around would corrupt
the densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GaussianPacketSpec, MomentumGrid, PhysicalParams, SpectralState
from .characteristics import AdvectionProblem


class BoundaryLeakError(RuntimeError):
    """Probability density at the grid edge exceeded the leak tolerance."""


class StabilityError(RuntimeError):
    """The requested time step violates the advection stability bound."""


@dataclass(frozen=True)
class PositionGrid:
    """Uniform periodic position grid; n a power of two for the FFT steps."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 2, got {self.n}")
        if not (self.x_min < self.x_max):
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.spacing


def gaussian_position_profile(spec: GaussianPacketSpec, grid: PositionGrid) -> np.ndarray:
    """Position-space counterpart of the momentum packet: sigma_x = 1/(2 sigma_k)."""
    sigma_x = 1.0 / (2.0 * spec.sigma_k)
    x = grid.points
    amp = (2.0 * np.pi * sigma_x**2) ** (-0.25)
    return amp * np.exp(-((x - spec.x0) ** 2) / (4.0 * sigma_x**2) + 1j * spec.k0 * (x - spec.x0))


def position_norm(psi: np.ndarray, grid: PositionGrid) -> float:
    return float(np.sum(np.abs(psi) ** 2) * grid.spacing)


def position_spread(psi: np.ndarray, grid: PositionGrid):
    """(mean, standard deviation) of position under the density |psi|^2."""
    x = grid.points
    rho = np.abs(psi) ** 2
    total = np.sum(rho)
    mean = float(np.sum(x * rho) / total)
    var = float(np.sum((x - mean) ** 2 * rho) / total)
    return mean, math.sqrt(max(var, 0.0))


def _check_edges(density_edge_max: float, leak_tol: float, what: str):
    if density_edge_max > leak_tol:
        raise BoundaryLeakError(
            f"{what}: edge density {density_edge_max:.3e} exceeds leak tolerance {leak_tol:.1e}; "
            "widen the grid"
        )


def splitstep_evolve(
    psi0: np.ndarray,
    grid: PositionGrid,
    params: PhysicalParams,
    t: float,
    dt: float,
    leak_tol: float = 1e-12,
) -> np.ndarray:
    """Strang-split propagation of i hbar dpsi/dt = (p^2/2m + x A cos wt) psi.

    Each step applies a half potential phase, a full kinetic step in
    wavenumber space, and a second half potential phase; the potential is
    evaluated at the midpoint of its own half interval, keeping the scheme
    second order for the time-dependent drive. Every factor has unit
    modulus, so the discrete norm is conserved to rounding.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    nsteps = max(1, int(round(t / dt)))
    h = t / nsteps
    x = grid.points
    kf = 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.spacing)
    kinetic = np.exp(-0.5j * params.hbar * kf**2 * h / params.m)
    xAh = x * params.A * h / (2.0 * params.hbar)
    psi = np.asarray(psi0, dtype=complex).copy()
    w = params.omega
    for step in range(nsteps):
        s = step * h
        psi *= np.exp(-1j * xAh * math.cos(w * (s + 0.25 * h)))
        psi = np.fft.ifft(kinetic * np.fft.fft(psi))
        psi *= np.exp(-1j * xAh * math.cos(w * (s + 0.75 * h)))
        edge = max(np.max(np.abs(psi[:2])), np.max(np.abs(psi[-2:]))) ** 2
        _check_edges(edge, leak_tol, "splitstep_evolve")
    return psi


def momentum_coefficients(psi: np.ndarray, grid: PositionGrid, k) -> np.ndarray:
    """Project a position-space state onto momentum eigenstates e^{ikx}/sqrt(2 pi).

    Direct quadrature over the position grid; spectrally accurate for
    states that decay at the edges. Valid for |k| below pi/spacing.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.max(np.abs(k)) > np.pi / grid.spacing:
        raise ValueError(
            f"requested |k| up to {np.max(np.abs(k)):.3g} exceeds the grid's "
            f"resolvable pi/dx = {np.pi / grid.spacing:.3g}"
        )
    x = grid.points
    kernel = np.exp(-1j * np.outer(k, x))
    return (grid.spacing / math.sqrt(2.0 * np.pi)) * (kernel @ psi)


# ---------------------------------------------------------------------------
# sixth-order first derivative with one-sided closures


def _fd_weights(offsets, order):
    a = np.vander(np.asarray(offsets, dtype=float), increasing=True).T
    b = np.zeros(len(offsets))
    b[order] = math.factorial(order)
    return np.linalg.solve(a, b)


_LEFT_ROWS = np.array([_fd_weights(np.arange(8) - i, 1) for i in range(3)])
_RIGHT_ROWS = np.array([_fd_weights(np.arange(8) - (5 + i), 1) for i in range(3)])
# largest |symbol| of the centered interior stencil, for the stability bound
_FD_SYMBOL_MAX = 1.586


def first_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """d/dk of grid samples: sixth-order centered interior, one-sided edges."""
    u = np.asarray(values)
    n = u.shape[0]
    if n < 8:
        raise ValueError(f"need at least 8 points for the sixth-order stencil, got {n}")
    du = np.empty_like(u, dtype=complex if np.iscomplexobj(u) else float)
    du[3:-3] = (
        (u[6:] - u[:-6]) - 9.0 * (u[5:-1] - u[1:-5]) + 45.0 * (u[4:-2] - u[2:-4])
    ) / (60.0 * spacing)
    du[:3] = (_LEFT_ROWS @ u[:8]) / spacing
    du[-3:] = (_RIGHT_ROWS @ u[-8:]) / spacing
    return du


def mol_evolve(
    profile,
    grid: MomentumGrid,
    params: PhysicalParams,
    equation: AdvectionProblem,
    t: float,
    dt: float,
    leak_tol: float = 1e-12,
) -> SpectralState:
    """Method-of-lines integration of dC/dt + alpha dC/dk = beta C.

    RK4 in time over the semi-discrete system obtained by replacing d/dk
    with the sixth-order stencil. The time step must satisfy the advection
    stability bound, estimated from the coefficient magnitudes over [0, t];
    profiles must stay below the leak tolerance at the grid edges.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    k = grid.points
    dk = grid.spacing
    alpha, beta = equation.alpha, equation.beta

    # sample the coefficient magnitudes densely enough to see each drive period
    periods = abs(t) * abs(params.omega) / (2.0 * np.pi)
    n_samp = max(17, int(8 * periods) + 1)
    lam = 0.0
    for s in np.linspace(0.0, t, n_samp):
        lam = max(
            lam,
            float(np.max(np.abs(alpha(k, s)))) * _FD_SYMBOL_MAX / dk
            + float(np.max(np.abs(beta(k, s)))),
        )
    nsteps = max(1, int(round(t / dt)))
    h = t / nsteps
    if h * lam > 2.5:
        raise StabilityError(
            f"dt={h:.3g} violates the stability bound: dt*lambda = {h * lam:.3g} > 2.5 "
            f"(need dt <= {2.5 / lam:.3g})"
        )

    u = np.asarray(profile(k), dtype=complex)

    def rhs(state, s):
        return -np.asarray(alpha(k, s)) * first_derivative(state, dk) + np.asarray(
            beta(k, s)
        ) * state

    for step in range(nsteps):
        s = step * h
        r1 = rhs(u, s)
        r2 = rhs(u + 0.5 * h * r1, s + 0.5 * h)
        r3 = rhs(u + 0.5 * h * r2, s + 0.5 * h)
        r4 = rhs(u + h * r3, s + h)
        u = u + (h / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        if step % 32 == 0:
            edge = max(np.max(np.abs(u[:2])), np.max(np.abs(u[-2:]))) ** 2
            _check_edges(edge, leak_tol, "mol_evolve")
        if not np.all(np.isfinite(u.real)):
            raise StabilityError(f"integration diverged at step {step} (t={s:.4g})")
    edge = max(np.max(np.abs(u[:2])), np.max(np.abs(u[-2:]))) ** 2
    _check_edges(edge, leak_tol, "mol_evolve")
    return SpectralState(grid, u, t)
