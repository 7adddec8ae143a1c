"""Shared model objects: physical parameters, momentum grids, Gaussian packets.

Everything in this module is an immutable value; all operations are pure
functions, so states and grids can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhysicalParams:
    """Particle of mass m driven by the uniform force -A*cos(omega*t).

    hbar is carried explicitly so nothing silently assumes natural units.
    omega = 0 is rejected: every closed form here contains 1/omega, and
    zero-frequency behaviour is studied through sequences omega -> 0.
    """

    m: float = 1.0
    A: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.m > 0):
            raise ValueError(f"mass must be positive, got m={self.m}")
        if not (self.hbar > 0):
            raise ValueError(f"hbar must be positive, got hbar={self.hbar}")
        if self.omega == 0:
            raise ValueError("omega = 0 is not representable; use a sequence of small omega")
        for name in ("m", "A", "omega", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform, endpoint-inclusive sampling of the wavenumber axis."""

    k_min: float
    k_max: float
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"grid needs at least 2 points, got n={self.n}")
        if not (self.k_min < self.k_max):
            raise ValueError(f"need k_min < k_max, got [{self.k_min}, {self.k_max}]")
        # Point i is k_min + i*dk, evaluated in exactly this order so grids
        # rebuilt from (k_min, k_max, n) are bit-for-bit identical.
        pts = self.k_min + np.arange(self.n) * self.spacing
        pts.setflags(write=False)
        object.__setattr__(self, "_points", pts)

    @property
    def spacing(self) -> float:
        return (self.k_max - self.k_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self._points

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


def build_grid(k_min: float, k_max: float, n: int) -> MomentumGrid:
    return MomentumGrid(float(k_min), float(k_max), int(n))


@dataclass(frozen=True)
class GaussianPacketSpec:
    """Gaussian wavenumber profile centered at k0 with spread sigma_k.

    x0 enters only as the linear phase exp(-i*k*x0); the modulus is
    independent of it. The continuum profile has unit L2 norm.
    """

    k0: float = 0.0
    sigma_k: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        if not (self.sigma_k > 0):
            raise ValueError(f"sigma_k must be positive, got {self.sigma_k}")


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Complex coefficient samples over a MomentumGrid at one instant."""

    grid: MomentumGrid
    values: np.ndarray
    t: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"values shape {vals.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
            raise ValueError("state values must be finite")
        object.__setattr__(self, "values", vals)

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def gaussian_profile_values(spec: GaussianPacketSpec, k) -> np.ndarray:
    """Evaluate the packet profile at arbitrary wavenumbers."""
    k = np.asarray(k, dtype=float)
    amp = (2.0 * np.pi * spec.sigma_k**2) ** (-0.25)
    return amp * np.exp(-((k - spec.k0) ** 2) / (4.0 * spec.sigma_k**2) - 1j * k * spec.x0)


def gaussian_profile_fn(spec: GaussianPacketSpec):
    """Profile as a callable k -> complex, the shape evolution routines take."""
    return lambda k: gaussian_profile_values(spec, k)


def gaussian_profile(spec: GaussianPacketSpec, grid: MomentumGrid) -> SpectralState:
    return SpectralState(grid, gaussian_profile_values(spec, grid.points), 0.0)


def norm(state: SpectralState) -> float:
    """Trapezoidal approximation of the integral of |C(k,t)|^2 over the grid."""
    return float(np.dot(state.grid.trapezoid_weights(), state.density()))


def align_global_phase(target: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Rotate values by the unit complex maximizing overlap with target.

    Overall phase is unobservable, so pointwise comparisons between two
    states are made after this alignment.
    """
    z = np.vdot(values, target)
    if z == 0:
        return np.asarray(values, dtype=complex)
    return np.asarray(values, dtype=complex) * (z / abs(z))
