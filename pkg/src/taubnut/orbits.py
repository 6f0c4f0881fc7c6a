"""Orbit shape in the plane orthogonal to L and the deformed third law."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoBoundOrbitError
from .hamiltonian import angular_momentum, runge_lenz
from .trajectory import frequency, orbit_geometry

__all__ = [
    "ConicOrbit",
    "orbit_radius",
    "conic_from_energy",
    "trace_orbit",
    "orbital_frame",
    "third_law_ratio",
    "flat_third_law_ratio",
    "ratio_from_frequency",
    "third_law_expansion_residual",
]


@dataclass(frozen=True)
class ConicOrbit:
    p_orbit: float
    eps: float
    theta0: float = 0.0

    @property
    def a(self):
        return self.p_orbit / (1 - self.eps**2)


def orbit_radius(theta, orbit):
    """r(theta) = p/(1 + eps cos(theta - theta0)); works elementwise on arrays."""
    return orbit.p_orbit / (1 + orbit.eps * np.cos(theta - orbit.theta0))


def conic_from_energy(E, theta0, params):
    if not E < 0:
        raise DomainError(f"bound orbits need E < 0, got {E!r}")
    e = -E
    K = params.k - params.eta * e
    if not K > 0:
        raise NoBoundOrbitError(f"k - eta|E| = {K!r} is not positive")
    eps2 = 1 - 2 * e * params.l**2 / (params.m * K * K)
    if eps2 < 0:
        raise NoBoundOrbitError(f"eps^2 = {eps2!r} < 0: energy below the circular orbit")
    eps = math.sqrt(eps2)
    if eps >= 1:
        raise NoBoundOrbitError("eps >= 1: orbit is not bound")
    return ConicOrbit(p_orbit=params.l**2 / (params.m * K), eps=eps, theta0=theta0)


def trace_orbit(E, theta0, n, params):
    """n samples (theta, r, x, y) at uniform theta over [0, 2 pi)."""
    if n < 3:
        raise DomainError(f"need at least 3 samples, got {n}")
    orbit = conic_from_energy(E, theta0, params)
    theta = np.arange(n) * (2 * np.pi / n)
    r = orbit_radius(theta, orbit)
    return np.column_stack([theta, r, r * np.cos(theta), r * np.sin(theta)])


def orbital_frame(pt, params):
    """Orthonormal (e1, e2, n) with n along L and e1 towards perihelion.

    R points to aphelion, so e1 = -R/|R|; in this frame theta0 = 0.
    """
    L = angular_momentum(pt)
    n = L / np.linalg.norm(L)
    R = runge_lenz(pt, params)
    R = R - (R @ n) * n
    norm = np.linalg.norm(R)
    if norm == 0:
        raise DomainError("circular orbit: perihelion direction undefined")
    e1 = -R / norm
    return e1, np.cross(n, e1), n


def third_law_ratio(E, params):
    """tau^2/a^3 = 4 pi^2 m (k + eta|E|)^2/(k - eta|E|)^3."""
    if not E < 0:
        raise DomainError(f"bound orbits need E < 0, got {E!r}")
    e = -E
    K = params.k - params.eta * e
    if not K > 0:
        raise DomainError(f"k - eta|E| = {K!r} is not positive")
    return 4 * math.pi**2 * params.m * (params.k + params.eta * e) ** 2 / K**3


def flat_third_law_ratio(params):
    return 4 * math.pi**2 * params.m / params.k


def ratio_from_frequency(E, params):
    """(2 pi/Omega)^2/a^3 assembled from the trajectory module."""
    g = orbit_geometry(E, params)
    return (2 * math.pi / frequency(E, params)) ** 2 / g.a**3


def third_law_expansion_residual(E, params):
    """Relative deviation of the ratio from its first-order expansion in eta."""
    if abs(params.eta) * abs(E) / params.k >= 0.5:
        raise DomainError("expansion residual needs |eta E|/k < 0.5")
    flat = flat_third_law_ratio(params)
    x = params.eta * abs(E) / params.k
    return (third_law_ratio(E, params) - flat * (1 + 5 * x)) / flat
