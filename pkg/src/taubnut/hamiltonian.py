"""Deformed Kepler (Taub-NUT) Hamiltonian in radial and three-dimensional form.

The radial Hamiltonian is the flat Kepler one multiplied by the conformal
factor r/(r + eta). Every scalar function here is written with plain
arithmetic so it also accepts :class:`~taubnut.dual.Dual` arguments; the
singularity guard looks only at the primal value.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .dual import primal
from .errors import SingularPointError, ValidationError

__all__ = [
    "SystemParams",
    "RadialState",
    "PhasePoint3D",
    "FIGURE_PARAMS",
    "FIGURE_ENERGY",
    "conformal_factor",
    "eval_radial_hamiltonian",
    "radial_hamiltonian",
    "effective_potential",
    "eval_hamiltonian_3d",
    "angular_momentum",
    "runge_lenz",
    "runge_lenz_norm2_residual",
]

# Guard band around the pole at r = -eta.
SINGULAR_TOL = 1e-14


@dataclass(frozen=True)
class SystemParams:
    """Constants of one deformed system.

    ``l`` is the angular momentum magnitude used by the radial reduction;
    the 3D functions recompute it from the phase point and ignore this field.
    """

    m: float = 1.0
    k: float = 1.0
    l: float = 0.5
    eta: float = 0.0

    def __post_init__(self):
        for name in ("m", "k", "l", "eta"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}")
        if self.m <= 0:
            raise ValidationError(f"m must be positive, got {self.m}")
        if self.k <= 0:
            raise ValidationError(f"k must be positive, got {self.k}")
        if self.l < 0:
            raise ValidationError(f"l must be non-negative, got {self.l}")

    @property
    def lambda_scale(self):
        """Characteristic length l^2/(2 m k)."""
        return self.l**2 / (2 * self.m * self.k)

    def with_eta(self, eta):
        return replace(self, eta=eta)


# 2l = m = k = 1, E = -1: the parameter set used for the phase-plane figures.
FIGURE_PARAMS = SystemParams(m=1.0, k=1.0, l=0.5, eta=0.1)
FIGURE_ENERGY = -1.0


@dataclass(frozen=True)
class RadialState:
    r: float
    p: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValidationError(f"radius must be positive, got {self.r}")


@dataclass(frozen=True)
class PhasePoint3D:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(3)
        p = np.asarray(self.p, dtype=float).reshape(3)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)
        if not np.linalg.norm(q) > 0:
            raise ValidationError("|q| must be positive")

    @property
    def radius(self):
        return float(np.linalg.norm(self.q))


def _check_pole(r, eta):
    if abs(primal(r) + eta) <= SINGULAR_TOL * max(1.0, abs(eta)):
        raise SingularPointError(f"r = {primal(r)!r} sits on the pole r = -eta")


def conformal_factor(r, params):
    _check_pole(r, params.eta)
    return r / (r + params.eta)


def radial_hamiltonian(r, p, params):
    """H(r, p); accepts dual-number arguments."""
    m, k, l, eta = params.m, params.k, params.l, params.eta
    _check_pole(r, eta)
    return r / (r + eta) * (p * p / (2 * m) + l * l / (2 * m * r * r) - k / r)


def eval_radial_hamiltonian(s, params):
    return radial_hamiltonian(s.r, s.p, params)


def effective_potential(r, params):
    """l^2/(2mr(r + eta)) - k/(r + eta), computed as H(r, 0) so the two agree bit for bit."""
    return radial_hamiltonian(r, 0.0 * r, params)


def _hamiltonian_3d(q, p, params):
    r = math.sqrt(q @ q)
    _check_pole(r, params.eta)
    return r * (p @ p) / (2 * params.m * (params.eta + r)) - params.k / (params.eta + r)


def eval_hamiltonian_3d(pt, params):
    """Full-space Hamiltonian; ``params.l`` is not used."""
    return float(_hamiltonian_3d(pt.q, pt.p, params))


def angular_momentum(pt):
    return np.cross(pt.q, pt.p)


def runge_lenz(pt, params):
    """Deformed Runge-Lenz vector with H evaluated at the point itself.

    On a trajectory of energy E this equals the flat vector with k replaced
    by k - eta|E|. It points from the centre towards aphelion.
    """
    q, p = pt.q, pt.p
    r = math.sqrt(q @ q)
    h = _hamiltonian_3d(q, p, params)
    return (p * (p @ q) - q * (p @ p)) / params.m + q / r * (params.eta * h + params.k)


def runge_lenz_norm2_residual(pt, params):
    """|R|^2 - [(2 L^2/m) H + (eta H + k)^2]."""
    R = runge_lenz(pt, params)
    L = angular_momentum(pt)
    h = _hamiltonian_3d(pt.q, pt.p, params)
    return float(R @ R - (2 * (L @ L) / params.m * h + (params.eta * h + params.k) ** 2))
