"""Seeded sampling of bound radial states for algebra checks."""

import math

import numpy as np

from .errors import DomainError
from .hamiltonian import RadialState, conformal_factor
from .trajectory import inversion_points

__all__ = ["random_bound_states"]


def random_bound_states(params, n, rng, energy_range=(-3.0, -0.2), max_tries=100_000):
    """n states (r, p) with H(r, p) = E for E drawn uniformly from energy_range.

    r is uniform inside the annulus [r_minus, r_plus] of the drawn energy and
    the sign of p is random. Energies whose orbit touches r = -eta are skipped.
    """
    out = []
    lo, hi = energy_range
    for _ in range(max_tries):
        if len(out) == n:
            return out
        E = rng.uniform(lo, hi)
        try:
            r_minus, r_plus = inversion_points(E, params)
        except DomainError:
            continue
        if params.eta < 0 and r_minus + params.eta <= 1e-6:
            continue
        r = rng.uniform(r_minus, r_plus)
        c = conformal_factor(r, params)
        p2 = 2 * params.m * (E / c - params.l**2 / (2 * params.m * r * r) + params.k / r)
        p = math.sqrt(max(p2, 0.0)) * (1 if rng.random() < 0.5 else -1)
        out.append(RadialState(r=float(r), p=float(p)))
    raise DomainError(f"could not draw {n} bound states after {max_tries} tries")
