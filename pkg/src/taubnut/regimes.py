"""Taxonomy of the eta < 0 dynamics.

With lambda = l^2/(2mk) and alpha = |eta|/lambda the effective potential is
-(k/r)(r - lambda)/(r - alpha lambda). For alpha < 1 it has one stationary
point on each side of the singular radius r = |eta|; the inner one becomes a
confining minimum once the Hamiltonian is time-reversed (H -> -H).
"""

import math
from dataclasses import dataclass, field

from .dual import primal
from .errors import DomainError, SingularPointError

__all__ = [
    "ALPHA_ONE_TOL",
    "RegimeReport",
    "alpha_ratio",
    "regime_case",
    "factored_potential",
    "critical_points",
    "critical_energy_outer",
    "critical_energy_inner",
    "time_reversed_potential",
    "inflection_point",
    "classify",
]

ALPHA_ONE_TOL = 1e-12


@dataclass(frozen=True)
class RegimeReport:
    alpha: float
    lam: float
    case: str
    region: str
    bounded: bool
    hamiltonian: str
    energy: float
    critical_radii: list = field(default_factory=list)
    critical_energies: list = field(default_factory=list)
    inflection: float = None

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "lambda": self.lam,
            "case": self.case,
            "region": self.region,
            "bounded": self.bounded,
            "hamiltonian": self.hamiltonian,
            "energy": self.energy,
            "critical_radii": list(self.critical_radii),
            "critical_energies": list(self.critical_energies),
            "inflection": self.inflection,
        }


def alpha_ratio(params):
    """(lambda, alpha) for a system with eta < 0 and l > 0."""
    if not params.eta < 0:
        raise DomainError(f"regime analysis needs eta < 0, got {params.eta!r}")
    if not params.l > 0:
        raise DomainError("regime analysis needs l > 0")
    lam = params.lambda_scale
    return lam, abs(params.eta) / lam


def regime_case(alpha):
    if abs(alpha - 1) <= ALPHA_ONE_TOL:
        return "alpha_eq_1"
    return "alpha_lt_1" if alpha < 1 else "alpha_gt_1"


def factored_potential(r, params):
    """-(k/r)(r - lambda)/(r - alpha lambda) with alpha lambda = |eta|."""
    lam, alpha = alpha_ratio(params)
    return -(params.k / r) * (r - lam) / (r - alpha * lam)


def critical_points(params):
    """Stationary radii lambda(1 -+ sqrt(1 - alpha)) of V_eff, inner first."""
    lam, alpha = alpha_ratio(params)
    if regime_case(alpha) != "alpha_lt_1":
        raise DomainError(f"no real critical points for alpha = {alpha!r} >= 1")
    s = math.sqrt(1 - alpha)
    return lam * (1 - s), lam * (1 + s)


def critical_energy_outer(params):
    """V_eff at the outer critical point, -k/(lambda (1 + sqrt(1 - alpha))^2)."""
    lam, alpha = alpha_ratio(params)
    if regime_case(alpha) != "alpha_lt_1":
        raise DomainError(f"no outer critical point for alpha = {alpha!r} >= 1")
    return -params.k / (lam * (1 + math.sqrt(1 - alpha)) ** 2)


def critical_energy_inner(params):
    """Minimum of the time-reversed potential, k/(lambda (1 - sqrt(1 - alpha))^2)."""
    lam, alpha = alpha_ratio(params)
    if regime_case(alpha) != "alpha_lt_1":
        raise DomainError(f"no inner critical point for alpha = {alpha!r} >= 1")
    return params.k / (lam * (1 - math.sqrt(1 - alpha)) ** 2)


def time_reversed_potential(r, params):
    """l^2/(2mr(|eta| - r)) - k/(|eta| - r) on 0 < r < |eta|."""
    if not params.eta < 0:
        raise DomainError("time-reversed potential needs eta < 0")
    w = -params.eta
    if not 0 < primal(r) < w:
        raise DomainError(f"r = {r!r} outside the inner region (0, {w!r})")
    return params.l**2 / (2 * params.m * r * (w - r)) - params.k / (w - r)


def inflection_point(params):
    """lambda (1 - (alpha-1)^(1/3) + (alpha-1)^(2/3)) for alpha > 1."""
    lam, alpha = alpha_ratio(params)
    if regime_case(alpha) != "alpha_gt_1":
        raise DomainError(f"inflection point only for alpha > 1, got {alpha!r}")
    c = (alpha - 1) ** (1 / 3)
    return lam * (1 - c + c * c)


def classify(E, r0, params):
    """Regime of the motion with energy E (of H) started at radius r0.

    In the inner region the report is stated for H~ = -H, so the energy
    compared against the inner minimum is -E.
    """
    lam, alpha = alpha_ratio(params)
    w = -params.eta
    if not r0 > 0:
        raise DomainError(f"r0 must be positive, got {r0!r}")
    if abs(r0 - w) <= 1e-14 * max(1.0, w):
        raise SingularPointError(f"r0 = {r0!r} sits on the singular radius |eta|")
    case = regime_case(alpha)
    common = dict(alpha=alpha, lam=lam, case=case)
    if case == "alpha_eq_1":
        return RegimeReport(region="whole_line", bounded=False, hamiltonian="H", energy=E, **common)
    inner = r0 < w
    region = "inner" if inner else "outer"
    if case == "alpha_gt_1":
        return RegimeReport(
            region=region,
            bounded=False,
            hamiltonian="H_tilde" if inner else "H",
            energy=-E if inner else E,
            inflection=inflection_point(params),
            **common,
        )
    r_in, r_out = critical_points(params)
    if inner:
        e_tilde = -E
        e_min = critical_energy_inner(params)
        return RegimeReport(
            region=region,
            bounded=e_tilde > e_min,
            hamiltonian="H_tilde",
            energy=e_tilde,
            critical_radii=[r_in],
            critical_energies=[e_min],
            **common,
        )
    e_crit = critical_energy_outer(params)
    return RegimeReport(
        region=region,
        bounded=e_crit < E < 0,
        hamiltonian="H",
        energy=E,
        critical_radii=[r_out],
        critical_energies=[e_crit],
        **common,
    )
