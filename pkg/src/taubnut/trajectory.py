"""Closed-form radial time laws for bound orbits (E < 0).

Two time origins coexist. The algebraic law t(r) built from the ladder
functions puts aphelion at t = 0 for theta0 = 0; the eccentric-anomaly law
(deformed Kepler equation) puts perihelion at psi = 0.

Closed forms are restricted to orbits lying entirely in r > -eta with
(a/(eta + a)) eps < 1, which always holds for eta >= 0.
"""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError, NoBoundOrbitError, OutOfAnnulusError
from .hamiltonian import RadialState, eval_radial_hamiltonian
from .sga import ladder

__all__ = [
    "OrbitGeometry",
    "EccentricAnomaly",
    "frequency",
    "inversion_points",
    "is_circular",
    "orbit_geometry",
    "time_of_radius_algebraic",
    "time_of_state_algebraic",
    "kepler_time",
    "solve_kepler",
    "eccentric_anomaly_of_radius",
    "radial_state_of_time",
    "coupled_equations_residual",
    "algebraic_analytic_correspondence",
]

TWO_PI = 2 * math.pi
CIRCULAR_TOL = 1e-14
BRANCH_SLACK = 1e-12
KEPLER_TOL = 1e-13
KEPLER_MAXITER = 64


@dataclass(frozen=True)
class OrbitGeometry:
    a: float
    eps: float
    p_orbit: float
    r_minus: float
    r_plus: float
    omega: float
    tau: float
    q0: float
    circular: bool = False


@dataclass(frozen=True)
class EccentricAnomaly:
    psi: float
    winding: int = 0


def _abs_energy(E):
    if not E < 0:
        raise DomainError(f"bound-orbit formulas need E < 0, got {E!r}")
    return -E


def frequency(E, params):
    """Angular frequency of the radial motion, sqrt(2/m) 2|E|^(3/2)/(k + eta|E|)."""
    e = _abs_energy(E)
    denom = params.k + params.eta * e
    if denom == 0:
        raise DomainError("k + eta|E| = 0: frequency undefined")
    return math.sqrt(2 / params.m) * 2 * e * math.sqrt(e) / denom


def _discriminant(E, params):
    e = _abs_energy(E)
    K = params.k - params.eta * e
    if not K > 0:
        raise NoBoundOrbitError(f"effective coupling k - eta|E| = {K!r} is not positive")
    half = K / (2 * e)
    return half, half * half - params.l**2 / (2 * params.m * e)


def is_circular(E, params):
    half, disc = _discriminant(E, params)
    return abs(disc) <= CIRCULAR_TOL * max(1.0, half * half)


def inversion_points(E, params):
    """Turning radii (r_minus, r_plus): roots of r^2 - (K/|E|) r + l^2/(2m|E|)."""
    half, disc = _discriminant(E, params)
    if abs(disc) <= CIRCULAR_TOL * max(1.0, half * half):
        return half, half
    if disc < 0:
        raise NoBoundOrbitError(f"no bound orbit at E = {E!r}: discriminant {disc!r} < 0")
    root = math.sqrt(disc)
    r_minus, r_plus = half - root, half + root
    if not r_minus > 0:
        raise NoBoundOrbitError(f"inner turning point {r_minus!r} is not positive")
    return r_minus, r_plus


def orbit_geometry(E, params):
    e = _abs_energy(E)
    r_minus, r_plus = inversion_points(E, params)
    K = params.k - params.eta * e
    a = K / (2 * e)
    circ = is_circular(E, params)
    eps2 = 1 - 2 * e * params.l**2 / (params.m * K * K)
    eps = 0.0 if circ else math.sqrt(max(eps2, 0.0))
    omega = frequency(E, params)
    return OrbitGeometry(
        a=a,
        eps=eps,
        p_orbit=params.l**2 / (params.m * K),
        r_minus=r_minus,
        r_plus=r_plus,
        omega=omega,
        tau=TWO_PI / omega,
        q0=math.sqrt(params.m / (2 * e)) * K * eps,
        circular=circ,
    )


def _closed_form_geometry(E, params):
    g = orbit_geometry(E, params)
    eta = params.eta
    if not eta + g.a > 0:
        raise DomainError(f"eta + a = {eta + g.a!r} <= 0: deformed Kepler equation undefined")
    if eta < 0 and not g.r_minus + eta > 0:
        raise DomainError("orbit reaches the singular radius r = -eta; no closed-form time law")
    if g.a / (eta + g.a) * g.eps >= 1:
        raise DomainError("(a/(eta+a)) eps >= 1: time law not monotone")
    return g


def _annulus_roots(r, g):
    """(sqrt(r - r_minus), sqrt(r_plus - r)), with the branch slack applied.

    With u = (1 - r/a)/eps these give arccos(u) = 2 atan2(sqrt(r - r_minus),
    sqrt(r_plus - r)), which stays accurate at the turning points where
    arccos itself loses half the digits.
    """
    if g.eps == 0:
        raise DomainError("circular orbit: radius does not parametrize the motion")
    slack = BRANCH_SLACK * g.a * g.eps
    lo, hi = r - g.r_minus, g.r_plus - r
    if lo < -slack or hi < -slack:
        raise OutOfAnnulusError(f"r = {r!r} outside [{g.r_minus!r}, {g.r_plus!r}]")
    return math.sqrt(max(lo, 0.0)), math.sqrt(max(hi, 0.0))


def _acos_u(r, g):
    """arccos((1 - r/a)/eps)."""
    lo, hi = _annulus_roots(r, g)
    return 2 * math.atan2(lo, hi)


def time_of_radius_algebraic(r, E, theta0, params):
    """Time law t(r) read off the ladder-function constants of motion.

    Omega t = arccos(-sqrt(m/2)(K - 2|E|r)/(q0 sqrt|E|))
              - sqrt(2/m) sqrt|E|/(k + eta|E|) sqrt(2mrK - 2m|E|r^2 - l^2) - theta0.

    It returns 0 at aphelion and pi/Omega at perihelion (theta0 = 0); at
    interior radii it equals the analytic law with eps replaced by -eps, so
    it is not the first-passage time of the physical orbit there. Use
    :func:`time_of_state_algebraic` for that. Both square-root arguments are
    evaluated in factored form around the turning points.
    """
    g = _closed_form_geometry(E, params)
    e = -E
    m, k, eta = params.m, params.k, params.eta
    if g.q0 == 0:
        raise DomainError("circular orbit: q0 = 0")
    lo, hi = _annulus_roots(r, g)
    # arccos(-u) = pi - arccos(u); the radicand is 2m|E| (r_plus - r)(r - r_minus)
    acos_minus_u = 2 * math.atan2(hi, lo)
    root = math.sqrt(2 * m * e) * lo * hi
    return (acos_minus_u - math.sqrt(2 / m) * math.sqrt(e) / (k + eta * e) * root - theta0) / g.omega


def time_of_state_algebraic(s, theta0, params):
    """Time in [0, tau) at which the orbit with phase theta0 passes through s.

    A+ advances as exp(i Omega t) along the flow, so t = (arg A+(s) - theta0)/Omega
    mod tau. This is the univalued version of the algebraic time law.
    """
    pair = ladder(s, params)
    E = eval_radial_hamiltonian(s, params)
    omega = frequency(E, params)
    phase = math.atan2(pair.a_plus.imag, pair.a_plus.real) - theta0
    return (phase % TWO_PI) / omega


def kepler_time(psi, E, params):
    """t = (psi + 2 pi winding - (a/(eta + a)) eps sin psi) / Omega."""
    g = _closed_form_geometry(E, params)
    if isinstance(psi, EccentricAnomaly):
        angle, winding = psi.psi, psi.winding
    else:
        angle, winding = float(psi), 0
    e_eff = g.a / (params.eta + g.a) * g.eps
    return (angle + TWO_PI * winding - e_eff * math.sin(angle)) / g.omega


def _solve_reduced(M, e_eff):
    """psi in [0, 2 pi] with psi - e_eff sin psi = M, for M in [0, 2 pi)."""
    lo, hi = 0.0, TWO_PI
    psi = M + e_eff * math.sin(M)
    for _ in range(KEPLER_MAXITER):
        f = psi - e_eff * math.sin(psi) - M
        if f < 0:
            lo = psi
        else:
            hi = psi
        step = f / (1 - e_eff * math.cos(psi))
        new = psi - step
        if not lo <= new <= hi:
            new = 0.5 * (lo + hi)
        if abs(new - psi) <= KEPLER_TOL:
            return new
        psi = new
    raise ConvergenceError(f"Kepler solver did not converge for M = {M!r}, e = {e_eff!r}")


def solve_kepler(t, E, params):
    """Invert the deformed Kepler equation; t is measured from perihelion."""
    g = _closed_form_geometry(E, params)
    e_eff = g.a / (params.eta + g.a) * g.eps
    winding = math.floor(t / g.tau)
    M = g.omega * t - TWO_PI * winding
    M = min(max(M, 0.0), math.nextafter(TWO_PI, 0.0))
    psi = _solve_reduced(M, e_eff)
    if psi >= TWO_PI:
        psi, winding = 0.0, winding + 1
    return EccentricAnomaly(psi=psi, winding=winding)


def eccentric_anomaly_of_radius(r, E, params):
    g = orbit_geometry(E, params)
    return EccentricAnomaly(psi=_acos_u(r, g), winding=0)


def _state_of_anomaly(psi, g, params):
    r = g.a * (1 - g.eps * math.cos(psi))
    e_eff = g.a / (params.eta + g.a) * g.eps
    rdot = g.a * g.eps * math.sin(psi) * g.omega / (1 - e_eff * math.cos(psi))
    return RadialState(r=r, p=params.m * (r + params.eta) / r * rdot)


def radial_state_of_time(t, E, theta0, params):
    """(r, p) at time t on the orbit whose ladder phase is theta0.

    Perihelion is passed when Omega t + theta0 = pi, which fixes the offset to
    the eccentric-anomaly clock.
    """
    g = _closed_form_geometry(E, params)
    psi = solve_kepler(t - (math.pi - theta0) / g.omega, E, params)
    return _state_of_anomaly(psi.psi, g, params)


def coupled_equations_residual(s, t, E, theta0, params):
    """Residuals of the two real equations of motion from Q+- = q0 exp(+-i theta0).

    2 r sqrt(2m|E|) - sqrt(2m) K/sqrt|E| = 2 q0 cos(Phi) and r p = -q0 sin(Phi),
    with Phi = sqrt(2/m) r p sqrt|E|/(k + eta|E|) + Omega t + theta0.
    """
    g = orbit_geometry(E, params)
    e = -E
    m, k, eta = params.m, params.k, params.eta
    K = k - eta * e
    phi = math.sqrt(2 / m) * s.r * s.p * math.sqrt(e) / (k + eta * e) + g.omega * t + theta0
    lhs = 2 * s.r * math.sqrt(2 * m * e) - math.sqrt(2 * m) * K / math.sqrt(e)
    return lhs - 2 * g.q0 * math.cos(phi), s.r * s.p + g.q0 * math.sin(phi)


def algebraic_analytic_correspondence(r, E, params):
    """Omega (t_alg - t_an) - (pi - 2 arccos u), u = (1 - r/a)/eps.

    t_alg is the ladder-function law at theta0 = 0 and t_an the
    eccentric-anomaly law; they differ by arccos(-u) versus arccos(u) only,
    i.e. by the sign of eps.
    """
    g = _closed_form_geometry(E, params)
    if not g.r_minus < r < g.r_plus:
        raise OutOfAnnulusError(f"r = {r!r} not strictly inside ({g.r_minus!r}, {g.r_plus!r})")
    u = (1 - r / g.a) / g.eps
    t_alg = time_of_radius_algebraic(r, E, 0.0, params)
    t_an = kepler_time(eccentric_anomaly_of_radius(r, E, params), E, params)
    return g.omega * (t_alg - t_an) - (math.pi - 2 * math.acos(u))
