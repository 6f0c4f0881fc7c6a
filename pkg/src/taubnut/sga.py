"""Classical spectrum-generating algebra of the radial problem.

The ladder functions A+ and A- factorize the level-set polynomial
r^2 p^2 - 2 m r (k + eta H) - 2 m r^2 H = -l^2 and close a Poisson algebra
with H. Brackets are evaluated exactly (to rounding) by forward-mode
differentiation, so every relation can be checked numerically at a state.
"""

import cmath
import math
from dataclasses import dataclass

from . import dual
from .dual import Dual, primal
from .errors import DomainError
from .hamiltonian import radial_hamiltonian

__all__ = [
    "LadderPair",
    "PolarConstants",
    "ClosureCoefficients",
    "closure_coefficients",
    "ladder",
    "factorization_residual",
    "level_set_residual",
    "poisson_bracket",
    "bracket_relation_residuals",
    "verify_su11",
    "q_constants",
    "r_fn",
    "p_fn",
    "hamiltonian_fn",
    "a_plus_fn",
    "a_minus_fn",
    "a0_fn",
]

POLE_TOL = 1e-9


@dataclass(frozen=True)
class LadderPair:
    a_plus: complex
    a_minus: complex


@dataclass(frozen=True)
class PolarConstants:
    q0: float
    theta0: float


@dataclass(frozen=True)
class ClosureCoefficients:
    """Coefficients fixed by factorization and closure at one energy.

    ``b`` follows the ansatz A = (... + a r sqrt(-H) + b/sqrt(-H)) e^f, so it
    carries no 1/sqrt(-H) itself.
    """

    alpha: float
    beta: float
    gamma: float
    a0: float
    b: float
    a_const: float


def _check_energy(h, params):
    hv = primal(h)
    if isinstance(hv, complex):
        hv = hv.real
    if not hv < 0:
        raise DomainError(f"ladder functions need H < 0, got H = {hv!r}")
    pole = params.k - params.eta * hv
    if abs(pole) <= POLE_TOL * params.k:
        raise DomainError(f"H = {hv!r} is within {POLE_TOL} of the pole k - eta H = 0")


def closure_coefficients(h, params):
    _check_energy(h, params)
    m, k, eta = params.m, params.k, params.eta
    sq = math.sqrt(-h)
    return ClosureCoefficients(
        alpha=-math.sqrt(2 / m) * 2 * h * sq / (k - eta * h),
        beta=math.sqrt(2 * m) * (k + eta * h) / sq,
        gamma=m * (k + eta * h) ** 2 / (2 * h),
        a0=math.sqrt(m / 2) * (k + eta * h) / sq,
        b=-math.sqrt(m / 2) * (k + eta * h),
        a_const=math.sqrt(2 * m),
    )


def _ladder_component(r, p, params, sign):
    """A^{sign} at (r, p); sign = +1 for A+, -1 for A-."""
    m, k, eta = params.m, params.k, params.eta
    h = radial_hamiltonian(r, p, params)
    _check_energy(h, params)
    sq = dual.sqrt(-h)
    amp = -sign * 1j * r * p + r * math.sqrt(2 * m) * sq - math.sqrt(m / 2) * (k + eta * h) / sq
    phase = dual.exp(-sign * 1j * math.sqrt(2 / m) * r * p * sq / (k - eta * h))
    return amp * phase


def ladder(s, params):
    return LadderPair(
        a_plus=complex(_ladder_component(s.r, s.p, params, +1)),
        a_minus=complex(_ladder_component(s.r, s.p, params, -1)),
    )


def factorization_residual(s, params):
    """A+ A- + gamma(H) + l^2, which vanishes identically."""
    pair = ladder(s, params)
    h = radial_hamiltonian(s.r, s.p, params)
    gamma = params.m * (params.k + params.eta * h) ** 2 / (2 * h)
    return abs(pair.a_plus * pair.a_minus + gamma + params.l**2)


def level_set_residual(s, params):
    """Polynomial side of the factorization: r^2 p^2 - 2mr(k + eta H) - 2mr^2 H + l^2."""
    r, p, m = s.r, s.p, params.m
    h = radial_hamiltonian(r, p, params)
    return r * r * p * p - 2 * m * r * (params.k + params.eta * h) - 2 * m * r * r * h + params.l**2


# Phase-space observables as functions of (r, p), evaluable on dual numbers.


def r_fn(params):
    return lambda r, p: r


def p_fn(params):
    return lambda r, p: p


def hamiltonian_fn(params):
    return lambda r, p: radial_hamiltonian(r, p, params)


def a_plus_fn(params):
    return lambda r, p: _ladder_component(r, p, params, +1)


def a_minus_fn(params):
    return lambda r, p: _ladder_component(r, p, params, -1)


def a0_fn(params):
    m, k, eta = params.m, params.k, params.eta

    def a0(r, p):
        h = radial_hamiltonian(r, p, params)
        _check_energy(h, params)
        return math.sqrt(m / 2) * (k + eta * h) / dual.sqrt(-h)

    return a0


def _grad(f, r, p):
    fr = f(Dual(r, 1.0), Dual(p, 0.0))
    fp = f(Dual(r, 0.0), Dual(p, 1.0))
    dr = fr.der if isinstance(fr, Dual) else 0.0
    dp = fp.der if isinstance(fp, Dual) else 0.0
    return dr, dp


def poisson_bracket(F, G, s):
    """{F, G} = dF/dr dG/dp - dF/dp dG/dr at state s."""
    fr, fp = _grad(F, s.r, s.p)
    gr, gp = _grad(G, s.r, s.p)
    return complex(fr * gp - fp * gr)


def bracket_relation_residuals(s, params):
    """Residuals of {H, A+-} = -+i alpha(H) A+- and {A+, A-} = i beta(H)."""
    h = radial_hamiltonian(s.r, s.p, params)
    c = closure_coefficients(h, params)
    pair = ladder(s, params)
    H, Ap, Am = hamiltonian_fn(params), a_plus_fn(params), a_minus_fn(params)
    return (
        abs(poisson_bracket(H, Ap, s) + 1j * c.alpha * pair.a_plus),
        abs(poisson_bracket(H, Am, s) - 1j * c.alpha * pair.a_minus),
        abs(poisson_bracket(Ap, Am, s) - 1j * c.beta),
    )


def verify_su11(s, params):
    """Moduli of {A0, A+} + iA+, {A0, A-} - iA- and {A+, A-} - 2iA0."""
    pair = ladder(s, params)
    A0, Ap, Am = a0_fn(params), a_plus_fn(params), a_minus_fn(params)
    a0 = A0(s.r, s.p)
    return (
        abs(poisson_bracket(A0, Ap, s) + 1j * pair.a_plus),
        abs(poisson_bracket(A0, Am, s) - 1j * pair.a_minus),
        abs(poisson_bracket(Ap, Am, s) - 2j * a0),
    )


def q_constants(s, t, params):
    """Time-dressed constants Q+- = A+- exp(-+i alpha(H) t) and their polar form."""
    h = radial_hamiltonian(s.r, s.p, params)
    alpha = closure_coefficients(h, params).alpha
    pair = ladder(s, params)
    qp = pair.a_plus * cmath.exp(-1j * alpha * t)
    qm = pair.a_minus * cmath.exp(1j * alpha * t)
    theta0 = math.atan2(qp.imag, qp.real)
    if theta0 == -math.pi:
        theta0 = math.pi
    return qp, qm, PolarConstants(q0=abs(qp), theta0=theta0)
