"""Numerical oracle: adaptive integration of Hamilton's equations.

Nothing here uses the closed-form solutions. The radial vector field comes
from dual-number derivatives of the Hamiltonian; the 3D field is written out
by hand (and cross-checked against dual numbers in the tests). Integration
uses the 8th-order Dormand-Prince scheme with dense output, and terminal
events stop runs that approach r = 0 or r = -eta.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import dual
from .errors import BoundaryHitError, NoCrossingError, SingularPointError, StepFailureError, ValidationError
from .hamiltonian import PhasePoint3D, RadialState, angular_momentum, radial_hamiltonian, runge_lenz
from .sga import q_constants

__all__ = [
    "IntegratorConfig",
    "TrajectorySample",
    "Trajectory",
    "hamilton_rhs_radial",
    "hamilton_rhs_3d",
    "integrate_radial",
    "integrate_3d",
    "first_passage_times",
    "momentum_zero_crossings",
    "radial_period",
    "reduce_to_radial",
]

# a stalled step this close to r = -eta counts as reaching the pole
POLE_STALL_FACTOR = 100.0
POLE_STALL_REL = 1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-13
    max_step: float = math.inf
    boundary_margin: float = 1e-8

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 0 < v <= 1e-4:
                raise ValidationError(f"{name} must lie in (0, 1e-4], got {v!r}")
        if not self.boundary_margin > 0:
            raise ValidationError("boundary_margin must be positive")
        if not self.max_step > 0:
            raise ValidationError("max_step must be positive")


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: object
    invariants_snapshot: dict = field(default_factory=dict)


@dataclass
class Trajectory:
    """Samples at accepted solver steps plus the dense interpolant."""

    samples: list
    sol: object
    params: object
    kind: str
    hamiltonian: str = "H"
    t_event: float = None

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def t(self):
        return np.array([s.t for s in self.samples])

    @property
    def t_final(self):
        return self.samples[-1].t

    def radius_at(self, t):
        y = self.sol(t)
        if self.kind == "radial":
            return y[0]
        return np.linalg.norm(y[:3], axis=0)

    def momentum_at(self, t):
        y = self.sol(t)
        if self.kind == "radial":
            return y[1]
        q, p = y[:3], y[3:]
        return np.sum(q * p, axis=0) / np.linalg.norm(q, axis=0)


def _check_margin(r, eta, margin):
    if r <= margin or abs(r + eta) <= margin:
        raise SingularPointError(f"r = {r!r} within {margin} of a boundary (0 or -eta)")


def hamilton_rhs_radial(s, params, time_reversed=False, margin=0.0):
    """(dr/dt, dp/dt) of H, or of -H when ``time_reversed``."""
    _check_margin(s.r, params.eta, margin)
    dh_dr, dh_dp = dual.partials(lambda r, p: radial_hamiltonian(r, p, params), s.r, s.p)
    sign = -1.0 if time_reversed else 1.0
    return sign * dh_dp, -sign * dh_dr


def hamilton_rhs_3d(q, p, params, time_reversed=False):
    """(dq/dt, dp/dt) of H(q, p) = |q| p^2/(2m(eta+|q|)) - k/(eta+|q|)."""
    m, k, eta = params.m, params.k, params.eta
    r = math.sqrt(q @ q)
    if r + eta == 0:
        raise SingularPointError("|q| = -eta")
    p2 = p @ p
    dh_dr = p2 * eta / (2 * m * (r + eta) ** 2) + k / (r + eta) ** 2
    sign = -1.0 if time_reversed else 1.0
    return sign * r * p / (m * (r + eta)), -sign * dh_dr * q / r


def _boundary_events(radius, eta, margin):
    def near_origin(t, y):
        return radius(y) - margin

    near_origin.terminal = True

    events = [near_origin]
    if eta < 0:

        def near_pole(t, y):
            return abs(radius(y) + eta) - margin

        def crosses_pole(t, y):
            return radius(y) + eta

        near_pole.terminal = True
        crosses_pole.terminal = True
        events += [near_pole, crosses_pole]
    return events


def _run(fun, y0, t_final, cfg, radius, eta):
    res = solve_ivp(
        fun,
        (0.0, t_final),
        y0,
        method="DOP853",
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
        dense_output=True,
        events=_boundary_events(radius, eta, cfg.boundary_margin),
    )
    t_event = None
    if res.status == -1:
        # the step controller can stall just outside the pole margin, where
        # dr/dt ~ 1/(r + eta); that is the pole being reached, not a failure
        gap = abs(radius(res.y[:, -1]) + eta) if eta < 0 else math.inf
        if gap <= max(POLE_STALL_FACTOR * cfg.boundary_margin, POLE_STALL_REL * abs(eta)):
            return res, float(res.t[-1])
        raise StepFailureError(f"integration failed: {res.message}")
    if res.status == 1:
        hits = [te[0] for te in res.t_events if len(te)]
        t_event = float(min(hits))
    return res, t_event


def _radial_snapshot(y, t, params, time_reversed):
    h = radial_hamiltonian(y[0], y[1], params)
    snap = {"H_tilde" if time_reversed else "H": -h if time_reversed else h}
    if h < 0 and not time_reversed:
        try:
            qp, qm, polar = q_constants(RadialState(y[0], y[1]), t, params)
        except Exception:
            return snap
        snap.update(Q_plus=qp, Q_minus=qm, q0=polar.q0, theta0=polar.theta0)
    return snap


def integrate_radial(s0, params, t_final, cfg=None, time_reversed=False):
    """Integrate the radial problem from s0 over [0, t_final].

    With ``time_reversed`` the flow of -H is followed, which is the physical
    choice in the inner region 0 < r < -eta for eta < 0.
    """
    cfg = cfg or IntegratorConfig()
    if not t_final > 0:
        raise ValidationError("t_final must be positive")
    _check_margin(s0.r, params.eta, cfg.boundary_margin)

    def fun(t, y):
        return hamilton_rhs_radial(RadialState(y[0], y[1]), params, time_reversed)

    res, t_event = _run(fun, [s0.r, s0.p], t_final, cfg, lambda y: y[0], params.eta)
    samples = [
        TrajectorySample(t=float(t), state=RadialState(float(y[0]), float(y[1])),
                         invariants_snapshot=_radial_snapshot(y, t, params, time_reversed))
        for t, y in zip(res.t, res.y.T)
    ]
    traj = Trajectory(samples, res.sol, params, "radial", "H_tilde" if time_reversed else "H", t_event)
    if t_event is not None:
        raise BoundaryHitError(f"boundary reached at t = {t_event!r}", t_event, traj)
    return traj


def _snapshot_3d(q, p, params):
    pt = PhasePoint3D(q, p)
    r = np.linalg.norm(q)
    h = r * (p @ p) / (2 * params.m * (params.eta + r)) - params.k / (params.eta + r)
    R = runge_lenz(pt, params)
    L = angular_momentum(pt)
    return {
        "H": float(h),
        "L": L,
        "R": R,
        "R_norm2_residual": float(R @ R - (2 * (L @ L) / params.m * h + (params.eta * h + params.k) ** 2)),
    }


def integrate_3d(pt0, params, t_final, cfg=None, time_reversed=False):
    cfg = cfg or IntegratorConfig()
    if not t_final > 0:
        raise ValidationError("t_final must be positive")
    _check_margin(pt0.radius, params.eta, cfg.boundary_margin)

    def fun(t, y):
        dq, dp = hamilton_rhs_3d(y[:3], y[3:], params, time_reversed)
        return np.concatenate([dq, dp])

    y0 = np.concatenate([pt0.q, pt0.p])
    res, t_event = _run(fun, y0, t_final, cfg, lambda y: math.sqrt(y[:3] @ y[:3]), params.eta)
    samples = [
        TrajectorySample(t=float(t), state=PhasePoint3D(y[:3].copy(), y[3:].copy()),
                         invariants_snapshot=_snapshot_3d(y[:3], y[3:], params))
        for t, y in zip(res.t, res.y.T)
    ]
    traj = Trajectory(samples, res.sol, params, "3d", "H_tilde" if time_reversed else "H", t_event)
    if t_event is not None:
        raise BoundaryHitError(f"boundary reached at t = {t_event!r}", t_event, traj)
    return traj


def reduce_to_radial(pt):
    """(RadialState, l) of a 3D point: r = |q|, p_r = q.p/|q|, l = |q x p|."""
    r = pt.radius
    return RadialState(r, float(pt.q @ pt.p / r)), float(np.linalg.norm(np.cross(pt.q, pt.p)))


def _crossings(traj, g, subdiv=8, t_min=0.0):
    """Roots of g(t) bracketed on a refinement of the step grid."""
    ts = traj.t
    grid = np.unique(np.concatenate([np.linspace(a, b, subdiv + 1) for a, b in zip(ts[:-1], ts[1:])]))
    vals = g(grid)
    roots = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            if a > t_min:
                roots.append(a)
            continue
        if fa * fb < 0:
            roots.append(brentq(lambda t: float(g(t)), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0 and grid[-1] > t_min:
        roots.append(grid[-1])
    return [t for t in roots if t > t_min]


def first_passage_times(traj, target_r, touch_tol=1e-8):
    """All times r(t) = target_r, located on the dense output.

    A turning radius is touched rather than crossed, so momentum zeros whose
    radius lies within ``touch_tol`` of the target are included as well.
    """
    slack = touch_tol * max(1.0, abs(target_r))
    roots = _crossings(traj, lambda t: traj.radius_at(t) - target_r, t_min=-1.0)
    if abs(traj.radius_at(traj.samples[0].t) - target_r) <= slack:
        roots.append(traj.samples[0].t)
    for tz in _crossings(traj, traj.momentum_at, t_min=-1.0):
        if abs(traj.radius_at(tz) - target_r) <= slack:
            roots.append(tz)
    roots.sort()
    merged = [t for i, t in enumerate(roots) if i == 0 or t - roots[i - 1] > 1e-9]
    if not merged:
        raise NoCrossingError(f"r(t) never crosses {target_r!r}")
    return merged


def momentum_zero_crossings(traj, t_min=1e-12):
    """Times where p changes sign, excluding t <= t_min."""
    return _crossings(traj, traj.momentum_at, t_min=t_min)


def radial_period(traj):
    """Mean spacing of every second zero of p, i.e. of same-direction crossings."""
    zeros = momentum_zero_crossings(traj)
    if len(zeros) < 3:
        raise NoCrossingError("need at least three momentum zeros to measure a period")
    same = zeros[::2]
    return (same[-1] - same[0]) / (len(same) - 1)
