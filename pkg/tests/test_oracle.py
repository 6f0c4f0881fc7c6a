import math

import numpy as np
import pytest

from taubnut import BoundaryHitError, NoCrossingError, PhasePoint3D, RadialState, SystemParams, ValidationError
from taubnut import dual
from taubnut.hamiltonian import eval_hamiltonian_3d, eval_radial_hamiltonian, runge_lenz
from taubnut.oracle import (
    IntegratorConfig,
    first_passage_times,
    hamilton_rhs_3d,
    hamilton_rhs_radial,
    integrate_3d,
    integrate_radial,
    momentum_zero_crossings,
    radial_period,
    reduce_to_radial,
)
from taubnut.trajectory import frequency, orbit_geometry


def perihelion_3d(params, E=-1.0):
    g = orbit_geometry(E, params)
    return PhasePoint3D([g.r_minus, 0.0, 0.0], [0.0, params.l / g.r_minus, 0.0]), g


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(rel_tol=0.0), dict(abs_tol=1e-3), dict(boundary_margin=0.0), dict(max_step=-1)])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            IntegratorConfig(**kw)


class TestRadialField:
    def test_aphelion_force_inward(self, fig):
        g = orbit_geometry(-1.0, fig)
        rdot, pdot = hamilton_rhs_radial(RadialState(g.r_plus, 0.0), fig)
        assert rdot == 0.0
        assert pdot < 0

    def test_flat_kepler(self, flat):
        r, p = 0.7, 0.3
        rdot, pdot = hamilton_rhs_radial(RadialState(r, p), flat)
        assert rdot == pytest.approx(p)
        assert pdot == pytest.approx(flat.l**2 / r**3 - 1 / r**2, rel=1e-14)

    def test_against_finite_difference(self, rng):
        for _ in range(50):
            params = SystemParams(eta=rng.choice([-0.05, 0.0, 0.1, 0.25]))
            s = RadialState(rng.uniform(0.2, 2.0), rng.uniform(-2, 2))
            h = 1e-6
            fd = -(eval_radial_hamiltonian(RadialState(s.r + h, s.p), params)
                   - eval_radial_hamiltonian(RadialState(s.r - h, s.p), params)) / (2 * h)
            rdot, pdot = hamilton_rhs_radial(s, params)
            assert pdot == pytest.approx(fd, abs=1e-6)
            assert rdot == pytest.approx(s.r / (s.r + params.eta) * s.p / params.m, rel=1e-14)

    def test_time_reversed(self, fig):
        s = RadialState(0.4, 0.2)
        a, b = hamilton_rhs_radial(s, fig), hamilton_rhs_radial(s, fig, time_reversed=True)
        assert b == (-a[0], -a[1])


def test_3d_field_against_dual_gradient(rng):
    for _ in range(30):
        params = SystemParams(eta=rng.choice([-0.05, 0.0, 0.1]))
        q, p = rng.uniform(0.3, 1.0, 3), rng.normal(size=3)

        def H(*z):
            r = dual.sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2])
            p2 = z[3] * z[3] + z[4] * z[4] + z[5] * z[5]
            return r * p2 / (2 * params.m * (params.eta + r)) - params.k / (params.eta + r)

        grad = dual.partials(H, *q, *p)
        dq, dp = hamilton_rhs_3d(q, p, params)
        np.testing.assert_allclose(dq, grad[3:], rtol=1e-13)
        np.testing.assert_allclose(dp, -np.array(grad[:3]), rtol=1e-13, atol=1e-14)


class TestIntegrateRadial:
    @pytest.mark.parametrize("eta", [0.0, 0.1])
    def test_period_and_energy(self, eta):
        params = SystemParams(eta=eta)
        g = orbit_geometry(-1.0, params)
        traj = integrate_radial(RadialState(g.r_minus, 0.0), params, 3.2 * g.tau)
        assert radial_period(traj) == pytest.approx(2 * math.pi / frequency(-1.0, params), rel=1e-8)
        assert np.all(np.diff(traj.t) > 0)
        for smp in traj:
            assert abs(smp.invariants_snapshot["H"] + 1.0) <= 1e-9

    def test_eta_01_period_value(self, fig):
        g = orbit_geometry(-1.0, fig)
        traj = integrate_radial(RadialState(g.r_minus, 0.0), fig, 2.2 * g.tau)
        assert radial_period(traj) == pytest.approx(2 * math.pi / (2 * math.sqrt(2) / 1.1), rel=1e-8)

    def test_scattering(self, fig):
        s0 = RadialState(0.5, -3.0)
        assert eval_radial_hamiltonian(s0, fig) > 0
        traj = integrate_radial(s0, fig, 30.0)
        zeros = momentum_zero_crossings(traj)
        assert len(zeros) == 1
        after = traj.t[traj.t > zeros[0]]
        assert np.all(np.diff([traj.radius_at(t) for t in after]) > 0)

    def test_boundary_hit(self):
        params = SystemParams(eta=-0.25)  # alpha = 2: falls onto r = |eta|
        with pytest.raises(BoundaryHitError) as info:
            integrate_radial(RadialState(0.3, -0.1), params, 5.0)
        exc = info.value
        assert 0 < exc.t_event < 5.0
        assert all(s.state.r > 0.25 for s in exc.trajectory)

    def test_fall_onto_pole_is_boundary_hit(self):
        params = SystemParams(eta=-0.25)
        with pytest.raises(BoundaryHitError) as info:
            integrate_radial(RadialState(0.6, 0.3), params, 5.0)
        last = info.value.trajectory.samples[-1].state.r
        assert 0 < last - 0.25 < 1e-6

    def test_time_reversed_inner_region_stays_confined(self):
        params = SystemParams(eta=-0.1)
        s0 = RadialState(0.05, 0.0)
        traj = integrate_radial(s0, params, 2.0, time_reversed=True)
        assert traj.hamiltonian == "H_tilde"
        radii = [traj.radius_at(t) for t in np.linspace(0, 2.0, 400)]
        assert 0 < min(radii) and max(radii) < 0.1
        assert len(momentum_zero_crossings(traj)) >= 2


class TestIntegrate3D:
    def test_invariants_one_period(self, fig):
        pt, g = perihelion_3d(fig)
        traj = integrate_3d(pt, fig, g.tau)
        first = traj[0].invariants_snapshot
        for smp in traj:
            snap = smp.invariants_snapshot
            assert np.max(np.abs(snap["L"] - first["L"])) <= 1e-9
            assert np.max(np.abs(snap["R"] - first["R"])) <= 1e-8
            assert abs(snap["R_norm2_residual"]) <= 1e-10
        qf = traj.sol(g.tau)[:3]
        assert np.linalg.norm(qf - pt.q) <= 1e-6 * np.linalg.norm(pt.q)

    def test_agrees_with_radial_run(self, fig):
        pt = PhasePoint3D([0.3, 0.2, -0.1], [0.2, 1.1, 0.4])
        s0, l = reduce_to_radial(pt)
        params = SystemParams(l=l, eta=fig.eta)
        t_final = 3.0
        t3 = integrate_3d(pt, params, t_final)
        tr = integrate_radial(s0, params, t_final)
        for t in np.linspace(0, t_final, 50):
            assert t3.radius_at(t) == pytest.approx(tr.radius_at(t), abs=1e-7)
            assert t3.momentum_at(t) == pytest.approx(tr.momentum_at(t), abs=1e-7)

    def test_tolerance_decade_refinement(self, fig):
        # a 100x tighter tolerance cuts the closure error at least 4x
        pt, g = perihelion_3d(fig)
        errs = []
        for tol in (1e-6, 1e-8, 1e-10):
            traj = integrate_3d(pt, fig, g.tau, IntegratorConfig(rel_tol=tol, abs_tol=tol * 1e-2))
            errs.append(np.linalg.norm(traj.sol(g.tau)[:3] - pt.q))
        assert errs[0] >= 4 * errs[1] and errs[1] >= 4 * errs[2]

    @pytest.mark.xfail(reason="error of a tolerance-proportional controller need not drop 4x per halving", strict=False)
    def test_halving_tolerance_quarter_error(self, fig):
        pt, g = perihelion_3d(fig)
        errs = []
        for tol in (1e-8, 5e-9, 2.5e-9):
            traj = integrate_3d(pt, fig, g.tau, IntegratorConfig(rel_tol=tol, abs_tol=tol * 1e-2))
            errs.append(np.linalg.norm(traj.sol(g.tau)[:3] - pt.q))
        assert errs[0] >= 4 * errs[1] and errs[1] >= 4 * errs[2]


class TestFirstPassage:
    def test_aphelion_times_are_periods(self, fig):
        g = orbit_geometry(-1.0, fig)
        traj = integrate_radial(RadialState(g.r_plus, 0.0), fig, 3.01 * g.tau)
        times = first_passage_times(traj, g.r_plus)
        np.testing.assert_allclose(times, [0.0, g.tau, 2 * g.tau, 3 * g.tau], atol=1e-8)

    def test_mean_radius_crossed_twice_per_period(self, fig):
        g = orbit_geometry(-1.0, fig)
        traj = integrate_radial(RadialState(g.r_plus, 0.0), fig, 3 * g.tau)
        assert len(first_passage_times(traj, g.a)) == 6

    def test_no_crossing(self, fig):
        g = orbit_geometry(-1.0, fig)
        traj = integrate_radial(RadialState(g.r_plus, 0.0), fig, g.tau)
        with pytest.raises(NoCrossingError):
            first_passage_times(traj, 2.0)
