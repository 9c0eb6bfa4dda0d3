import math
from dataclasses import replace

import numpy as np
import pytest

from ellpar.harness import jump_initial, make_jump_scenario
from ellpar.nonlinearity import BnFamily, BSpec
from ellpar.operators import OperatorSpec
from ellpar.solver import (
    Geometry,
    NewtonFailure,
    ProblemSpec,
    SolverPolicy,
    perturb_initial_data,
    run,
    singular_limit_study,
    solve_elliptic,
    step_parabolic,
)


def interval_spec(**kw):
    base = dict(
        geometry=Geometry("interval", -1.0, 1.0),
        op=OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=1),
        bn=BnFamily(16),
        u0=jump_initial,
        T=0.1, grid=201, dt=2.5e-3,
    )
    base.update(kw)
    return ProblemSpec(**base)


class TestElliptic:
    def test_interval_trace_is_affine(self):
        spec = interval_spec(g_lo=-1.0, g_hi=0.5)
        u = solve_elliptic(spec)
        x = spec.nodes()
        want = -1.0 + 1.5 * (x + 1) / 2
        assert np.max(np.abs(u - want)) < 1e-10

    def test_residual_tolerance(self):
        from ellpar.operators import apply_operator_1d

        spec = ProblemSpec(
            geometry=Geometry("radial-annulus", 0.5, 1.5),
            op=OperatorSpec(kind="pucci-minus", lam=1.0, Lam=1.7, n_dim=2),
            g_lo=1.0, g_hi=-1.0, grid=101,
        )
        u = solve_elliptic(spec)
        F = apply_operator_1d(spec.op, u, spec.nodes(), radial=True)
        assert np.max(np.abs(F)) <= 1e-10

    def test_shooting_cross_check(self):
        from ellpar.harness import _shooting_oracle

        op = OperatorSpec(kind="pucci-plus", lam=1.0, Lam=1.4, n_dim=2)
        spec = ProblemSpec(geometry=Geometry("radial-annulus", 0.5, 1.5),
                           op=op, g_lo=1.0, g_hi=-1.0, grid=201)
        u = solve_elliptic(spec)
        x = spec.nodes()
        oracle = _shooting_oracle(op, 0.5, 1.5, 1.0, -1.0, x,
                                  max_step=(x[1] - x[0]) / 10)
        assert np.max(np.abs(u - oracle)) < 1e-4


class TestStepParabolic:
    def test_stationarity_invariant(self):
        # elliptic solutions are fixed points of the implicit step, any dt
        spec = interval_spec(g_lo=-1.0, g_hi=0.5)
        u_star = solve_elliptic(spec)
        for dt in (1e-3, 0.05, 1.0):
            u_next, _ = step_parabolic(replace(spec, g_lo=-1.0, g_hi=0.5),
                                       u_star, t_next=dt, dt=dt)
            assert np.max(np.abs(u_next - u_star)) < 1e-8

    def test_heat_step_against_exact_mode(self):
        # positive region, b_n' ~ 1: one mode of the heat equation decays as
        # exp(-pi^2 t / 4) on (-1, 1) with zero boundary, shifted up
        spec = ProblemSpec(
            geometry=Geometry("interval", -1.0, 1.0),
            op=OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=1),
            bn=BnFamily(64),
            g_lo=2.0, g_hi=2.0,
            u0=lambda x: 2.0 + np.cos(np.pi * x / 2),
            T=0.05, grid=401, dt=1e-4,
        )
        out = run(spec, SolverPolicy())
        x = spec.nodes()
        want = 2.0 + math.exp(-np.pi**2 / 4 * 0.05) * np.cos(np.pi * x / 2)
        assert np.max(np.abs(out.values[-1] - want)) < 2e-3

    def test_grid_convergence_order_heat_region(self):
        # Richardson on three grids in the pure heat regime: order >= 1.9.
        # dt scales with h^2 so the first-order time error refines at the
        # same rate and the observed order reflects the combined scheme.
        errs = []
        for m, dt in ((51, 3.2e-4), (101, 8e-5), (201, 2e-5)):
            spec = ProblemSpec(
                geometry=Geometry("interval", -1.0, 1.0),
                op=OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=1),
                bn=BnFamily(64),
                g_lo=2.0, g_hi=2.0,
                u0=lambda x: 2.0 + np.cos(np.pi * x / 2),
                T=0.02, grid=m, dt=dt,
            )
            out = run(spec, SolverPolicy())
            x = spec.nodes()
            want = 2.0 + math.exp(-np.pi**2 / 4 * 0.02) * np.cos(np.pi * x / 2)
            errs.append(float(np.max(np.abs(out.values[-1] - want))))
        p1 = math.log2(errs[0] / errs[1])
        p2 = math.log2(errs[1] / errs[2])
        assert p1 >= 1.9 and p2 >= 1.9, (errs, p1, p2)

    def test_rejects_bad_dt(self):
        spec = interval_spec()
        with pytest.raises(ValueError):
            step_parabolic(spec, spec.initial_values(), 0.1, dt=0.0)


class TestRun:
    def test_jump_extinction_and_fronts(self):
        out = run(interval_spec(T=0.2), SolverPolicy())
        assert out.extinction_time is not None
        assert 0 < out.extinction_time < 0.2
        # two fronts initially, near +-0.3
        f0 = out.fronts[0]
        assert len(f0) == 2
        assert f0[0] == pytest.approx(-0.3, abs=0.01)
        assert f0[1] == pytest.approx(0.3, abs=0.01)
        # no fronts after extinction
        j = int(np.searchsorted(out.times, out.extinction_time))
        assert all(len(f) == 0 for f in out.fronts[j:])

    def test_max_principle_bounds(self):
        out = run(interval_spec(T=0.2), SolverPolicy())
        assert out.values.min() >= -1.0 - 1e-9
        assert out.values.max() <= 0.5 + 1e-9

    def test_comparison_of_ordered_pair(self):
        spec = interval_spec(T=0.1)
        x = spec.nodes()
        u0 = spec.initial_values()
        hi = replace(spec, u0=perturb_initial_data(u0, x, 0.05, "up"),
                     g_lo=-0.99, g_hi=-0.99)
        lo_run = run(spec, SolverPolicy())
        hi_run = run(hi, SolverPolicy())
        assert float(np.min(hi_run.values - lo_run.values)) >= -1e-9

    def test_reflecting_inner_boundary_constant(self):
        # constant data matching the outer boundary is a fixed point on the
        # punctured ball (no-flux inner end)
        h = 1.0 / 100
        spec = ProblemSpec(
            geometry=Geometry("radial-ball-punctured", 2 * h, 1.0),
            op=OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=2),
            bn=BnFamily(8),
            g_lo=-0.5, g_hi=-0.5,
            u0=lambda x: np.full_like(x, -0.5),
            T=0.05, grid=99, dt=1e-3,
        )
        out = run(spec, SolverPolicy())
        assert np.max(np.abs(out.values + 0.5)) < 1e-9


class TestPerturbations:
    def test_window_shift_and_lift(self):
        x = np.linspace(-1, 1, 201)
        u0 = jump_initial(x)
        up = perturb_initial_data(u0, x, 0.1, "up")
        dn = perturb_initial_data(u0, x, 0.1, "down")
        assert np.all(up[1:-1] > u0[1:-1])
        assert np.all(dn[1:-1] < u0[1:-1])
        # front moved outward by about eps
        assert np.max(x[up > 0]) == pytest.approx(0.3 + 0.1, abs=0.02)

    def test_exiting_domain_raises(self):
        x = np.linspace(-1, 1, 201)
        u0 = 0.9 - np.abs(x)
        with pytest.raises(ValueError):
            perturb_initial_data(u0, x, 0.2, "up")


class TestStudies:
    def test_singular_limit_validation(self):
        spec = interval_spec()
        with pytest.raises(ValueError):
            singular_limit_study(spec, [4, 8])
        with pytest.raises(ValueError):
            singular_limit_study(spec, [8, 4, 2])

    def test_singular_limit_small(self):
        spec = interval_spec(T=0.06, grid=101)
        rep = singular_limit_study(spec, [4, 8, 16],
                                   probe_times=[0.01, 0.02])
        assert len(rep.pairwise_sup) == 2
        assert rep.pairwise_sup[1] < rep.pairwise_sup[0]
