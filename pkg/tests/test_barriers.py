import math

import numpy as np
import pytest

from ellpar.barriers import (
    BarrierInfeasible,
    OutOfWindowError,
    critical_radius,
    eval_logdiv_barrier,
    eval_radial_barrier,
    front_offset_sets,
    make_eps_eta_barrier,
    make_parabola_barrier,
    solve_heatkernel_barrier,
    solve_logdiv_barrier,
    solve_radial_barrier,
    verify_subsolution_margin,
)
from ellpar.nonlinearity import BSpec, PsiSpec
from ellpar.operators import OperatorSpec


OP = OperatorSpec(kind="pucci-minus", lam=1.0, Lam=1.2, delta1=0.5,
                  delta0=0.2, n_dim=3)


class TestCriticalRadius:
    def test_formula(self):
        assert critical_radius(1.0, 1.2, 0.5, 3) == pytest.approx((1 + 2 * 1.2) / 1.0)

    def test_infinite_without_drift(self):
        assert critical_radius(1.0, 2.0, 0.0, 2) == math.inf


class TestRadialBarrier:
    def test_slope_identity_at_front(self):
        bar = solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                   omega_hat=0.3)
        # inside slope magnitude: alpha gamma rho0^(-gamma-1) - 2 beta rho0
        got = bar.alpha * bar.gamma * bar.rho0 ** (-bar.gamma - 1) - 2 * bar.beta * bar.rho0
        assert got == pytest.approx(bar.a_hat, abs=1e-12)

    def test_margin_certificate(self):
        bar = solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                   omega_hat=0.3)
        rep = verify_subsolution_margin(bar, OP, samples=500, seed=1)
        assert rep.passed
        assert rep.worst_margin > 0
        assert rep.flux_gap == pytest.approx(bar.a_hat + bar.b_hat)

    def test_super_sign(self):
        bar = solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                   omega_hat=0.3, sign="super")
        rep = verify_subsolution_margin(bar, OP, samples=500, seed=1)
        assert rep.passed
        val, dt, drho, drho2 = eval_radial_barrier(bar, bar.rho0 - bar.eps / 2, 0.0)
        assert val < 0  # negated positive phase

    def test_infeasible_beyond_critical_radius(self):
        rho_c = critical_radius(OP.lam, OP.Lam, OP.delta1, OP.n_dim)
        with pytest.raises(BarrierInfeasible):
            solve_radial_barrier(OP, rho0=rho_c * 1.001, a_hat=1.0,
                                 b_hat=-0.5, omega_hat=0.1)
        solve_radial_barrier(OP, rho0=rho_c * 0.95, a_hat=1.0, b_hat=-0.5,
                             omega_hat=0.1)  # does not raise

    def test_window_enforced(self):
        bar = solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                   omega_hat=0.3)
        with pytest.raises(OutOfWindowError):
            eval_radial_barrier(bar, bar.rho0 + 2 * bar.eps, 0.0)
        with pytest.raises(OutOfWindowError):
            eval_radial_barrier(bar, bar.rho0, 10 * bar.eps_t)

    def test_zero_on_moving_front(self):
        bar = solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                   omega_hat=0.5)
        for t in (-bar.eps_t / 2, 0.0, bar.eps_t / 2):
            rho_f = bar.front_radius(t)
            if not (bar.rho0 - bar.eps < rho_f < bar.rho0 + bar.eps):
                continue
            val, *_ = eval_radial_barrier(bar, rho_f, t)
            assert val == pytest.approx(0.0, abs=1e-14)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            solve_radial_barrier(OP, rho0=1.0, a_hat=0.4, b_hat=-0.5,
                                 omega_hat=0.1)  # a+b <= 0
        with pytest.raises(ValueError):
            solve_radial_barrier(OP, rho0=1.0, a_hat=1.0, b_hat=-0.5,
                                 omega_hat=-1.0)


class TestHeatKernelBarrier:
    def test_bracket_negative_and_margin(self):
        op = OperatorSpec(kind="trace", lam=1.0, Lam=1.0, delta1=0.3,
                          delta0=0.1, n_dim=1)
        bar = solve_heatkernel_barrier(op, d=0.5, delta=0.1)
        rep = verify_subsolution_margin(bar, op, samples=900)
        assert rep.passed
        assert bar.eps > 0 and bar.eta > 0

    def test_squeeze_ordering(self):
        op = OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=1)
        bar = solve_heatkernel_barrier(op, d=0.4, delta=0.05)
        lhs = bar.eta ** -0.5 * math.exp(-bar.d**2 / (4 * bar.k * bar.eta))
        rhs = ((bar.delta + bar.eta) ** -0.5
               * math.exp(-bar.d**2 / (bar.k * (bar.delta + bar.eta))))
        assert lhs < bar.eps < rhs


class TestLogDivBarrier:
    def test_worked_example_constants(self):
        # Psi = 1, b = positive part, omega = 1, rho0 = 2, M = 1, n = 2:
        # k2 = 0, k1 = 1 + 2/2 = 2, eta = 1/4, smallest doubling k = 8
        bar = solve_logdiv_barrier(PsiSpec(), BSpec(), omega=1.0, rho0=2.0,
                                   M=1.0, n_dim=2)
        assert bar.k2 == pytest.approx(0.0)
        assert bar.k1 == pytest.approx(2.0)
        assert bar.eta == pytest.approx(0.25)
        assert bar.k == pytest.approx(8.0)
        psi_eta = math.log(bar.a * bar.k * bar.eta + 1) / bar.k
        assert 2.0 < psi_eta < 3.0

    def test_margin_positive(self):
        psi = PsiSpec("polynomial", (1.0, 0.5))
        bar = solve_logdiv_barrier(psi, BSpec(), omega=0.5, rho0=1.0, M=1.0,
                                   n_dim=3)
        rep = verify_subsolution_margin(bar, OP, samples=500, seed=2)
        assert rep.passed and rep.worst_margin > 0

    def test_eval_collar(self):
        bar = solve_logdiv_barrier(PsiSpec(), BSpec(), omega=1.0, rho0=2.0,
                                   M=1.0, n_dim=2)
        val, dt, d1, d2 = eval_logdiv_barrier(bar, 2.0 + bar.eta / 2, 0.0)
        assert val > 0 and d1 > 0 and d2 < 0
        with pytest.raises(OutOfWindowError):
            eval_logdiv_barrier(bar, 2.0 + 2 * bar.eta, 0.0)


class TestParabolaBarriers:
    def test_decr_parabola_margin(self):
        op = OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=2)
        bar = make_parabola_barrier(op)
        rep = verify_subsolution_margin(bar, op, samples=500, seed=3)
        assert rep.passed

    def test_eps_eta_smallness_enforced(self):
        op = OperatorSpec(kind="trace", lam=1.0, Lam=1.0, delta1=2.0,
                          delta0=2.0, n_dim=1)
        with pytest.raises(BarrierInfeasible):
            make_eps_eta_barrier(op, M=1.0, eps=0.5, eta=0.01)
        ok = make_eps_eta_barrier(op, M=1.0, eps=0.01, eta=0.001)
        rep = verify_subsolution_margin(ok, op, samples=500, seed=3)
        assert rep.passed


class TestFrontOffsetSets:
    def test_super_mask_grows_with_time(self):
        x = np.linspace(-1, 1, 201)
        u0 = 0.3 - np.abs(x)
        m1 = front_offset_sets(u0, x, 0.0001, "super")
        m2 = front_offset_sets(u0, x, 0.01, "super")
        assert np.all(m1.mask[m1.mask] )
        assert m2.mask.sum() >= m1.mask.sum()
        assert np.all(m2.mask[np.abs(x) < 0.3])

    def test_sub_mask_shrinks(self):
        x = np.linspace(-1, 1, 201)
        u0 = np.abs(x) - 0.3  # negative inside
        m = front_offset_sets(u0, x, 0.01, "sub")
        # stay away from the negative set {|x| < 0.3} by t^(1/4)
        assert not np.any(m.mask[np.abs(x) < 0.3 + m.offset - 0.02])

    def test_interval_interpolation(self):
        x = np.linspace(-1, 1, 11)
        u0 = 0.25 - np.abs(x)
        m = front_offset_sets(u0, x, 0.0, "super")
        (a, b), = m.intervals
        assert a == pytest.approx(-0.25)
        assert b == pytest.approx(0.25)
