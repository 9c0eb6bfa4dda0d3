import numpy as np
import pytest

from ellpar.nonlinearity import BSpec, PsiSpec
from ellpar.operators import (
    OperatorSpec,
    RadialProfile,
    apply_operator_1d,
    operator_full_eval,
    operator_jacobian_1d,
    pucci_minus,
    pucci_plus,
    radial_second_order,
    structural_envelope_check,
)


def brute_force_pucci(M, lam, Lam, n_samples=4000, seed=0):
    """sup / inf of tr(A M) over sampled A in [lam I, Lam I]."""
    rng = np.random.default_rng(seed)
    n = M.shape[0]
    sup = -np.inf
    inf = np.inf
    for _ in range(n_samples):
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        # bias eigenvalues toward the extreme points where the optimum sits
        mu = np.where(rng.random(n) < 0.45, lam,
                      np.where(rng.random(n) < 0.8, Lam, rng.uniform(lam, Lam, n)))
        A = (Q * mu) @ Q.T
        v = float(np.trace(A @ M))
        sup = max(sup, v)
        inf = min(inf, v)
    return sup, inf


class TestPucci:
    def test_against_brute_force(self):
        rng = np.random.default_rng(2)
        lam, Lam = 1.0, 2.0
        for _ in range(20):
            M = rng.standard_normal((2, 2))
            M = 0.5 * (M + M.T)
            eigs = np.linalg.eigvalsh(M)
            plus = pucci_plus(eigs, lam, Lam)
            minus = pucci_minus(eigs, lam, Lam)
            sup, inf = brute_force_pucci(M, lam, Lam)
            assert sup <= plus + 1e-10
            assert inf >= minus - 1e-10
            assert plus - sup < 5e-3
            assert inf - minus < 5e-3

    def test_duality(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            eigs = rng.standard_normal(3)
            assert pucci_minus(eigs, 1.0, 2.5) == -pucci_plus(-eigs, 1.0, 2.5)

    def test_degenerate_reduces_to_trace(self):
        eigs = np.array([1.7, -0.3, 0.1])
        assert pucci_plus(eigs, 2.0, 2.0) == pytest.approx(2.0 * eigs.sum())

    def test_monotone_in_matrix_argument(self):
        # adding a PSD perturbation never decreases either operator
        rng = np.random.default_rng(6)
        for _ in range(50):
            M = rng.standard_normal((3, 3))
            M = 0.5 * (M + M.T)
            P = rng.standard_normal((3, 3))
            P = P @ P.T
            e0 = np.linalg.eigvalsh(M)
            e1 = np.linalg.eigvalsh(M + P)
            assert pucci_plus(e1, 1.0, 2.0) >= pucci_plus(e0, 1.0, 2.0) - 1e-10
            assert pucci_minus(e1, 1.0, 2.0) >= pucci_minus(e0, 1.0, 2.0) - 1e-10

    def test_order_validation(self):
        with pytest.raises(ValueError):
            pucci_plus([1.0], 2.0, 1.0)


class TestOperatorFullEval:
    def test_trace(self):
        op = OperatorSpec(kind="trace", lam=1.5, Lam=1.5, n_dim=2)
        M = np.array([[2.0, 1.0], [1.0, -1.0]])
        assert operator_full_eval(op, M, np.zeros(2), 0.0) == pytest.approx(1.5)

    def test_bellman_isaacs_min_max(self):
        op = OperatorSpec(kind="bellman-isaacs", lam=1.0, Lam=2.0, n_dim=2,
                          bi_entries=(
                              ((((1.0, 0.0), (0.0, 1.0)), (0.0, 0.0), 0.0),
                               (((2.0, 0.0), (0.0, 2.0)), (0.0, 0.0), 0.0)),
                          ))
        M = np.diag([1.0, 1.0])
        # single group, max over {tr M, 2 tr M} = 4
        assert operator_full_eval(op, M, np.zeros(2), 0.0) == pytest.approx(4.0)

    def test_properness_validation(self):
        with pytest.raises(ValueError):
            OperatorSpec(kind="bellman-isaacs", n_dim=2, bi_entries=(
                ((((1.0, 0.0), (0.0, 1.0)), (0.0, 0.0), 0.5),),
            ))

    def test_divergence_expanded_form(self):
        psi = PsiSpec("polynomial", (1.0, 1.0))  # Psi(y) = 1 + y
        op = OperatorSpec(kind="divergence", psi=psi, n_dim=2)
        bspec = BSpec()
        M = np.diag([0.5, -0.2])
        p = np.array([0.3, 0.4])
        z = 2.0  # positive phase: b(z) = 2, b'(z) = 1
        want = (1 + 2.0) * 0.3 + 1.0 * 1.0 * 0.25
        assert operator_full_eval(op, M, p, z, bspec) == pytest.approx(want)


class TestRadialReduction:
    def test_matches_full_eval_on_radial_hessian(self):
        op = OperatorSpec(kind="pucci-plus", lam=1.0, Lam=2.0, n_dim=3)
        rho = np.array([1.3])
        prof = RadialProfile(rho=rho, psi=np.array([0.7]),
                             psi_prime=np.array([-0.4]),
                             psi_double_prime=np.array([0.9]), n_dim=3)
        got = radial_second_order(prof, 0, op)
        # full Hessian of a radial function at x = rho * e1
        du, ddu = -0.4, 0.9
        M = np.diag([ddu, du / 1.3, du / 1.3])
        want = operator_full_eval(op, M, np.array([du, 0, 0]), 0.7)
        assert got == pytest.approx(want)

    def test_rho_zero_rejected(self):
        with pytest.raises(ValueError):
            RadialProfile(rho=np.array([0.0]), psi=np.array([1.0]),
                          psi_prime=np.array([0.0]),
                          psi_double_prime=np.array([0.0]), n_dim=2)


class TestFiniteDifferenceAssembly:
    def grid_convergence_order(self, op, func, d2func, radial, n_dim):
        """Observed order of apply_operator_1d against the analytic radial
        operator value, via three nested grids."""
        errs = []
        for m in (65, 129, 257):
            x = np.linspace(0.5, 1.5, m)
            u = func(x)
            F = apply_operator_1d(op, u, x, radial=radial)
            ref = d2func(x[1:-1])
            errs.append(float(np.max(np.abs(F - ref))))
        import math
        return math.log2(errs[0] / errs[1]), math.log2(errs[1] / errs[2])

    def test_trace_radial_second_order_accuracy(self):
        op = OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=3)

        def func(x):
            return np.sin(2 * x)

        def ref(x):
            return -4 * np.sin(2 * x) + 2 / x * 2 * np.cos(2 * x)

        p1, p2 = self.grid_convergence_order(op, func, ref, True, 3)
        assert p1 > 1.9 and p2 > 1.9

    def test_divergence_flux_form_accuracy(self):
        psi = PsiSpec("polynomial", (1.0, 0.5))
        op = OperatorSpec(kind="divergence", psi=psi, n_dim=1)

        def func(x):
            return 1.0 + 0.5 * np.sin(x)  # positive everywhere

        def ref(x):
            u = func(x)
            up = 0.5 * np.cos(x)
            upp = -0.5 * np.sin(x)
            return (1 + 0.5 * u) * upp + 0.5 * up * up

        p1, p2 = self.grid_convergence_order(op, func, ref, False, 1)
        assert p1 > 1.9 and p2 > 1.9

    def test_jacobian_matches_directional_difference_trace(self):
        op = OperatorSpec(kind="trace", lam=1.2, Lam=1.2, n_dim=1)
        x = np.linspace(0, 1, 21)
        rng = np.random.default_rng(8)
        u = rng.standard_normal(21)
        lower, diag, upper = operator_jacobian_1d(op, u, x)
        F0 = apply_operator_1d(op, u, x)
        v = rng.standard_normal(21)
        v[0] = v[-1] = 0.0
        eps = 1e-7
        F1 = apply_operator_1d(op, u + eps * v, x)
        Jv = lower * v[:-2] + diag * v[1:-1] + upper * v[2:]
        assert np.allclose((F1 - F0) / eps, Jv, atol=1e-5)

    def test_jacobian_is_m_matrix_compatible(self):
        # off-diagonal coefficients nonnegative for every kind on a mesh with
        # h small enough relative to the drift: guarantees the discrete
        # comparison principle
        x = np.linspace(0.5, 1.5, 101)
        u = np.cos(3 * x)
        for kind in ("trace", "pucci-plus", "pucci-minus"):
            op = OperatorSpec(kind=kind, lam=1.0, Lam=2.0, n_dim=3)
            lower, diag, upper = operator_jacobian_1d(op, u, x, radial=True)
            assert np.all(lower >= 0)
            assert np.all(upper >= 0)
            assert np.all(diag <= 0)


class TestStructuralEnvelope:
    def test_all_kinds_pass(self):
        for op in (
            OperatorSpec(kind="trace", lam=1.0, Lam=1.0, n_dim=2),
            OperatorSpec(kind="pucci-plus", lam=1.0, Lam=3.0, n_dim=3),
            OperatorSpec(kind="pucci-minus", lam=0.5, Lam=1.5, n_dim=2),
        ):
            rep = structural_envelope_check(op, trials=2000, seed=1)
            assert rep.passed, rep

    def test_flipped_sign_fails(self):
        # a "pucci" with swapped constants is not in the [lam, Lam] class
        bad = OperatorSpec(kind="pucci-plus", lam=1.0, Lam=4.0, n_dim=2)
        rep = structural_envelope_check(bad, trials=500, seed=1)
        assert rep.passed  # sanity: the genuine operator passes
        worse = OperatorSpec(kind="pucci-plus", lam=1.0, Lam=1.2, n_dim=2)
        # evaluate the 4.0 operator against the tighter class: must fail
        from ellpar.operators import _random_symmetric  # noqa

        rng = np.random.default_rng(0)
        violated = False
        for _ in range(200):
            M = _random_symmetric(rng, 2)
            N = _random_symmetric(rng, 2)
            dF = (operator_full_eval(bad, M, np.zeros(2), 0.0)
                  - operator_full_eval(bad, N, np.zeros(2), 0.0))
            eigs = np.linalg.eigvalsh(M - N)
            if dF > pucci_plus(eigs, worse.lam, worse.Lam) + 1e-10:
                violated = True
                break
        assert violated
