"""The eleven acceptance criteria, one test each, at their stated tolerances.

Each test prints a single PASS/FAIL line with the measured margin (run pytest
with -s or look at captured output on failure).  Expensive intermediates are
shared through a session-scoped context.
"""

import pytest

from ellpar.harness import ALL_CRITERIA, AcceptanceContext


@pytest.fixture(scope="module")
def ctx():
    return AcceptanceContext()


def _check(index, ctx):
    result = ALL_CRITERIA[index](ctx)
    print(result.line())
    assert result.passed, result.details
    return result


def test_criterion_01_bn_family(ctx):
    # 0 < b_n' < 1 for n in 1..64; sup error decreasing; oracle match 1e-9
    r = _check(1, ctx)
    assert r.runtime < 10


def test_criterion_02_pucci_correctness(ctx):
    # brute-force gap <= 1e-3, duality exact, degenerate trace reduction
    r = _check(2, ctx)
    assert r.details["worst_bruteforce_gap"] <= 1e-3
    assert r.details["worst_duality_error"] == 0.0


def test_criterion_03_structural_envelope(ctx):
    # all four operator kinds, 1e4 trials, worst margin >= -1e-10
    r = _check(3, ctx)
    assert min(r.details.values()) >= -1e-10


def test_criterion_04_barrier_certificates(ctx):
    # margins bounded away from zero, flux gap to 1e-10, critical radius
    r = _check(4, ctx)
    assert r.details["flux_gap_error"] <= 1e-10
    assert r.details["infeasibility_behaviour"]


def test_criterion_05_harnack_chain(ctx):
    # 50 pairs respect the doubly exponential lower bound and kBound
    _check(5, ctx)


def test_criterion_06_discrete_comparison(ctx):
    # 100 ordered pairs, nodewise order preserved, violations <= 1e-9
    r = _check(6, ctx)
    assert r.details["worst_order_gap"] >= -1e-9
    assert r.runtime < 180


def test_criterion_07_jump_extinction(ctx):
    # finite extinction, refinement-stable, post-extinction proximity 0.05
    r = _check(7, ctx)
    assert r.details["refinement_drift"] <= 2 * (2.5e-3 + 2.0 / 400)
    assert r.details["post_extinction_deviation"] <= 0.05


def test_criterion_08_singular_limit(ctx):
    # successive sup distances strictly decreasing; extinction times Cauchy
    r = _check(8, ctx)
    d = r.details["pairwise_sup"]
    assert all(b < a for a, b in zip(d, d[1:]))


def test_criterion_09_bracketing(ctx):
    # nested sandwiches, gaps shrinking within solver tolerance 1e-3
    r = _check(9, ctx)
    assert r.details["ordered"]


def test_criterion_10_regularization(ctx):
    # Z >= u, W <= v exactly; duality; dual attainment; interior balls;
    # no crossing on an ordered pair
    r = _check(10, ctx)
    assert r.details["crossing_t0"] is None
    assert r.details["interior_ball_violations"] == 0


def test_criterion_11_elliptic_hopf(ctx):
    # shooting-oracle match to 1e-4; positive Hopf quotient across grids
    r = _check(11, ctx)
    assert r.details["oracle_error"] <= 1e-4
    assert min(r.details["hopf_quotients"]) >= r.details["hopf_floor"]
