"""Implicit-Euler time integration of the regularized parabolic problems
b_n(u)_t = F(D^2 u, Du, u) on 1D intervals and radial annuli, the stationary
elliptic solver, and the singular-limit / bracketing studies.

Explicit stepping is hopeless here: the stability bound involves min b_n',
which decays like e^{-n} in the negative phase.  Every step therefore solves
the nonlinear system b_n(u) - b_n(u_prev) - dt F(u) = 0 with a damped Newton
iteration using the frozen-envelope tridiagonal Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.linalg import solve_banded

from .nonlinearity import BnFamily, BSpec, b_derivative, b_eval, bn_derivative, bn_eval
from .operators import OperatorSpec, apply_operator_1d, operator_jacobian_1d

__all__ = [
    "Geometry",
    "ProblemSpec",
    "SolverPolicy",
    "SpaceTimeField",
    "NewtonFailure",
    "solve_elliptic",
    "step_parabolic",
    "run",
    "singular_limit_study",
    "bracket_maximal_minimal",
    "perturb_initial_data",
]


class NewtonFailure(RuntimeError):
    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


@dataclass(frozen=True)
class Geometry:
    """1D computational domain: a Cartesian interval, a radial annulus, or a
    punctured radial ball with a reflecting inner boundary."""

    kind: str = "interval"
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind not in ("interval", "radial-annulus", "radial-ball-punctured"):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if self.kind.startswith("radial") and self.lo <= 0:
            raise ValueError("radial grids exclude rho = 0")

    @property
    def radial(self) -> bool:
        return self.kind.startswith("radial")

    @property
    def reflect_inner(self) -> bool:
        return self.kind == "radial-ball-punctured"


def _const(v):
    return lambda t: v


@dataclass
class ProblemSpec:
    """One instance of the phase-transition problem on a 1D/radial grid."""

    geometry: Geometry
    op: OperatorSpec
    b: BSpec = field(default_factory=BSpec)
    bn: Optional[BnFamily] = None
    g_lo: Union[float, Callable[[float], float]] = -1.0
    g_hi: Union[float, Callable[[float], float]] = -1.0
    u0: Union[np.ndarray, Callable[[np.ndarray], np.ndarray], None] = None
    T: float = 1.0
    grid: int = 201
    dt: float = 2.5e-3

    def nodes(self) -> np.ndarray:
        return np.linspace(self.geometry.lo, self.geometry.hi, self.grid)

    def boundary(self, t: float):
        glo = self.g_lo(t) if callable(self.g_lo) else self.g_lo
        ghi = self.g_hi(t) if callable(self.g_hi) else self.g_hi
        return float(glo), float(ghi)

    def initial_values(self) -> np.ndarray:
        x = self.nodes()
        if self.u0 is None:
            u = np.full_like(x, -1.0)
        elif callable(self.u0):
            u = np.asarray(self.u0(x), dtype=float)
        else:
            u = np.asarray(self.u0, dtype=float).copy()
        if u.shape != x.shape:
            raise ValueError("initial data shape does not match the grid")
        glo, ghi = self.boundary(0.0)
        if not self.geometry.reflect_inner:
            u[0] = glo
        u[-1] = ghi
        return u

    def b_pair(self):
        """(value, derivative) callables of the time nonlinearity in use."""
        if self.bn is not None:
            fam = self.bn
            return (lambda s: bn_eval(fam, s)), (lambda s: bn_derivative(fam, s))
        bspec = self.b
        return (lambda s: b_eval(bspec, s)), (lambda s: b_derivative(bspec, s))


@dataclass
class NewtonPolicy:
    max_iters: int = 40
    abs_tol: float = 1e-10
    rel_tol: float = 0.0
    damping: float = 1.0


@dataclass
class SolverPolicy:
    scheme: str = "implicit-euler"
    newton: NewtonPolicy = field(default_factory=NewtonPolicy)
    max_substep_depth: int = 20
    record_every: int = 1
    max_principle_tol: float = 1e-9
    enforce_max_principle: bool = True

    def __post_init__(self):
        if self.scheme != "implicit-euler":
            raise ValueError("only implicit-euler is supported")


@dataclass
class SpaceTimeField:
    x: np.ndarray
    times: np.ndarray
    values: np.ndarray  # (n_times, n_x)
    fronts: list  # per time level, list of zero-crossing locations
    extinction_time: Optional[float]
    newton_iterations: int = 0
    steps: int = 0

    def to_grid_field(self):
        from .regularize import GridField

        return GridField(self.x, self.times, self.values)


def _free_slice(geom: Geometry):
    return slice(0, -1) if geom.reflect_inner else slice(1, -1)


def _extended(u, x, reflect):
    """Pad with a reflected ghost node at the inner end so interior stencils
    cover node 0 in the no-flux case."""
    if not reflect:
        return u, x, 0
    h = x[1] - x[0]
    ue = np.concatenate([[u[1]], u])
    xe = np.concatenate([[x[0] - h], x])
    return ue, xe, 1


def _operator_residual(spec: ProblemSpec, u, x):
    """F at the free nodes, handling the reflecting inner boundary."""
    reflect = spec.geometry.reflect_inner
    ue, xe, pad = _extended(u, x, reflect)
    F = apply_operator_1d(spec.op, ue, xe, spec.b, radial=spec.geometry.radial)
    return F  # free nodes: indices pad..end align with _free_slice

def _operator_jacobian(spec: ProblemSpec, u, x):
    reflect = spec.geometry.reflect_inner
    ue, xe, pad = _extended(u, x, reflect)
    lower, diag, upper = operator_jacobian_1d(spec.op, ue, xe, spec.b,
                                              radial=spec.geometry.radial)
    if reflect:
        # ghost = u[1]: fold the ghost column into the first superdiagonal
        upper = upper.copy()
        upper[0] += lower[0]
        lower = lower.copy()
        lower[0] = 0.0
    return lower, diag, upper


def _solve_tridiagonal(lower, diag, upper, rhs):
    n = diag.size
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    return solve_banded((1, 1), ab, rhs)


def _newton(residual_fn, jacobian_fn, u_free, policy: NewtonPolicy):
    """Damped semismooth Newton on the free nodes; returns (solution,
    iterations, residual history).

    For the piecewise-linear envelope operators the full step is a policy
    iteration and the residual norm need not decrease monotonically, so a
    failed backtracking line search falls through to accepting the full step
    a bounded number of times instead of aborting.
    """
    u = u_free.copy()
    hist = []
    r = residual_fn(u)
    norm = float(np.max(np.abs(r)))
    hist.append(norm)
    stalls = 0
    for it in range(policy.max_iters):
        if norm <= policy.abs_tol:
            return u, it, hist
        lower, diag, upper = jacobian_fn(u)
        du = _solve_tridiagonal(lower, diag, upper, -r)
        u_full = u + policy.damping * du
        r_full = residual_fn(u_full)
        norm_full = float(np.max(np.abs(r_full)))
        if norm_full < norm or norm_full <= policy.abs_tol:
            u, r, norm = u_full, r_full, norm_full
            hist.append(norm)
            continue
        step = 0.5 * policy.damping
        accepted = False
        for _ in range(25):
            u_try = u + step * du
            r_try = residual_fn(u_try)
            norm_try = float(np.max(np.abs(r_try)))
            if norm_try < norm or norm_try <= policy.abs_tol:
                u, r, norm = u_try, r_try, norm_try
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # non-monotone fallback: take the policy-iteration step anyway
            stalls += 1
            if stalls > 5 or not np.all(np.isfinite(r_full)):
                raise NewtonFailure("line search stalled", hist)
            u, r, norm = u_full, r_full, norm_full
        hist.append(norm)
    if norm <= policy.abs_tol:
        return u, policy.max_iters, hist
    raise NewtonFailure("no convergence within the iteration budget", hist)


def solve_elliptic(spec: ProblemSpec, boundary=None,
                   policy: Optional[SolverPolicy] = None) -> np.ndarray:
    """Stationary solve F(D^2 u, Du, u) = 0 with Dirichlet data, Newton on the
    discrete system to residual 1e-10."""
    policy = policy or SolverPolicy()
    x = spec.nodes()
    if boundary is None:
        glo, ghi = spec.boundary(0.0)
    else:
        glo, ghi = boundary
    free = _free_slice(spec.geometry)
    u = np.empty_like(x)
    u[:] = glo + (ghi - glo) * (x - x[0]) / (x[-1] - x[0])
    if not spec.geometry.reflect_inner:
        u[0] = glo
    u[-1] = ghi

    def residual(u_free):
        full = u.copy()
        full[free] = u_free
        return _operator_residual(spec, full, x)

    def jacobian(u_free):
        full = u.copy()
        full[free] = u_free
        return _operator_jacobian(spec, full, x)

    sol_free, _, _ = _newton(residual, jacobian, u[free].copy(), policy.newton)
    u[free] = sol_free
    return u


def step_parabolic(spec: ProblemSpec, u_prev: np.ndarray, t_next: float,
                   dt: float, policy: Optional[SolverPolicy] = None):
    """One implicit Euler step: solve b(u) - b(u_prev) = dt F(u) nodewise with
    the Dirichlet data at t_next.  Returns (u, newton_iterations)."""
    policy = policy or SolverPolicy()
    if dt <= 0:
        raise ValueError("dt must be positive")
    x = spec.nodes()
    bval, bder = spec.b_pair()
    glo, ghi = spec.boundary(t_next)
    free = _free_slice(spec.geometry)
    base = u_prev.copy()
    if not spec.geometry.reflect_inner:
        base[0] = glo
    base[-1] = ghi
    b_prev = np.asarray(bval(u_prev))[free]

    def residual(u_free):
        full = base.copy()
        full[free] = u_free
        F = _operator_residual(spec, full, x)
        return np.asarray(bval(u_free)) - b_prev - dt * F

    def jacobian(u_free):
        full = base.copy()
        full[free] = u_free
        lower, diag, upper = _operator_jacobian(spec, full, x)
        bd = np.asarray(bder(u_free))
        return -dt * lower, bd - dt * diag, -dt * upper

    sol_free, iters, _ = _newton(residual, jacobian, base[free].copy(), policy.newton)
    u = base.copy()
    u[free] = sol_free
    return u, iters


def _front_locations(x, u):
    locs = []
    for i in range(len(u) - 1):
        a, b = u[i], u[i + 1]
        if a == 0.0:
            locs.append(float(x[i]))
        elif a * b < 0:
            locs.append(float(x[i] + (x[i + 1] - x[i]) * (0 - a) / (b - a)))
    if u[-1] == 0.0:
        locs.append(float(x[-1]))
    return locs


def _max_principle_ok(spec: ProblemSpec, u_prev, u, t_next, tol):
    glo, ghi = spec.boundary(t_next)
    gvals = [ghi] if spec.geometry.reflect_inner else [glo, ghi]
    lo = min(float(np.min(u_prev)), min(gvals))
    hi = max(float(np.max(u_prev)), max(gvals), 0.0)
    return bool(np.all(u >= lo - tol) and np.all(u <= hi + tol))


def _advance(spec, u, t, dt, policy, depth=0):
    """Advance one macro step of size dt, recursively substepping on Newton
    failure or a max-principle violation."""
    try:
        u_new, iters = step_parabolic(spec, u, t + dt, dt, policy)
        if (not policy.enforce_max_principle
                or _max_principle_ok(spec, u, u_new, t + dt, policy.max_principle_tol)):
            return u_new, iters, 1
    except NewtonFailure:
        pass
    if depth >= policy.max_substep_depth:
        raise NewtonFailure(f"time step underflow at t = {t}")
    u_half, it1, s1 = _advance(spec, u, t, dt / 2, policy, depth + 1)
    u_new, it2, s2 = _advance(spec, u_half, t + dt / 2, dt / 2, policy, depth + 1)
    return u_new, it1 + it2, s1 + s2


def run(spec: ProblemSpec, policy: Optional[SolverPolicy] = None) -> SpaceTimeField:
    """Integrate to the horizon on the fixed macro time grid t_k = k dt,
    recording fields, free-boundary locations and the extinction time."""
    policy = policy or SolverPolicy()
    x = spec.nodes()
    u = spec.initial_values()
    n_steps = int(round(spec.T / spec.dt))
    if abs(n_steps * spec.dt - spec.T) > 1e-9 * max(spec.T, 1.0):
        n_steps = int(math.ceil(spec.T / spec.dt))
    times = [0.0]
    values = [u.copy()]
    total_iters = 0
    total_steps = 0
    t = 0.0
    for k in range(n_steps):
        u, iters, steps = _advance(spec, u, t, spec.dt, policy)
        t = (k + 1) * spec.dt
        total_iters += iters
        total_steps += steps
        if (k + 1) % policy.record_every == 0 or k == n_steps - 1:
            times.append(t)
            values.append(u.copy())
    values = np.asarray(values)
    times = np.asarray(times)
    fronts = [_front_locations(x, v) for v in values]
    extinction = None
    for tk, v in zip(times, values):
        if float(np.max(v)) < 0.0:
            extinction = float(tk)
            break
    return SpaceTimeField(x=x, times=times, values=values, fronts=fronts,
                          extinction_time=extinction,
                          newton_iterations=total_iters, steps=total_steps)


# ---------------------------------------------------------------------------
# studies
# ---------------------------------------------------------------------------

@dataclass
class SingularLimitReport:
    n_list: list
    probe_times: list
    pairwise_sup: list  # sup distance between successive n at probe times
    extinction_times: list
    extinction_gaps: list


def singular_limit_study(spec: ProblemSpec, n_list: Sequence[int],
                         policy: Optional[SolverPolicy] = None,
                         probe_times: Optional[Sequence[float]] = None) -> SingularLimitReport:
    """Run the problem for each smoothing index on a fixed grid and report
    successive sup-norm distances at probe times plus extinction diagnostics."""
    n_list = list(n_list)
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("need at least 3 strictly increasing smoothing indices")
    policy = policy or SolverPolicy()
    if probe_times is None:
        probe_times = [0.25 * spec.T, 0.5 * spec.T, 0.75 * spec.T]
    runs = []
    for n in n_list:
        sp = replace(spec, bn=BnFamily(n))
        runs.append(run(sp, policy))
    probe_idx = [int(np.argmin(np.abs(runs[0].times - pt))) for pt in probe_times]
    pairwise = []
    for a, b in zip(runs, runs[1:]):
        d = [float(np.max(np.abs(a.values[j] - b.values[j]))) for j in probe_idx]
        pairwise.append(max(d))
    ext = [r.extinction_time for r in runs]
    gaps = [abs(b - a) if a is not None and b is not None else None
            for a, b in zip(ext, ext[1:])]
    return SingularLimitReport(n_list=n_list, probe_times=list(probe_times),
                               pairwise_sup=pairwise, extinction_times=ext,
                               extinction_gaps=gaps)


def perturb_initial_data(u0: np.ndarray, x: np.ndarray, eps: float,
                         direction: str, lift_factor: float = 0.1) -> np.ndarray:
    """Outward front shift by eps via a running window extremum, plus a value
    lift, clamped back to the boundary data at the endpoints.

    direction "up" builds data strictly above u0 in the interior; "down"
    strictly below.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    h = x[1] - x[0]
    w = int(round(eps / h))
    lift = lift_factor * eps
    n = len(u0)
    out = np.empty_like(u0)
    for i in range(n):
        a = max(i - w, 0)
        b = min(i + w + 1, n)
        if direction == "up":
            out[i] = np.max(u0[a:b]) + lift
        else:
            out[i] = np.min(u0[a:b]) - lift
    out[0] = u0[0]
    out[-1] = u0[-1]
    if direction == "up" and (out[1] > 0 or out[-2] > 0):
        raise ValueError("front shift exits the domain")
    return out


@dataclass
class BracketReport:
    eps_list: list
    probe_times: list
    gaps: list  # per eps, max over probe times of sup |u^{+eps} - u^{-eps}|
    ordered: bool
    extinction_upper: list
    extinction_lower: list


def bracket_maximal_minimal(spec: ProblemSpec, eps_list: Sequence[float],
                            policy: Optional[SolverPolicy] = None,
                            probe_times: Optional[Sequence[float]] = None) -> BracketReport:
    """Sandwich the solution between runs from raised/outward-shifted and
    lowered/inward-shifted initial data and report the shrinking gap."""
    eps_list = list(eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])) or any(e <= 0 for e in eps_list):
        raise ValueError("eps_list must be positive and strictly decreasing")
    policy = policy or SolverPolicy()
    if probe_times is None:
        probe_times = [0.25 * spec.T, 0.5 * spec.T, 0.75 * spec.T]
    x = spec.nodes()
    u0 = spec.initial_values()
    runs_up, runs_dn = [], []
    for eps in eps_list:
        up = replace(spec, u0=perturb_initial_data(u0, x, eps, "up"))
        dn = replace(spec, u0=perturb_initial_data(u0, x, eps, "down"))
        runs_up.append(run(up, policy))
        runs_dn.append(run(dn, policy))
    probe_idx = [int(np.argmin(np.abs(runs_up[0].times - pt))) for pt in probe_times]
    gaps = []
    ordered = True
    for ru, rd in zip(runs_up, runs_dn):
        d = [float(np.max(ru.values[j] - rd.values[j])) for j in probe_idx]
        gaps.append(max(d))
        if np.any(ru.values - rd.values < -policy.max_principle_tol):
            ordered = False
    # nesting across eps levels
    for i in range(len(eps_list) - 1):
        if np.any(runs_up[i + 1].values - runs_up[i].values > policy.max_principle_tol * 10):
            ordered = False
        if np.any(runs_dn[i].values - runs_dn[i + 1].values > policy.max_principle_tol * 10):
            ordered = False
    return BracketReport(eps_list=eps_list, probe_times=list(probe_times),
                         gaps=gaps, ordered=ordered,
                         extinction_upper=[r.extinction_time for r in runs_up],
                         extinction_lower=[r.extinction_time for r in runs_dn])
