"""Elliptic operators: linear trace, Pucci extremal pair, finite
inf-sup (Bellman-Isaacs) families, and the divergence-form operator, together
with their radial reduction and 1D finite-difference assembly.

The only multi-dimensional content is the radial reduction: a radially
symmetric profile has Hessian eigenvalues psi'/rho (multiplicity n-1) and
psi'', so every operator evaluation reduces to a 1D computation on an annulus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .nonlinearity import (
    BSpec,
    PsiSpec,
    b_derivative,
    b_eval,
    psi_derivative,
    psi_eval,
)

__all__ = [
    "OperatorSpec",
    "RadialProfile",
    "pucci_plus",
    "pucci_minus",
    "operator_full_eval",
    "radial_second_order",
    "apply_operator_1d",
    "structural_envelope_check",
    "StructuralReport",
]

_KINDS = ("trace", "pucci-plus", "pucci-minus", "bellman-isaacs", "divergence")


@dataclass(frozen=True)
class OperatorSpec:
    """Tagged operator description with ellipticity constants.

    bi_entries is a finite inf-sup family: a list of groups, each group a list
    of (A, drift, zeroth) triples; F = min over groups of max over triples of
    tr(A M) + drift . p + zeroth * z.  Zeroth coefficients must be <= 0 so the
    operator is proper.
    """

    kind: str = "trace"
    lam: float = 1.0
    Lam: float = 1.0
    delta1: float = 0.0
    delta0: float = 0.0
    n_dim: int = 1
    bi_entries: tuple = ()
    psi: Optional[PsiSpec] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if not (0 < self.lam <= self.Lam):
            raise ValueError("need 0 < lambda <= Lambda")
        if self.delta1 < 0 or self.delta0 < 0:
            raise ValueError("delta constants must be nonnegative")
        if self.n_dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind == "bellman-isaacs":
            if not self.bi_entries:
                raise ValueError("bellman-isaacs needs at least one entry group")
            for group in self.bi_entries:
                for A, drift, zeroth in group:
                    if zeroth > 0:
                        raise ValueError(
                            "positive zeroth-order coefficient breaks properness"
                        )
        if self.kind == "divergence" and self.psi is None:
            object.__setattr__(self, "psi", PsiSpec("constant", (1.0,)))


def pucci_plus(eigs, lam: float, Lam: float) -> float:
    """Maximal Pucci operator: Lam * sum of positive eigenvalues plus
    lam * sum of negative ones."""
    if lam > Lam:
        raise ValueError("need lambda <= Lambda")
    e = np.asarray(eigs, dtype=float)
    return float(Lam * e[e > 0].sum() + lam * e[e < 0].sum())


def pucci_minus(eigs, lam: float, Lam: float) -> float:
    """Minimal Pucci operator; satisfies pucci_minus(e) = -pucci_plus(-e)."""
    if lam > Lam:
        raise ValueError("need lambda <= Lambda")
    e = np.asarray(eigs, dtype=float)
    return float(lam * e[e > 0].sum() + Lam * e[e < 0].sum())


def _bi_eval(op: OperatorSpec, M: np.ndarray, p: np.ndarray, z: float) -> float:
    group_vals = []
    for group in op.bi_entries:
        vals = [
            float(np.trace(np.asarray(A) @ M) + np.dot(np.asarray(drift), p) + zeroth * z)
            for A, drift, zeroth in group
        ]
        group_vals.append(max(vals))
    return min(group_vals)


def operator_full_eval(op: OperatorSpec, M, p, z: float, bspec: Optional[BSpec] = None) -> float:
    """Evaluate F(M, p, z) on a full symmetric matrix argument."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if op.kind == "trace":
        return float(op.lam * np.trace(M))
    if op.kind in ("pucci-plus", "pucci-minus"):
        eigs = np.linalg.eigvalsh(M)
        f = pucci_plus if op.kind == "pucci-plus" else pucci_minus
        return f(eigs, op.lam, op.Lam)
    if op.kind == "bellman-isaacs":
        return _bi_eval(op, M, p, float(z))
    # divergence, expanded conservative form
    bspec = bspec or BSpec("positive-part")
    y = float(b_eval(bspec, z))
    return float(
        psi_eval(op.psi, y) * np.trace(M)
        + psi_derivative(op.psi, y) * b_derivative(bspec, z) * float(p @ p)
    )


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial profile psi(rho) with analytic first and second
    derivatives on an annular grid (rho > 0)."""

    rho: np.ndarray
    psi: np.ndarray
    psi_prime: np.ndarray
    psi_double_prime: np.ndarray
    n_dim: int

    def __post_init__(self):
        if np.any(np.asarray(self.rho) <= 0):
            raise ValueError("radial grids exclude rho = 0")


def radial_second_order(profile: RadialProfile, i: int, op: OperatorSpec,
                        bspec: Optional[BSpec] = None) -> float:
    """Apply F to the radially symmetric Hessian at node i.

    The eigenvalue list is [psi'/rho] * (n-1) + [psi''].  For the divergence
    kind the expanded conservative form
    Psi(b(u)) (psi'' + (n-1) psi'/rho) + Psi'(b(u)) b'(u) psi'^2 is used.
    """
    rho = float(profile.rho[i])
    du = float(profile.psi_prime[i])
    ddu = float(profile.psi_double_prime[i])
    u = float(profile.psi[i])
    n = profile.n_dim
    if op.kind == "divergence":
        bspec = bspec or BSpec("positive-part")
        y = float(b_eval(bspec, u))
        return float(
            psi_eval(op.psi, y) * (ddu + (n - 1) * du / rho)
            + psi_derivative(op.psi, y) * b_derivative(bspec, u) * du * du
        )
    eigs = [du / rho] * (n - 1) + [ddu]
    if op.kind == "trace":
        return float(op.lam * sum(eigs))
    if op.kind == "pucci-plus":
        return pucci_plus(eigs, op.lam, op.Lam)
    if op.kind == "pucci-minus":
        return pucci_minus(eigs, op.lam, op.Lam)
    # bellman-isaacs: radial Hessian with radial eigenvector along the first
    # coordinate axis by convention, gradient psi' along the same axis
    M_tang = du / rho
    group_vals = []
    for group in op.bi_entries:
        vals = []
        for A, drift, zeroth in group:
            A = np.asarray(A, dtype=float)
            trA = float(np.trace(A))
            vals.append(
                M_tang * (trA - A[0, 0]) + ddu * A[0, 0]
                + float(np.asarray(drift)[0]) * du + zeroth * u
            )
        group_vals.append(max(vals))
    return float(min(group_vals))


# ---------------------------------------------------------------------------
# finite-difference assembly on 1D grids (Cartesian interval or radial annulus)
# ---------------------------------------------------------------------------

def _bi_coefficients_1d(op: OperatorSpec, d2, d1, u, radial, rho):
    """Active-envelope coefficients (a2, a1, a0) per node for the finite
    inf-sup family, evaluated at the current (d2, d1, u)."""
    n = op.n_dim
    best_outer = None
    for group in op.bi_entries:
        best_inner = None
        for A, drift, zeroth in group:
            A = np.asarray(A, dtype=float)
            b1 = float(np.asarray(drift)[0])
            if radial:
                a2 = np.full_like(d2, A[0, 0])
                a1 = (np.trace(A) - A[0, 0]) / rho + b1
            else:
                a2 = np.full_like(d2, A[0, 0])
                a1 = np.full_like(d2, b1)
            a0 = np.full_like(d2, zeroth)
            val = a2 * d2 + a1 * d1 + a0 * u
            if best_inner is None:
                best_inner = (val, a2, a1, a0)
            else:
                v0, c2, c1, c0 = best_inner
                take = val > v0
                best_inner = (
                    np.where(take, val, v0),
                    np.where(take, a2, c2),
                    np.where(take, a1, c1),
                    np.where(take, a0, c0),
                )
        if best_outer is None:
            best_outer = best_inner
        else:
            v0, c2, c1, c0 = best_outer
            val, a2, a1, a0 = best_inner
            take = val < v0
            best_outer = (
                np.where(take, val, v0),
                np.where(take, a2, c2),
                np.where(take, a1, c1),
                np.where(take, a0, c0),
            )
    return best_outer


def _coefficients_1d(op: OperatorSpec, u, x, bspec, radial):
    """Frozen linearization coefficients (a2, a1, a0) at interior nodes for the
    non-divergence kinds, such that F = a2*D2 + a1*D1 + a0*u."""
    h = x[1] - x[0]
    ui = u[1:-1]
    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2
    d1 = (u[2:] - u[:-2]) / (2 * h)
    rho = x[1:-1]
    n = op.n_dim
    if op.kind == "trace":
        a2 = np.full_like(d2, op.lam)
        a1 = op.lam * (n - 1) / rho if radial else np.zeros_like(d2)
        a0 = np.zeros_like(d2)
        return a2, a1, a0
    if op.kind in ("pucci-plus", "pucci-minus"):
        if op.kind == "pucci-plus":
            cpos, cneg = op.Lam, op.lam
        else:
            cpos, cneg = op.lam, op.Lam
        coef2 = np.where(d2 > 0, cpos, np.where(d2 < 0, cneg, op.lam))
        if radial:
            e1 = d1 / rho
            coef1 = np.where(e1 > 0, cpos, np.where(e1 < 0, cneg, op.lam))
            a1 = coef1 * (n - 1) / rho
        else:
            a1 = np.zeros_like(d2)
        return coef2, a1, np.zeros_like(d2)
    if op.kind == "bellman-isaacs":
        _, a2, a1, a0 = _bi_coefficients_1d(op, d2, d1, ui, radial, rho)
        return a2, a1, a0
    raise ValueError("divergence kind is assembled in flux form")


def _divergence_fluxes(op: OperatorSpec, u, x, bspec, radial):
    """Face coefficients c_{i+1/2} and node weights for the conservative form
    F_i = (c_{i+1/2}(u_{i+1}-u_i) - c_{i-1/2}(u_i-u_{i-1})) / (h^2 w_i)."""
    bspec = bspec or BSpec("positive-part")
    n = op.n_dim
    psi_nodes = psi_eval(op.psi, np.maximum(b_eval(bspec, u), 0.0))
    psi_nodes = np.atleast_1d(psi_nodes)
    faces = 0.5 * (psi_nodes[1:] + psi_nodes[:-1])
    if radial:
        rho_face = 0.5 * (x[1:] + x[:-1])
        faces = faces * rho_face ** (n - 1)
        w = x ** (n - 1)
    else:
        w = np.ones_like(x)
    return faces, w


def apply_operator_1d(op: OperatorSpec, u, x, bspec: Optional[BSpec] = None,
                      radial: bool = False) -> np.ndarray:
    """Nodewise F(D^2 u, Du, u) at interior nodes of a uniform 1D grid.

    u includes the Dirichlet boundary values at both ends; the returned array
    has length len(u) - 2.  With radial=True the grid x is interpreted as
    radii on an annulus in op.n_dim dimensions.
    """
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    if u.shape != x.shape:
        raise ValueError("field and grid shapes differ")
    if u.size < 3:
        raise ValueError("need at least 3 nodes")
    h = x[1] - x[0]
    if op.kind == "divergence":
        faces, w = _divergence_fluxes(op, u, x, bspec, radial)
        du = np.diff(u)
        return (faces[1:] * du[1:] - faces[:-1] * du[:-1]) / (h**2 * w[1:-1])
    a2, a1, a0 = _coefficients_1d(op, u, x, bspec, radial)
    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2
    d1 = (u[2:] - u[:-2]) / (2 * h)
    return a2 * d2 + a1 * d1 + a0 * u[1:-1]


def operator_jacobian_1d(op: OperatorSpec, u, x, bspec: Optional[BSpec] = None,
                         radial: bool = False):
    """Tridiagonal (lower, diag, upper) of the frozen-coefficient linearization
    of apply_operator_1d at the interior nodes."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    if op.kind == "divergence":
        faces, w = _divergence_fluxes(op, u, x, bspec, radial)
        wi = w[1:-1]
        lower = faces[:-1] / (h**2 * wi)
        upper = faces[1:] / (h**2 * wi)
        diag = -(faces[1:] + faces[:-1]) / (h**2 * wi)
        return lower, diag, upper
    a2, a1, a0 = _coefficients_1d(op, u, x, bspec, radial)
    lower = a2 / h**2 - a1 / (2 * h)
    upper = a2 / h**2 + a1 / (2 * h)
    diag = -2 * a2 / h**2 + a0
    return lower, diag, upper


# ---------------------------------------------------------------------------
# structural envelope verification
# ---------------------------------------------------------------------------

@dataclass
class StructuralReport:
    kind: str
    trials: int
    passed: bool
    worst_margin: float
    violations: int = 0


def _random_symmetric(rng, n):
    A = rng.standard_normal((n, n))
    return 0.5 * (A + A.T)


def structural_envelope_check(op: OperatorSpec, trials: int = 10_000,
                              seed: int = 0) -> StructuralReport:
    """Sample random argument pairs and verify the two-sided Pucci envelope

        M^-(M-N) - d1|p-q| - d0|z-w| <= F(M,p,z) - F(N,q,w)
                                     <= M^+(M-N) + d1|p-q| + d0|z-w|.

    Violations are reported, not raised.  The worst margin is the most
    negative slack over both inequalities (nonnegative slack = pass).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    n = min(op.n_dim, 3)
    lam, Lam = (op.lam, op.lam) if op.kind == "trace" else (op.lam, op.Lam)
    worst = np.inf
    violations = 0
    for _ in range(trials):
        M = _random_symmetric(rng, n)
        N = _random_symmetric(rng, n)
        p = rng.standard_normal(n)
        q = rng.standard_normal(n)
        z, w = rng.standard_normal(2)
        dF = operator_full_eval(op, M, p, z) - operator_full_eval(op, N, q, w)
        slack_pq = op.delta1 * np.linalg.norm(p - q) + op.delta0 * abs(z - w)
        eigs = np.linalg.eigvalsh(M - N)
        lo = pucci_minus(eigs, lam, Lam) - slack_pq
        hi = pucci_plus(eigs, lam, Lam) + slack_pq
        margin = min(dF - lo, hi - dF)
        if margin < worst:
            worst = margin
        if margin < -1e-10:
            violations += 1
    return StructuralReport(
        kind=op.kind,
        trials=trials,
        passed=violations == 0,
        worst_margin=float(worst),
        violations=violations,
    )
