"""Space-time geometry of the regularization body and the iteration chain used
for interior lower bounds.

The body Xi_r is the Minkowski sum of a space disk of radius r (at time 0) and
the flattened set {|x|^3 + |t|^2 < r^2}.  Membership reduces to a radial test,
which is what we implement; the brute-force Minkowski search only appears in
the tests as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "XiShape",
    "HarnackChain",
    "xi_contains",
    "xi_slice_radius",
    "xi_lateral_distance",
    "harnack_chain",
    "harnack_lower_bound",
]


@dataclass(frozen=True)
class XiShape:
    """The regularization body Xi_r centered at the origin."""

    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("radius must be positive")


def _space_norm(dx) -> float:
    dx = np.asarray(dx, dtype=float)
    if dx.ndim == 0:
        return abs(float(dx))
    return float(np.linalg.norm(dx))


def xi_contains(shape: XiShape, dx, dt: float, closed: bool = False) -> bool:
    """Test whether the space-time offset (dx, dt) lies in Xi_r.

    Radial reduction: max(|dx| - r, 0)^3 + dt^2 < r^2.  The open body uses
    strict inequality; pass closed=True for membership in the closure.
    """
    r = shape.r
    excess = max(_space_norm(dx) - r, 0.0)
    lhs = excess**3 + dt * dt
    rhs = r * r
    return lhs <= rhs if closed else lhs < rhs


def xi_slice_radius(shape: XiShape, t: float) -> float:
    """Radius of the open ball Xi_r|_t for |t| < r.

    Returns 0.0 for |t| >= r (empty slice, apart from |t| = r where the slice
    is the closed disk boundary case, which we do not distinguish here).
    """
    r = shape.r
    gap = r * r - t * t
    if gap <= 0.0:
        return 0.0
    return r + gap ** (1.0 / 3.0)


def xi_lateral_distance(r: float, s: float, t: float) -> float:
    """Distance from the observation point to the lateral boundary slice at
    time t, in the configuration where the body's top disk passes at height s.

    Equals s + cbrt(r^2 - (t + r)^2) for t in (-r, 0).
    """
    if not r > 0:
        raise ValueError("radius must be positive")
    if not (0 < s <= r):
        raise ValueError("s must lie in (0, r]")
    if not (-r < t < 0):
        raise ValueError("t must lie in (-r, 0)")
    return s + (r * r - (t + r) ** 2) ** (1.0 / 3.0)


@dataclass(frozen=True)
class HarnackChain:
    """The chain of radii a_j and time offsets h_j linking an interior point at
    depth s below the top disk to a bulk region of the body."""

    r: float
    s: float
    a: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    k: int


def harnack_chain(r: float, s: float, max_len: int = 10_000) -> HarnackChain:
    """Iterate a_{j+1} = cbrt(r a_j^2 + (a_j - s)^3) + s with a_0 = min(s, r/16)
    and h_{j+1} = h_j - a_j^2 until a_k >= r/2 + s.

    For s >= r/16 the chain terminates immediately with k = 0.
    """
    if not r > 0:
        raise ValueError("radius must be positive")
    if not (0 < s <= r):
        raise ValueError("s must lie in (0, r]")

    a0 = min(s, r / 16.0)
    if s >= r / 16.0:
        return HarnackChain(r=r, s=s, a=np.array([a0]), h=np.array([0.0]), k=0)

    a = [a0]
    h = [0.0]
    k = 0
    while a[k] < r / 2.0 + s:
        h.append(h[k] - a[k] ** 2)
        a.append((r * a[k] ** 2 + (a[k] - s) ** 3) ** (1.0 / 3.0) + s)
        k += 1
        if k > max_len:
            raise RuntimeError("harnack chain failed to terminate")
    return HarnackChain(r=r, s=s, a=np.asarray(a), h=np.asarray(h), k=k)


def harnack_chain_k_bound(r: float, s: float) -> float:
    """Closed-form upper bound on the chain length for s < r/16."""
    return math.log(math.log(s / r) / math.log(0.5)) / math.log(1.5) + 1.0


def harnack_lower_bound(alpha: float, s: float, r: float, vmin: float) -> float:
    """Interior lower bound f(s) = alpha * (log(s/r)/log(1/2))^(log(alpha)/log(3/2)) * vmin.

    f > 0 on (0, r), f(s) -> 0 and f(s)/s -> infinity as s -> 0+.  At s = r the
    base vanishes and the (negative) exponent makes the value blow up; we return
    +inf and the caller is expected to clamp.
    """
    if not (0 < alpha < 1):
        raise ValueError("alpha must lie in (0, 1)")
    if not r > 0:
        raise ValueError("radius must be positive")
    if not (0 < s <= r):
        raise ValueError("s must lie in (0, r]")
    if not vmin > 0:
        raise ValueError("vmin must be positive")
    base = math.log(s / r) / math.log(0.5)
    expo = math.log(alpha) / math.log(1.5)
    if base == 0.0:
        return math.inf
    return alpha * base**expo * vmin
