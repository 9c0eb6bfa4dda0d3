"""Discrete sup/inf-convolutions of sampled space-time fields over the body
Xi_r, dual-point extraction, crossing-time detection, and discrete essential
envelopes.

Fields are node-major matrices: values[j, i] is the sample at time times[j]
and space node x[i].  Convolution requires uniform grids so the membership
stencil is shared between all output nodes; the sliding-stencil evaluation is
then exactly the brute-force maximum over in-body samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import XiShape, xi_contains

__all__ = [
    "GridField",
    "ConvolvedField",
    "sup_convolve",
    "inf_convolve",
    "crossing_time",
    "CrossingReport",
    "essential_envelopes",
    "interior_ball_check",
    "InteriorBallReport",
]


@dataclass
class GridField:
    """A sampled space-time field on a uniform tensor grid."""

    x: np.ndarray
    times: np.ndarray
    values: np.ndarray  # shape (len(times), len(x))

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.times.size, self.x.size):
            raise ValueError("field shape must be (n_times, n_x)")

    def require_uniform(self):
        hx = np.diff(self.x)
        ht = np.diff(self.times)
        if hx.size and not np.allclose(hx, hx[0], rtol=1e-9, atol=1e-12):
            raise ValueError("space grid must be uniform")
        if ht.size and not np.allclose(ht, ht[0], rtol=1e-9, atol=1e-12):
            raise ValueError("time grid must be uniform")
        return float(hx[0]), float(ht[0])


@dataclass
class ConvolvedField:
    base: GridField
    r: float
    kind: str  # "sup" | "inf"
    x: np.ndarray
    times: np.ndarray
    values: np.ndarray
    dual_index: np.ndarray  # flat index into base.values, same shape as values
    x_slice: slice
    t_slice: slice


def _xi_stencil(r: float, hx: float, ht: float):
    """Index offsets (dj, di) with (di*hx, dj*ht) in the closed Xi_r, sorted in
    ascending flat-index order (dj, then di)."""
    shape = XiShape(r)
    reach_x = int(math.floor((r + r ** (2.0 / 3.0)) / hx)) + 1
    reach_t = int(math.floor(r / ht)) + 1
    offs = []
    for dj in range(-reach_t, reach_t + 1):
        for di in range(-reach_x, reach_x + 1):
            if xi_contains(shape, di * hx, dj * ht, closed=True):
                offs.append((dj, di))
    return np.asarray(offs, dtype=int)


def _convolve(field: GridField, r: float, kind: str) -> ConvolvedField:
    if r <= 0:
        raise ValueError("radius must be positive")
    hx, ht = field.require_uniform()
    if hx > r / 4.0:
        raise ValueError("grid spacing must be at most r/4")
    x, times, vals = field.x, field.times, field.values
    nt, nx = vals.shape

    margin = r + r ** (2.0 / 3.0)
    # shrunk grid: nodes whose translated closed body stays inside the sampled box
    ix = np.where((x - x[0] >= margin - 1e-12) & (x[-1] - x >= margin - 1e-12))[0]
    it = np.where((times - times[0] >= r - 1e-12) & (times[-1] - times >= r - 1e-12))[0]
    if ix.size == 0 or it.size == 0:
        raise ValueError("radius too large: shrunk grid is empty")
    x_slice = slice(ix[0], ix[-1] + 1)
    t_slice = slice(it[0], it[-1] + 1)

    offs = _xi_stencil(r, hx, ht)
    sign = 1.0 if kind == "sup" else -1.0
    work = sign * vals

    out = np.empty((it.size, ix.size))
    dual = np.empty((it.size, ix.size), dtype=np.int64)
    # gather per output time level: rows = output space nodes, cols = stencil
    di = offs[:, 1]
    dj = offs[:, 0]
    base_cols = ix[:, None] + di[None, :]
    for a, j in enumerate(it):
        rows = j + dj
        gathered = work[rows[None, :], base_cols]
        amax = np.argmax(gathered, axis=1)
        out[a] = sign * gathered[np.arange(ix.size), amax]
        dual[a] = rows[amax] * nx + base_cols[np.arange(ix.size), amax]
    return ConvolvedField(base=field, r=r, kind=kind, x=x[x_slice],
                          times=times[t_slice], values=out, dual_index=dual,
                          x_slice=x_slice, t_slice=t_slice)


def sup_convolve(field: GridField, r: float) -> ConvolvedField:
    """Running maximum of the field over the translated closed body Xi_r.

    Dual indices record the smallest flat index attaining the extremum.
    """
    return _convolve(field, r, "sup")


def inf_convolve(field: GridField, r: float) -> ConvolvedField:
    """Running minimum over the translated closed body; equals
    -sup_convolve(-field) exactly."""
    return _convolve(field, r, "inf")


@dataclass
class CrossingReport:
    t0: Optional[float]
    t0_index: Optional[int]
    contact_nodes: np.ndarray


def crossing_time(Z: ConvolvedField, W: ConvolvedField) -> CrossingReport:
    """First time level at which min(W - Z) <= 0, with the arg-node contact
    set; t0 is None if W stays strictly above Z through the horizon."""
    if Z.kind != "sup" or W.kind != "inf":
        raise ValueError("expected a (sup, inf) pair")
    if Z.values.shape != W.values.shape or not np.array_equal(Z.times, W.times):
        raise ValueError("convolved fields live on different grids")
    gap = W.values - Z.values
    level_min = gap.min(axis=1)
    hit = np.where(level_min <= 0.0)[0]
    if hit.size == 0:
        return CrossingReport(t0=None, t0_index=None,
                              contact_nodes=np.array([], dtype=int))
    j = int(hit[0])
    contact = np.where(gap[j] <= 0.0)[0]
    return CrossingReport(t0=float(Z.times[j]), t0_index=j, contact_nodes=contact)


def essential_envelopes(field: GridField, radii) -> tuple:
    """Discrete shrinking-window envelopes.

    upper(x,t) = min over r in radii of the window max of the field over the
    grid ball B_r(x,t); lower swaps max and min.  Also returns the candidate
    v = max(min(field, upper), lower), which on a grid equals the field at
    every node.
    """
    radii = sorted(set(float(r) for r in radii), reverse=True)
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    hx, ht = field.require_uniform()
    vals = field.values
    nt, nx = vals.shape
    upper = np.full_like(vals, np.inf)
    lower = np.full_like(vals, -np.inf)
    for r in radii:
        rx = int(math.floor(r / hx))
        rt = int(math.floor(r / ht))
        offs = [(dj, di) for dj in range(-rt, rt + 1) for di in range(-rx, rx + 1)
                if (di * hx) ** 2 + (dj * ht) ** 2 <= r * r]
        wmax = np.full_like(vals, -np.inf)
        wmin = np.full_like(vals, np.inf)
        for dj, di in offs:
            js = slice(max(dj, 0), nt + min(dj, 0))
            jd = slice(max(-dj, 0), nt + min(-dj, 0))
            is_ = slice(max(di, 0), nx + min(di, 0))
            id_ = slice(max(-di, 0), nx + min(-di, 0))
            np.maximum(wmax[jd, id_], vals[js, is_], out=wmax[jd, id_])
            np.minimum(wmin[jd, id_], vals[js, is_], out=wmin[jd, id_])
        np.minimum(upper, wmax, out=upper)
        np.maximum(lower, wmin, out=lower)
    v = np.maximum(np.minimum(vals, upper), lower)
    up = GridField(field.x, field.times, upper)
    lo = GridField(field.x, field.times, lower)
    cand = GridField(field.x, field.times, v)
    return up, lo, cand


@dataclass
class InteriorBallReport:
    checked: int
    violations: int
    passed: bool


def interior_ball_check(conv: ConvolvedField, level: str = "Z>=0",
                        max_nodes: int = 200) -> InteriorBallReport:
    """For boundary nodes of the level set, verify the translated body around
    the dual point stays inside the corresponding super/sublevel set.

    level "Z>=0" for sup-convolutions, "W<=0" for inf-convolutions.
    """
    if level not in ("Z>=0", "W<=0"):
        raise ValueError("level must be 'Z>=0' or 'W<=0'")
    hx, ht = conv.base.require_uniform()
    vals = conv.values
    if level == "Z>=0":
        inset = vals >= 0.0
    else:
        inset = vals <= 0.0
    # boundary nodes: in the set with a 4-neighbor outside
    nb = np.zeros_like(inset)
    nb[1:, :] |= ~inset[:-1, :]
    nb[:-1, :] |= ~inset[1:, :]
    nb[:, 1:] |= ~inset[:, :-1]
    nb[:, :-1] |= ~inset[:, 1:]
    boundary = np.argwhere(inset & nb)
    if boundary.shape[0] > max_nodes:
        step = boundary.shape[0] // max_nodes + 1
        boundary = boundary[::step]

    nx_base = conv.base.x.size
    offs = _xi_stencil(conv.r, hx, ht)
    # positions of the shrunk grid inside the base grid
    j0 = conv.t_slice.start
    i0 = conv.x_slice.start
    nt_out, nx_out = vals.shape
    checked = 0
    violations = 0
    for j, i in boundary:
        flat = conv.dual_index[j, i]
        dj_base, di_base = divmod(int(flat), nx_base)
        ref = vals[j, i]
        for doff, soff in offs:
            jj = dj_base + doff - j0
            ii = di_base + soff - i0
            if not (0 <= jj < nt_out and 0 <= ii < nx_out):
                continue
            checked += 1
            if level == "Z>=0":
                if vals[jj, ii] < ref - 1e-12:
                    violations += 1
            else:
                if vals[jj, ii] > ref + 1e-12:
                    violations += 1
    return InteriorBallReport(checked=checked, violations=violations,
                              passed=violations == 0)
