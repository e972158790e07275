"""Covering numbers M(eps, Z) by closed l-infinity cubes of side ``eps``.

In one dimension the left-to-right sweep is optimal, so counts and the whole
step function eps -> M(eps, Z) are exact.  In higher dimension we report a
certified interval: a greedy packing from below and a greedy cover from above.
"""

from __future__ import annotations

import itertools
import math
import weakref
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, TooLargeError
from .pointset import linf_distances
from .serialize import csv_rows

# absolute slack for "fits in a cube of side eps"
FIT_SLACK = 1e-12
EXACT_COVER_MAX_POINTS = 12
DEFAULT_MAX_CANDIDATES = 2048


def _check_eps(eps):
    if not eps > 0:
        raise InvalidParameterError("eps must be positive")


# -- 1D -----------------------------------------------------------------------

def _sweep_count(xs, eps):
    """Number of intervals used by the greedy sweep over sorted ``xs``."""
    i, count, m = 0, 0, len(xs)
    while i < m:
        i = bisect_right(xs, xs[i] + eps + FIT_SLACK, lo=i)
        count += 1
    return count


def covering_number_1d(Z, eps):
    _check_eps(eps)
    return _sweep_count(sorted(Z.coords_1d().tolist()), eps)


@dataclass(frozen=True)
class CoveringProfile:
    """Step function: ``M(eps) = k`` on ``[eps_min, eps_max)`` for each piece."""

    pieces: tuple  # of (k, eps_min, eps_max)

    def count(self, eps):
        for k, a, b in self.pieces:
            if a <= eps < b:
                return k
        raise InvalidParameterError("eps must be positive")

    def to_csv(self):
        return csv_rows(["k", "eps_min", "eps_max"], self.pieces)

    def to_dict(self):
        return {"pieces": [list(p) for p in self.pieces]}


def _pairwise_gaps(xs):
    x = np.asarray(xs)
    iu, ju = np.triu_indices(len(x), k=1)
    return np.unique(np.concatenate([[0.0], x[ju] - x[iu]]))


def covering_profile_1d(Z):
    """Exact profile; the breakpoint of count k is the 1D k-center optimum.

    Candidate values are the pairwise gaps; M is monotone over them, so the
    change points are located by bisection on candidate indices.
    """
    xs = sorted(Z.coords_1d().tolist())
    m = len(xs)
    if m == 1:
        return CoveringProfile(((1, 0.0, math.inf),))
    cand = _pairwise_gaps(xs)
    counts = {}

    def count_at(i):
        if i not in counts:
            counts[i] = _sweep_count(xs, cand[i])
        return counts[i]

    starts = [0]  # candidate indices where a new count begins

    def split(lo, hi):
        # count_at(lo) != count_at(hi); find every change point in (lo, hi]
        if hi - lo == 1:
            starts.append(hi)
            return
        mid = (lo + hi) // 2
        if count_at(mid) != count_at(lo):
            split(lo, mid)
        if count_at(mid) != count_at(hi):
            split(mid, hi)

    last = len(cand) - 1
    if count_at(0) != count_at(last):
        split(0, last)
    starts.sort()
    pieces = []
    for j, i in enumerate(starts):
        a = 0.0 if j == 0 else float(cand[i])
        b = float(cand[starts[j + 1]]) if j + 1 < len(starts) else math.inf
        pieces.append((count_at(i), a, b))
    return CoveringProfile(tuple(pieces))


# -- greedy cover / packing in any dimension -----------------------------------

def greedy_cover(points, eps):
    """Greedy cube cover; returns index arrays, one per cube (first = anchor).

    Slabs of width ``eps`` are opened at the smallest uncovered first
    coordinate; each slab is covered recursively along the next axis, and the
    last axis uses the optimal 1D sweep.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    groups = []

    def rec(idx, axis):
        vals = pts[idx, axis]
        order = np.argsort(vals, kind="stable")
        idx, vals = idx[order], vals[order].tolist()
        i, m = 0, len(idx)
        while i < m:
            j = bisect_right(vals, vals[i] + eps + FIT_SLACK, lo=i)
            if axis == n - 1:
                groups.append(idx[i:j])
            else:
                rec(idx[i:j], axis + 1)
            i = j

    rec(np.arange(len(pts)), 0)
    return groups


def greedy_cover_count(points, eps):
    return len(greedy_cover(points, eps))


def greedy_packing(points, eps, dist=None):
    """Greedy subset (lexicographic order) with pairwise distance > ``eps``.

    No cube of side ``eps`` holds two such points, so the size is a lower
    bound for M(eps, Z).  ``dist`` is an optional full distance matrix.
    """
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    order = np.lexsort(pts.T[::-1])
    alive = np.ones(m, dtype=bool)
    chosen = []
    thr = eps + FIT_SLACK
    for i in order:
        if not alive[i]:
            continue
        chosen.append(int(i))
        row = dist[i] if dist is not None else np.max(np.abs(pts - pts[i]), axis=1)
        alive &= row > thr
    return chosen


def packing_number(Z, eps):
    _check_eps(eps)
    if Z.dim == 1:
        return covering_number_1d(Z, eps)
    return len(greedy_packing(Z.points, eps))


# -- brute-force oracle ---------------------------------------------------------

def covering_number_exact(Z, eps):
    """Exact minimal cube cover by exhaustive search (at most 12 points)."""
    _check_eps(eps)
    m = len(Z)
    if m > EXACT_COVER_MAX_POINTS:
        raise TooLargeError(f"exact cover limited to {EXACT_COVER_MAX_POINTS} points")
    pts = Z.points
    thr = eps + FIT_SLACK
    # a minimal cover can use cubes whose lower corner sits on point coordinates
    masks = set()
    for corner in itertools.product(*[np.unique(pts[:, a]) for a in range(Z.dim)]):
        inside = np.all((pts >= corner) & (pts <= np.asarray(corner) + thr), axis=1)
        mask = int(sum(1 << i for i in np.flatnonzero(inside)))
        if mask:
            masks.add(mask)
    masks = list(masks)
    full = (1 << m) - 1
    best = {0: 0}
    frontier = [0]
    depth = 0
    while True:
        depth += 1
        nxt = []
        for covered in frontier:
            low = (~covered) & (covered + 1)  # lowest uncovered bit
            for mask in masks:
                if mask & low:
                    c = covered | mask
                    if c == full:
                        return depth
                    if c not in best:
                        best[c] = depth
                        nxt.append(c)
        frontier = nxt


# -- certified intervals --------------------------------------------------------

@dataclass(frozen=True)
class CoveringInterval:
    m_lo: int
    m_hi: int
    eps: float

    def to_dict(self):
        return {"m_lo": self.m_lo, "m_hi": self.m_hi, "eps": self.eps}


def coordinate_gaps(points):
    """All distinct coordinate differences (every axis), including 0."""
    pts = np.asarray(points, dtype=float)
    out = [np.array([0.0])]
    for a in range(pts.shape[1]):
        v = np.unique(pts[:, a])
        iu, ju = np.triu_indices(len(v), k=1)
        out.append(v[ju] - v[iu])
    return np.unique(np.concatenate(out))


class CoverTable:
    """Greedy cover and packing counts tabulated over candidate scales.

    Both counts only change where eps crosses a coordinate difference, so when
    every such value is tabulated (``complete``) the running envelopes give
    bounds valid for every eps and monotone in eps.  Otherwise a subsample of
    candidates is used and bounds are still valid but evaluated conservatively.
    """

    def __init__(self, Z, max_candidates=DEFAULT_MAX_CANDIDATES):
        self.Z = Z
        pts = Z.points
        cand = coordinate_gaps(pts)
        self.complete = len(cand) <= max_candidates
        if not self.complete:
            keep = np.unique(np.concatenate([
                np.arange(min(64, len(cand))),
                np.linspace(0, len(cand) - 1, max_candidates - 64).round().astype(int),
            ]))
            cand = cand[keep]
        self.cand = cand
        dist_full = None
        if len(pts) <= 3000 and Z.dim > 1:
            dist_full = np.max(np.abs(pts[:, None, :] - pts[None, :, :]), axis=2)
        if Z.dim == 1:
            xs = sorted(pts[:, 0].tolist())
            cover = np.array([_sweep_count(xs, c) for c in cand])
            pack = cover.copy()
        else:
            cover = np.array([greedy_cover_count(pts, c) for c in cand])
            pack = np.array([len(greedy_packing(pts, c, dist_full)) for c in cand])
        self.cover = cover
        self.pack = pack
        self.hi_env = np.minimum.accumulate(cover)
        self.lo_env = np.maximum.accumulate(pack[::-1])[::-1]
        self.dists = np.unique(linf_distances(pts))

    def index(self, eps):
        """Last candidate index with cand <= eps (within slack)."""
        return int(np.searchsorted(self.cand, eps + FIT_SLACK, side="right")) - 1

    def next_distance(self, c):
        """Smallest pairwise distance exceeding ``c``; inf if none."""
        j = int(np.searchsorted(self.dists, c + FIT_SLACK, side="right"))
        return float(self.dists[j]) if j < len(self.dists) else math.inf

    def bounds(self, eps):
        _check_eps(eps)
        i = self.index(eps)
        if self.complete:
            return int(self.lo_env[i]), int(self.hi_env[i])
        pts = self.Z.points
        hi = min(int(self.hi_env[i]), greedy_cover_count(pts, eps))
        lo = len(greedy_packing(pts, eps))
        if i + 1 < len(self.cand):
            lo = max(lo, int(self.lo_env[i + 1]))
        return lo, max(lo, hi)


_tables = weakref.WeakKeyDictionary()


def cover_table(Z, max_candidates=DEFAULT_MAX_CANDIDATES):
    """Cached :class:`CoverTable` for ``Z``."""
    key = (max_candidates,)
    per = _tables.setdefault(Z, {})
    if key not in per:
        per[key] = CoverTable(Z, max_candidates)
    return per[key]


def covering_bounds_nd(Z, eps, table=None):
    _check_eps(eps)
    if Z.dim == 1:
        m = covering_number_1d(Z, eps)
        return CoveringInterval(m, m, float(eps))
    t = table if table is not None else cover_table(Z)
    lo, hi = t.bounds(eps)
    return CoveringInterval(lo, hi, float(eps))
