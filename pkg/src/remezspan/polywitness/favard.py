"""Interpolation-based upper estimate sum_i 1/|A'(x_i)| over (d+1)-subsets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from ..errors import InvalidParameterError, NotApplicableError

EXACT_SUBSET_CAP = 200_000


def favard_subset_value(points):
    """Sum of 1/|prod_{j != i}(x_i - x_j)| over the given distinct reals.

    Integer and Fraction inputs are summed in exact rational arithmetic.
    """
    pts = list(np.asarray(points, dtype=object).ravel())
    if pts and all(isinstance(v, (int, Fraction)) for v in pts):
        if len(set(pts)) != len(pts):
            raise InvalidParameterError("points must be distinct")
        exact = sum(1 / abs(math.prod(Fraction(a) - b for j, b in enumerate(pts) if j != i))
                    for i, a in enumerate(pts))
        return float(exact)
    x = np.asarray(points, dtype=float).ravel()
    if len(np.unique(x)) != len(x):
        raise InvalidParameterError("points must be distinct")
    total = 0.0
    for i in range(len(x)):
        total += 1.0 / abs(np.prod(np.delete(x[i] - x, i)))
    return float(total)


def box_scaled_value(points, lo, hi):
    """Sum over i of prod_{j != i} max_box|x - x_j| / |x_i - x_j|.

    Bounds the Lebesgue function of the nodes on [lo, hi], hence R_d of any
    set containing them; the unscaled sum can fall below it.
    """
    x = np.asarray(points, dtype=float).ravel()
    reach = np.maximum(x - lo, hi - x)
    total = 0.0
    for i in range(len(x)):
        others = np.arange(len(x)) != i
        total += float(np.prod(reach[others] / np.abs(x[i] - x[others])))
    return total


@dataclass(frozen=True)
class FavardResult:
    value: float
    subset: tuple
    mode: str  # "exact" or "heuristic"
    evaluated: int
    box_value: float = float("nan")

    def to_dict(self):
        return {"value": self.value, "box_value": self.box_value, "subset": list(self.subset),
                "mode": self.mode, "evaluated": self.evaluated}


def _farthest_subset(x, k, start):
    chosen = [start]
    dist = np.abs(x - x[start])
    while len(chosen) < k:
        j = int(np.argmax(dist))
        chosen.append(j)
        dist = np.minimum(dist, np.abs(x - x[j]))
    return sorted(chosen)


def _nearest_subset(x, targets):
    chosen = []
    for t in targets:
        order = np.argsort(np.abs(x - t), kind="stable")
        for j in order:
            if j not in chosen:
                chosen.append(int(j))
                break
    return sorted(chosen)


def favard_bound(Z, d, mode="auto", cap=EXACT_SUBSET_CAP):
    """Minimum of the subset value over (d+1)-subsets of a 1D set.

    ``exact`` enumerates all subsets (above ``cap`` the heuristic is used); ``heuristic``
    tries sliding windows, farthest-point subsets and subsets nearest to
    equispaced / Chebyshev targets, and returns the best one found, which is
    an upper estimate of the infimum.
    """
    x = np.sort(Z.coords_1d())
    m, k = len(x), d + 1
    if m <= d:
        raise NotApplicableError(f"need more than d = {d} points")
    total = comb(m, k)
    if mode == "auto":
        mode = "exact" if total <= cap else "heuristic"
    if mode == "exact":
        if total > cap:
            mode = "heuristic"
        else:
            best, arg = np.inf, None
            for sub in itertools.combinations(range(m), k):
                v = favard_subset_value(x[list(sub)])
                if v < best:
                    best, arg = v, sub
            return _result(Z, x[list(arg)], best, "exact", total)
    if mode != "heuristic":
        raise InvalidParameterError(f"unknown mode {mode!r}")
    cands = [tuple(range(i, i + k)) for i in range(m - k + 1)]
    cands += [tuple(_farthest_subset(x, k, s)) for s in {0, m - 1, m // 2}]
    lo, hi = x[0], x[-1]
    cands.append(tuple(_nearest_subset(x, np.linspace(lo, hi, k))))
    cheb = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * np.arange(k) / max(k - 1, 1))
    cands.append(tuple(_nearest_subset(x, cheb)))
    best, arg = np.inf, None
    for sub in dict.fromkeys(cands):
        v = favard_subset_value(x[list(sub)])
        if v < best:
            best, arg = v, sub
    return _result(Z, x[list(arg)], best, "heuristic", len(cands))


def _result(Z, nodes, value, mode, evaluated):
    box = box_scaled_value(nodes, Z.box.lo[0], Z.box.hi[0])
    return FavardResult(value, tuple(float(v) for v in nodes), mode, evaluated, box)
