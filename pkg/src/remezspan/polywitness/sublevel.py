"""Measure of the sub-level set {x in box : |P(x)| <= rho} in one dimension."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidParameterError
from .basis import eval_poly

BISECT_TOL = 1e-12


def _bisect(g, a, b, ga):
    while b - a > BISECT_TOL:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if (gm > 0) == (ga > 0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


def sublevel_measure_1d(P, rho, samples_per_degree=64):
    """Lebesgue measure of the sub-level set of a 1D polynomial on its box.

    Sign changes of |P| - rho are bracketed on a uniform grid of
    4 * d * 64 points and each crossing is refined by bisection.
    """
    if P.dim != 1:
        raise InvalidParameterError("sub-level measure is implemented in 1D")
    if not rho > 0:
        raise InvalidParameterError("rho must be positive")
    lo, hi = float(P.box.lo[0]), float(P.box.hi[0])
    m = 4 * max(P.degree, 1) * samples_per_degree + 1
    xs = np.linspace(lo, hi, m)

    def g(t):
        return abs(eval_poly(P, [t])) - rho

    gs = np.abs(eval_poly(P, xs.reshape(-1, 1))) - rho
    inside = gs <= 0
    total = 0.0
    start = lo if inside[0] else None
    for i in range(1, m):
        if inside[i] == inside[i - 1]:
            continue
        root = _bisect(g, xs[i - 1], xs[i], gs[i - 1])
        if inside[i]:
            start = root
        else:
            total += root - start
            start = None
    if start is not None:
        total += hi - start
    return float(total)
