"""Brute-force reference implementations used only by the tests."""

import itertools
import math

import numpy as np

SLACK = 1e-12


def cover_brute(points, eps):
    """Minimal number of groups whose per-axis extent is at most eps.

    Depth-first assignment of points to groups with a running bound.
    """
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    best = [m]

    def rec(i, lows, highs):
        if len(lows) >= best[0]:
            return
        if i == m:
            best[0] = len(lows)
            return
        p = pts[i]
        for g in range(len(lows)):
            lo = np.minimum(lows[g], p)
            hi = np.maximum(highs[g], p)
            if np.all(hi - lo <= eps + SLACK):
                old = lows[g], highs[g]
                lows[g], highs[g] = lo, hi
                rec(i + 1, lows, highs)
                lows[g], highs[g] = old
        lows.append(p.copy())
        highs.append(p.copy())
        rec(i + 1, lows, highs)
        lows.pop()
        highs.pop()

    rec(0, [], [])
    return best[0]


def omega_1d_brute(xs, d, grid=4000):
    """sup eps (M(eps) - d) from a dense eps grid plus left limits at every gap."""
    x = np.sort(np.asarray(xs, dtype=float))

    def count(e):
        c, i = 0, 0
        while i < len(x):
            a = x[i]
            c += 1
            while i < len(x) and x[i] <= a + e + SLACK:
                i += 1
        return c

    span = x[-1] - x[0]
    cands = list(np.linspace(span / grid, span * 1.01 + 1e-9, grid))
    gaps = np.unique(np.abs(x[:, None] - x[None, :]))
    for g in gaps[gaps > 0]:
        cands += [g * (1 - 1e-13), g]
    best = 0.0
    for e in cands:
        best = max(best, e * (count(e) - d))
    # left limits: just below a gap g the count is the count at g minus a hair
    for g in gaps[gaps > 0]:
        best = max(best, g * (count(g * (1 - 1e-9)) - d))
    return best


def lagrange_max(nodes, xs):
    nodes = np.asarray(nodes, dtype=float)
    best = 0.0
    for x in xs:
        tot = 0.0
        for i, a in enumerate(nodes):
            tot += abs(math.prod((x - b) / (a - b) for j, b in enumerate(nodes) if j != i))
        best = max(best, tot)
    return best


def spanning_trees(p):
    """All labelled spanning trees on p vertices via Pruefer sequences."""
    if p == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(p), repeat=p - 2):
        degree = [1] * p
        for v in seq:
            degree[v] += 1
        edges = []
        seq = list(seq)
        for v in seq:
            leaf = min(i for i in range(p) if degree[i] == 1)
            edges.append(tuple(sorted((leaf, v))))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [i for i in range(p) if degree[i] == 1]
        edges.append((u, w))
        yield tuple(sorted(edges))


def linf(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def dispersion_brute(points, p):
    pts = np.asarray(points, dtype=float)
    best = 0.0
    for sub in itertools.combinations(range(len(pts)), p):
        v = min(linf(pts[i], pts[j]) for i, j in itertools.combinations(sub, 2))
        best = max(best, v)
    return best


def spread_brute(points, beta):
    """max over subsets of (min over all spanning trees of the beta-weight)."""
    pts = np.asarray(points, dtype=float)
    best = 0.0
    for size in range(2, len(pts) + 1):
        trees = list(spanning_trees(size))
        for sub in itertools.combinations(range(len(pts)), size):
            w = min(sum(linf(pts[sub[i]], pts[sub[j]]) ** beta for i, j in t) for t in trees)
            best = max(best, w)
    return best
