"""Minimal spanning trees, beta-spread and max-min dispersion of point sets."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import minimum_spanning_tree

from .errors import (DivergentError, InsufficientPointsError, InvalidParameterError,
                     NotApplicableError, TooLargeError)
from .serialize import csv_rows
from .span import VitushkinModel, vitushkin_eval

EXACT_SPREAD_MAX = 12
EXACT_ETA_MAX_POINTS = 25
EXACT_ETA_MAX_P = 10


def distance_matrix(points, metric="linf"):
    p = np.asarray(points, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    if metric == "linf":
        return np.max(np.abs(diff), axis=2)
    if metric == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=2))
    raise InvalidParameterError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple  # of (i, j, dist) with i < j
    metric: str = "linf"

    @property
    def weight(self):
        return float(sum(e[2] for e in self.edges))

    def to_dict(self):
        return {"metric": self.metric, "edges": [list(e) for e in self.edges]}


class _DisjointSets:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def _kruskal(D):
    m = len(D)
    iu, ju = np.triu_indices(m, k=1)
    w = D[iu, ju]
    order = np.lexsort((ju, iu, w))  # by weight, then (i, j)
    ds = _DisjointSets(m)
    edges = []
    for k in order:
        i, j = int(iu[k]), int(ju[k])
        if ds.union(i, j):
            edges.append((i, j, float(w[k])))
            if len(edges) == m - 1:
                break
    return edges


def mst(Z, metric="linf"):
    """Kruskal minimal spanning tree; ties broken by lexicographic edge index."""
    if len(Z) < 2:
        raise InsufficientPointsError("spanning tree needs at least two points")
    return SpanningTree(tuple(_kruskal(distance_matrix(Z.points, metric))), metric)


def beta_weight(tree, beta):
    if not beta > 0:
        raise InvalidParameterError("beta must be positive")
    return float(sum(e[2] ** beta for e in tree.edges))


def _mst_weights(D):
    """Sorted MST edge lengths via Prim on a dense matrix (small sizes)."""
    m = len(D)
    if m < 2:
        return np.empty(0)
    in_tree = np.zeros(m, dtype=bool)
    in_tree[0] = True
    best = D[0].copy()
    out = []
    for _ in range(m - 1):
        cand = np.where(in_tree, np.inf, best)
        j = int(np.argmin(cand))
        out.append(cand[j])
        in_tree[j] = True
        best = np.minimum(best, D[j])
    return np.array(out)


def prefix_mst_weights(D, order, beta):
    """beta-weights of the MSTs of every prefix ``order[:k]``, k = 1..m.

    Adding a vertex can only keep old tree edges or use edges at the new
    vertex, so each step solves an MST on at most 2k - 1 candidate edges.
    """
    out = [0.0]
    ti = np.empty(0, dtype=int)
    tj = np.empty(0, dtype=int)
    for k in range(1, len(order)):
        ci = np.concatenate([ti, np.full(k, k)])
        cj = np.concatenate([tj, np.arange(k)])
        w = D[np.asarray(order)[ci], np.asarray(order)[cj]]
        tree = minimum_spanning_tree(coo_matrix((w, (ci, cj)), shape=(k + 1, k + 1))).tocoo()
        ti, tj = tree.row.astype(int), tree.col.astype(int)
        out.append(float(np.sum(tree.data ** beta)))
    return np.array(out)


# -- dispersion ----------------------------------------------------------------

def farthest_order(D, start=None):
    """Farthest-point ordering; starts from one end of a diameter pair."""
    m = len(D)
    if start is None:
        start = int(np.unravel_index(np.argmax(D), D.shape)[0]) if m > 1 else 0
    order = [start]
    gaps = [math.inf]
    dist = D[start].copy()
    dist[start] = -1.0
    for _ in range(m - 1):
        j = int(np.argmax(dist))
        gaps.append(float(dist[j]))
        order.append(j)
        dist = np.minimum(dist, D[j])
        dist[order] = -1.0
    return order, gaps


def _has_clique(adj, p):
    """Is there a p-set of vertices pairwise adjacent?  Simple branch and bound."""
    m = len(adj)
    nbrs = [int(sum(1 << j for j in np.flatnonzero(adj[i]))) for i in range(m)]

    def grow(size, cand):
        if size == p:
            return True
        if size + bin(cand).count("1") < p:
            return False
        while cand:
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            if grow(size + 1, cand & nbrs[v]):
                return True
            if size + bin(cand).count("1") < p:
                return False
        return False

    return grow(0, (1 << m) - 1)


def _eta_exact(D, p):
    vals = np.unique(D[np.triu_indices(len(D), k=1)])
    lo, hi = 0, len(vals) - 1  # vals[lo] always feasible
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _has_clique(D >= vals[mid], p):
            lo = mid
        else:
            hi = mid - 1
    return float(vals[lo])


def eta(Z, p, mode="auto", metric="linf"):
    """(eta_lo, eta_hi) for the best achievable minimum distance among p points."""
    m = len(Z)
    if not 2 <= p <= m:
        raise InvalidParameterError(f"p must lie in [2, {m}]")
    D = distance_matrix(Z.points, metric)
    small = p <= EXACT_ETA_MAX_P and m <= EXACT_ETA_MAX_POINTS
    if mode == "auto":
        mode = "exact" if small else "greedy"
    if mode == "exact":
        if not small:
            raise TooLargeError("exact dispersion limited to p <= 10 and |Z| <= 25")
        v = _eta_exact(D, p)
        return v, v
    if mode != "greedy":
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if p == m:
        v = float(np.min(D[np.triu_indices(m, k=1)]))
        return v, v
    _, gaps = farthest_order(D)
    g = gaps[p - 1]
    return g, 2.0 * g


def eta_table(Z, p_max=None, mode="auto", metric="linf"):
    m = len(Z)
    p_max = m if p_max is None else min(p_max, m)
    return {p: eta(Z, p, mode, metric) for p in range(2, p_max + 1)}


# -- beta-spread -----------------------------------------------------------------

@dataclass(frozen=True)
class SpreadReport:
    beta: float
    rho_full: float
    v_lo: float
    v_hi: float
    mode: str
    best_subset: tuple = ()
    eta_table: dict = field(default_factory=dict)

    def to_dict(self):
        return {"beta": self.beta, "rho_full": self.rho_full, "v_lo": self.v_lo,
                "v_hi": self.v_hi, "mode": self.mode, "best_subset": list(self.best_subset),
                "eta_table": {str(p): list(v) for p, v in self.eta_table.items()}}

    def eta_csv(self):
        return csv_rows(["p", "eta_lo", "eta_hi"],
                        [(p, lo, hi) for p, (lo, hi) in sorted(self.eta_table.items())])


def beta_spread(Z, beta, mode="auto", metric="linf"):
    """Bounds on V_beta(Z), the largest MST beta-weight over subsets of Z."""
    if not beta > 0:
        raise InvalidParameterError("beta must be positive")
    m = len(Z)
    if m < 2:
        return SpreadReport(beta, 0.0, 0.0, 0.0, "exact")
    D = distance_matrix(Z.points, metric)
    rho_full = float(np.sum(_mst_weights(D) ** beta))
    if mode == "auto":
        mode = "exact" if m <= EXACT_SPREAD_MAX else "heuristic"
    if mode == "exact":
        if m > EXACT_SPREAD_MAX:
            raise TooLargeError(f"exact spread limited to {EXACT_SPREAD_MAX} points")
        best, arg = 0.0, ()
        for size in range(2, m + 1):
            for sub in itertools.combinations(range(m), size):
                idx = list(sub)
                v = float(np.sum(_mst_weights(D[np.ix_(idx, idx)]) ** beta))
                if v > best:
                    best, arg = v, sub
        table = {p: (v, v) for p, v in
                 ((p, _eta_exact(D, p)) for p in range(2, m + 1))} if m <= EXACT_ETA_MAX_POINTS else {}
        return SpreadReport(beta, rho_full, best, best, "exact", arg, table)
    if mode != "heuristic":
        raise InvalidParameterError(f"unknown mode {mode!r}")
    order, gaps = farthest_order(D)
    best, arg = rho_full, tuple(range(m))
    weights = prefix_mst_weights(D, order, beta)
    k = int(np.argmax(weights)) + 1
    if weights[k - 1] > best:
        best, arg = float(weights[k - 1]), tuple(sorted(order[:k]))
    table = {p: (gaps[p - 1], 2.0 * gaps[p - 1]) for p in range(2, m + 1)}
    table[m] = (float(np.min(D[np.triu_indices(m, k=1)])),) * 2
    v_hi = float(sum(hi ** beta for _, hi in table.values()))
    return SpreadReport(beta, rho_full, best, max(best, v_hi), "heuristic", arg, table)


def sandwich_check(Z, beta, p_max=None, metric="linf"):
    """Check sup_p (p-1) eta(p)^beta <= V_beta <= sum_j eta(j)^beta exactly.

    Returns (passed, lower, v_beta, upper).
    """
    m = len(Z)
    if m > EXACT_SPREAD_MAX:
        raise TooLargeError(f"sandwich check needs exact sizes (<= {EXACT_SPREAD_MAX} points)")
    rep = beta_spread(Z, beta, "exact", metric)
    D = distance_matrix(Z.points, metric)
    p_max = m if p_max is None else min(p_max, m)
    etas = {p: _eta_exact(D, p) for p in range(2, m + 1)}
    lower = max(((p - 1) * etas[p] ** beta for p in range(2, p_max + 1)), default=0.0)
    upper = sum(v ** beta for v in etas.values())
    tol = 1e-12 * max(1.0, upper)
    ok = lower <= rep.v_lo + tol and rep.v_lo <= upper + tol
    return ok, lower, rep.v_lo, upper


def zeta(x, tol=1e-12):
    """Riemann zeta for real x > 1: partial sum plus Euler-Maclaurin tail.

    The tail is the integral N^(1-x)/(x-1) with the first two correction
    terms; N is chosen so the remainder bound is below ``tol``.
    """
    if not x > 1:
        raise DivergentError("zeta diverges for x <= 1")
    # remainder after the B2 term is at most x(x+1)(x+2) / 720 * N^-(x+3)
    c = x * (x + 1) * (x + 2) / 720.0
    N = max(10, math.ceil((c / tol) ** (1.0 / (x + 3))))
    N = min(N, 10 ** 7)
    k = np.arange(1, N, dtype=float)
    head = float(np.sum(k ** -x))
    tail = N ** (1 - x) / (x - 1) + 0.5 * N ** -x + x * N ** (-x - 1) / 12.0
    return head + tail


@dataclass(frozen=True)
class PositivityVerdict:
    positive: bool
    v_lo: float
    threshold: float
    beta: float
    cprime: float

    @property
    def verdict(self):
        return "positive-certified" if self.positive else "inconclusive"

    def to_dict(self):
        return {"verdict": self.verdict, "v_lo": self.v_lo, "threshold": self.threshold,
                "beta": self.beta, "cprime": self.cprime}


def theorem_35_check(Z, d, beta, cprime=None, model=None, metric="linf"):
    """Certify a positive d-span when V_beta(Z) exceeds C'^(beta/(n-1)) zeta(beta/(n-1))."""
    n = Z.dim
    if n < 2:
        raise NotApplicableError("the spread criterion needs n >= 2")
    if not n - 1 < beta <= n:
        raise InvalidParameterError(f"beta must lie in ({n - 1}, {n}]")
    if cprime is None:
        model = model if model is not None else VitushkinModel.builtin(n, d)
        cprime = model.cprime
    expo = beta / (n - 1)
    threshold = cprime ** expo * zeta(expo)
    rep = beta_spread(Z, beta, metric=metric)
    return PositivityVerdict(rep.v_lo > threshold, rep.v_lo, threshold, beta, float(cprime))


def corollary_5_bound(Z, d, p, model=None, simplified=False, mode="auto"):
    """``eta^n (p - M_d(eta))`` at the certified lower dispersion eta_lo(p), clamped at 0.

    ``simplified`` replaces M_d(eta) by C'(n, d) eta^(1-n).
    """
    n = Z.dim
    model = model if model is not None else VitushkinModel.builtin(n, d)
    e, _ = eta(Z, p, mode)
    if simplified:
        md = model.cprime * e ** (1 - n)
    else:
        md = vitushkin_eval(model, e)
    return max(0.0, e ** n * (p - md))
