"""Vitushkin bound polynomial and the metric d-span of a set.

The d-span is ``omega_d(Z) = sup_eps eps^n (M(eps, Z) - M_d(eps))`` where
``M_d(eps) = sum_i C_i(n, d) eps^-i`` bounds the covering number of any
sub-level set of a degree-d polynomial, minus its volume term.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .covering import CoverTable, cover_table, covering_profile_1d
from .errors import InvalidParameterError, NotApplicableError
from .pointset import min_pairwise_distance
from .serialize import csv_rows


@dataclass(frozen=True)
class VitushkinModel:
    n: int
    d: int
    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if self.n < 1 or self.d < 1:
            raise InvalidParameterError("need n >= 1 and d >= 1")
        if len(c) != self.n:
            raise InvalidParameterError(f"expected {self.n} coefficients, got {len(c)}")
        if any(v < 0 or not math.isfinite(v) for v in c):
            raise InvalidParameterError("coefficients must be finite and nonnegative")
        # one cube is always needed, so C_0 < 1 would make the d-span infinite
        if c[0] < 1:
            raise InvalidParameterError("constant coefficient must be at least 1")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def builtin(cls, n, d):
        if n == 1:
            return cls(1, d, (float(d),))
        if n == 2:
            return cls(2, d, ((2 * d - 1) ** 2, 8 * d))
        raise NotApplicableError(
            f"no built-in constants for n = {n}; supply a constants table")

    @classmethod
    def from_table(cls, n, d, table):
        """``table[n] = [C'_0(n), ..., C'_{n-1}(n)]``; C_i = C'_i (2d)^(n-i)."""
        row = table.get(n, table.get(str(n)))
        if row is None:
            return cls.builtin(n, d)
        if len(row) != n:
            raise InvalidParameterError(f"constants table row for n={n} needs {n} entries")
        return cls(n, d, tuple(float(c) * (2 * d) ** (n - i) for i, c in enumerate(row)))

    @property
    def leading(self):
        """C_{n-1}(n, d), the coefficient of eps^-(n-1)."""
        return self.coeffs[-1]

    @property
    def cprime(self):
        """Sum of coefficients: M_d(eps) <= cprime * eps^-(n-1) for eps <= 1."""
        return float(sum(self.coeffs))

    def to_dict(self):
        return {"n": self.n, "d": self.d, "coeffs": list(self.coeffs)}


def load_constants_table(path):
    data = json.loads(Path(path).read_text())
    return {int(k): [float(v) for v in row] for k, row in data.items()}


def model_for(n, d, table=None):
    if table:
        return VitushkinModel.from_table(n, d, table)
    return VitushkinModel.builtin(n, d)


def vitushkin_eval(model, eps):
    if not eps > 0:
        raise InvalidParameterError("eps must be positive")
    u = 1.0 / eps
    acc = 0.0
    for c in reversed(model.coeffs):
        acc = acc * u + c
    return acc


def _vitushkin_vec(model, eps):
    eps = np.asarray(eps, dtype=float)
    with np.errstate(divide="ignore"):
        u = 1.0 / eps
    acc = np.zeros_like(eps)
    for c in reversed(model.coeffs):
        acc = acc * u + c
    return acc


@dataclass(frozen=True)
class SpanResult:
    mode: str  # "exact" or "interval"
    omega_lo: float
    omega_hi: float
    witness_eps: float
    attained: bool
    n: int = 1
    d: int = 1
    extra: dict = field(default_factory=dict)

    @property
    def omega(self):
        return self.omega_lo

    def to_dict(self):
        out = {"mode": self.mode, "n": self.n, "d": self.d, "omega_lo": self.omega_lo,
               "omega_hi": self.omega_hi, "witness_eps": self.witness_eps,
               "attained": self.attained}
        out.update(self.extra)
        return out


def omega_1d(Z, d):
    """Exact d-span of a 1D set from its covering profile.

    On a piece with count k over [a, b) the product eps (k - d) grows with eps,
    so the sup over the piece is its left limit at b (not attained).
    """
    if d < 1:
        raise InvalidParameterError("degree must be >= 1")
    prof = covering_profile_1d(Z)
    best, witness = 0.0, 0.0
    for k, a, b in prof.pieces:
        if k > d and math.isfinite(b):
            v = b * (k - d)
            if v > best:
                best, witness = v, b
    attained = best == 0.0 and len(Z) == d
    return SpanResult("exact", best, best, witness, attained, 1, d,
                      {"profile": [list(p) for p in prof.pieces]})


def _check_model(Z, d, model):
    if model is None:
        model = VitushkinModel.builtin(Z.dim, d)
    if model.n != Z.dim:
        raise InvalidParameterError(f"model dimension {model.n} != set dimension {Z.dim}")
    if model.d != d:
        raise InvalidParameterError(f"model degree {model.d} != d = {d}")
    return model


class _Piece(NamedTuple):
    value: float
    eps: float
    attained: bool
    count: int
    left: float


def _lo_pieces(table, model):
    """Candidate (value, eps, attained, count, left) terms for the lower bound."""
    n, c = model.n, table.cand
    out = []
    if table.complete:
        # counts are constant on [c_i, c_{i+1}); sup is the left limit at c_{i+1}
        b = c[1:]
        k = table.lo_env[:-1]
        v = b ** n * (k - _vitushkin_vec(model, b))
        out += [_Piece(float(v[i]), float(b[i]), False, int(k[i]), float(c[i]))
                for i in range(len(b))]
        return out
    # sampled: M(eps) >= lo_env[i+1] on (c_i, c_{i+1}]
    b = c[1:]
    k = table.lo_env[1:]
    v = b ** n * (k - _vitushkin_vec(model, b))
    out += [_Piece(float(v[i]), float(b[i]), True, int(k[i]), float(c[i]))
            for i in range(len(b))]
    # packing at c_i stays valid until the next pairwise distance
    for i, ci in enumerate(c):
        nd = table.next_distance(ci)
        if math.isfinite(nd):
            val = nd ** n * (table.pack[i] - vitushkin_eval(model, nd))
            out.append(_Piece(float(val), nd, False, int(table.pack[i]), float(ci)))
    return out


def _hi_value(table, model):
    n, c = model.n, table.cand
    b = c[1:]
    k = table.hi_env[:-1]
    v = b ** n * (k - _vitushkin_vec(model, b))
    return max(0.0, float(np.max(v))) if len(v) else 0.0


def omega_nd(Z, d, model=None, table=None):
    """Certified interval for the d-span in any dimension.

    Since M_d is nonincreasing, on a piece [a, b) with constant count k the
    function eps^n (k - M_d(eps)) is bounded by its value at b whenever it is
    positive, so only right endpoints need to be examined.
    """
    model = _check_model(Z, d, model)
    if Z.dim == 1:
        return omega_1d(Z, d)
    if table is None:
        table = cover_table(Z)
    pieces = _lo_pieces(table, model)
    best = max(pieces, key=lambda p: p.value, default=None)
    hi = _hi_value(table, model)
    if best is None or best.value <= 0:
        lo, witness, attained = 0.0, 0.0, False
    else:
        lo, witness, attained = best.value, best.eps, best.attained
    return SpanResult("interval", lo, max(lo, hi), witness, attained, Z.dim, d,
                      {"complete": bool(table.complete), "candidates": int(len(table.cand))})


def omega(Z, d, model=None):
    return omega_1d(Z, d) if Z.dim == 1 else omega_nd(Z, d, model)


def omega_positive(Z, d, model=None):
    """(positive, witness_eps) with m_lo(witness) > M_d(witness) when positive."""
    model = _check_model(Z, d, model)
    if Z.dim == 1:
        res = omega_1d(Z, d)
        if res.omega_lo <= 0:
            return False, None
        prof = covering_profile_1d(Z)
        for k, a, b in prof.pieces:
            if k > d and b == res.witness_eps:
                return True, 0.5 * (a + b)
        return True, 0.5 * res.witness_eps
    table = cover_table(Z)
    pieces = [p for p in _lo_pieces(table, model) if p.value > 0]
    if not pieces:
        return False, None
    best = max(pieces, key=lambda p: p.value)
    if best.attained:
        return True, best.eps
    a, b = best.left, best.eps
    for j in range(1, 200):
        e = b - (b - a) / 2 ** j
        if e > 0 and best.count > vitushkin_eval(model, e):
            return True, e
    return True, b


def omega_min_distance_bound(Z, d, model=None):
    """``max(0, eps0^n (|Z| - M_d(eps0)))`` with eps0 the minimal distance."""
    model = _check_model(Z, d, model)
    e0 = min_pairwise_distance(Z)
    return max(0.0, e0 ** Z.dim * (len(Z) - vitushkin_eval(model, e0)))


def span_curve(Z, d, model=None, points_per_piece=1):
    """Rows (eps, m_lo, m_hi, value_lo, value_hi) of eps^n (M - M_d) at candidates."""
    model = _check_model(Z, d, model)
    table = cover_table(Z) if Z.dim > 1 else CoverTable(Z, max_candidates=10 ** 9)
    rows = []
    for i, c in enumerate(table.cand[1:], start=1):
        md = vitushkin_eval(model, c)
        lo, hi = int(table.lo_env[i - 1]), int(table.hi_env[i - 1])
        rows.append((float(c), lo, hi, c ** model.n * (lo - md), c ** model.n * (hi - md)))
    return rows


def span_curve_csv(Z, d, model=None):
    return csv_rows(["eps", "m_lo", "m_hi", "value_lo", "value_hi"], span_curve(Z, d, model))


# -- analytic lower bounds ---------------------------------------------------------

@dataclass(frozen=True)
class AnalyticBoundInput:
    n: int
    d: int
    s: float = None
    H: float = None  # Hausdorff s-measure
    alpha0: float = None  # s-injectivity radius
    C_s: float = None  # covering coefficient, M(eps) >= C_s eps^-s
    eps0: float = None  # covering injectivity radius
    C: float = None  # (n-1)-dimensional covering coefficient
    model: Optional[VitushkinModel] = None

    @property
    def sigma(self):
        return self.s - (self.n - 1)

    def get_model(self):
        return self.model if self.model is not None else VitushkinModel.builtin(self.n, self.d)


class AnalyticBound(NamedTuple):
    omega_lower: float
    eps_hat: float


def _largest_eps(model, budget, cap):
    """Largest eps with sum_{i<n-1} C_i eps^(n-1-i) <= budget.

    The left side is increasing in eps and vanishes at 0, so the condition
    holds exactly on an interval [0, eps*]; eps* is found by bisection.
    """
    lower = model.coeffs[:-1]

    def lhs(e):
        n1 = model.n - 1
        return sum(c * e ** (n1 - i) for i, c in enumerate(lower))

    if budget < 0:
        return 0.0
    if not any(lower) or lhs(cap) <= budget:
        return cap
    a, b = 0.0, cap
    while b - a > 1e-15 * max(1.0, b):
        mid = 0.5 * (a + b)
        if lhs(mid) <= budget:
            a = mid
        else:
            b = mid
    return a


def epsilon1(n, d, model=None, cap=math.inf):
    """Largest eps with M_d(eps') <= 2 C_{n-1} eps'^-(n-1) for all eps' <= eps."""
    if n < 2:
        raise NotApplicableError("epsilon1 needs n >= 2")
    model = model if model is not None else VitushkinModel.builtin(n, d)
    if model.n != n:
        raise InvalidParameterError("model dimension mismatch")
    if not math.isfinite(cap):
        cap = _finite_cap(model, model.leading)
    return _largest_eps(model, model.leading, cap)


def _finite_cap(model, budget):
    # grow until the increasing left side exceeds the budget
    e = 1.0
    lower = model.coeffs[:-1]
    if not any(lower):
        return math.inf
    n1 = model.n - 1
    while sum(c * e ** (n1 - i) for i, c in enumerate(lower)) <= budget:
        e *= 2.0
    return e


def theorem_31_bound(inp):
    """Lower bound from a positive Hausdorff s-measure, n-1 < s."""
    sigma = inp.sigma
    if inp.s is None or not sigma > 0:
        raise InvalidParameterError("need s > n - 1 (use theorem_33_bound for s = n - 1)")
    if inp.H is None or not inp.H > 0 or inp.alpha0 is None or not inp.alpha0 > 0:
        raise InvalidParameterError("need H > 0 and alpha0 > 0")
    model = inp.get_model()
    n = inp.n
    alpha_hat = inp.alpha0 / math.sqrt(n)
    e1 = epsilon1(n, inp.d, model)
    e2 = (inp.H / (8.0 * model.leading * math.sqrt(n ** inp.s))) ** (1.0 / sigma)
    eh = min(alpha_hat, e1, e2)
    return AnalyticBound(0.25 * eh ** (1.0 - sigma) * inp.H, eh)


def theorem_32_bound(inp, eps2_factor=1.0):
    """Lower bound from covering growth M(eps) >= C_s eps^-s.

    ``eps2_factor`` scales C_{n-1} inside eps'_2: 1 gives the plain scale,
    8 the more conservative one used for the closed-form asymptotic.
    """
    sigma = inp.sigma
    if inp.s is None or not sigma > 0:
        raise InvalidParameterError("need s > n - 1")
    if inp.C_s is None or not inp.C_s > 0 or inp.eps0 is None or not inp.eps0 > 0:
        raise InvalidParameterError("need C_s > 0 and eps0 > 0")
    model = inp.get_model()
    e1 = epsilon1(inp.n, inp.d, model)
    e2 = (inp.C_s / (eps2_factor * model.leading)) ** (1.0 / inp.s)
    eh = min(inp.eps0, e1, e2)
    return AnalyticBound(0.25 * eh ** (1.0 - sigma) * inp.C_s, eh)


def theorem_33_bound(inp):
    """Lower bound when M(eps) >= C eps^-(n-1) with C above C_{n-1}."""
    model = inp.get_model()
    lead = model.leading
    if inp.C is None or inp.eps0 is None or not inp.eps0 > 0:
        raise InvalidParameterError("need C and eps0 > 0")
    if not inp.C > lead:
        raise NotApplicableError(f"C = {inp.C} must exceed C_(n-1) = {lead}")
    Q = lead + 0.5 * (inp.C - lead)
    e1p = _largest_eps(model, Q - lead, _finite_cap(model, Q - lead))
    eh = min(inp.eps0, e1p)
    return AnalyticBound(0.5 * eh * (inp.C - lead), eh)


def hypersurface_bound(n, d, H, alpha0, model=None):
    """Hypersurface-type sets: (n-1)-Hausdorff measure above 2 sqrt(n^(n-1)) C_{n-1}."""
    model = model if model is not None else VitushkinModel.builtin(n, d)
    scale = 2.0 * math.sqrt(n ** (n - 1))
    if not H > scale * model.leading:
        raise NotApplicableError(
            f"H_(n-1) = {H} must exceed {scale * model.leading}")
    inp = AnalyticBoundInput(n, d, C=H / scale, eps0=alpha0 / math.sqrt(n), model=model)
    return theorem_33_bound(inp)


def dense_subset_bound(n, K):
    """Lower bound for the d-span of the extracted dense finite subset."""
    return 0.5 ** n * K
