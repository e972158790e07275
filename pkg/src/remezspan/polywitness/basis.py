"""Multivariate polynomials in the tensor Chebyshev basis of a box."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np

from ..errors import InvalidParameterError, ParseError
from ..pointset import Box
from ..serialize import dumps


def multi_indices(n, d):
    """All exponent tuples of total degree <= d, graded then lexicographic."""
    out = [a for a in itertools.product(range(d + 1), repeat=n) if sum(a) <= d]
    out.sort(key=lambda a: (sum(a), tuple(-v for v in a)))
    return out


def space_dim(n, d):
    return comb(n + d, n)


def chebyshev_table(t, d, dtype=float):
    """T_0..T_d at points ``t`` (any shape); result has a trailing axis d+1."""
    t = np.asarray(t, dtype=dtype)
    out = np.empty(t.shape + (d + 1,), dtype=dtype)
    # integer constants keep Fraction entries exact under dtype=object
    out[..., 0] = 1
    if d >= 1:
        out[..., 1] = t
    for k in range(2, d + 1):
        out[..., k] = 2 * t * out[..., k - 1] - out[..., k - 2]
    return out


def basis_matrix(points, box, d, indices=None, dtype=float):
    """Rows: points; columns: tensor Chebyshev basis elements on the box.

    ``dtype=np.longdouble`` gives an extended-precision copy for refinement;
    ``dtype=object`` gives exact Fraction entries.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[1]
    if box.dim != n:
        raise InvalidParameterError("point dimension does not match box")
    idx = indices if indices is not None else multi_indices(n, d)
    if dtype is object:
        frac = np.vectorize(Fraction, otypes=[object])
        pts, lo, hi = frac(pts), frac(box.lo), frac(box.hi)
    else:
        pts, lo, hi = pts.astype(dtype), box.lo.astype(dtype), box.hi.astype(dtype)
    t = (2 * pts - (lo + hi)) / (hi - lo)
    tab = chebyshev_table(t, d, dtype)  # (m, n, d+1)
    A = np.ones((len(pts), len(idx)), dtype=dtype)
    for j, alpha in enumerate(idx):
        for axis, k in enumerate(alpha):
            if k:
                A[:, j] *= tab[:, axis, k]
    return A


def chebyshev_lobatto(r):
    """``r`` Chebyshev extreme points in [-1, 1], ascending, endpoints exact."""
    if r < 2:
        return np.array([0.0]) if r == 1 else np.empty(0)
    k = np.arange(r)
    x = -np.cos(np.pi * k / (r - 1))
    x[0], x[-1] = -1.0, 1.0
    if r % 2:
        x[r // 2] = 0.0
    return x


def probe_grid(box, resolution):
    """Tensor Chebyshev-node grid on the box; always contains every corner."""
    nodes = chebyshev_lobatto(max(2, int(resolution)))
    axes = [box.from_unit(np.tile(nodes[:, None], (1, box.dim)))[:, a] for a in range(box.dim)]
    axes = [np.clip(ax, box.lo[a], box.hi[a]) for a, ax in enumerate(axes)]
    for a, ax in enumerate(axes):
        ax[0], ax[-1] = box.lo[a], box.hi[a]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Total-degree-d polynomial, coefficients over tensor Chebyshev elements."""

    dim: int
    degree: int
    box: Box
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, v in self.coeffs.items():
            k = tuple(int(a) for a in k)
            if len(k) != self.dim or any(a < 0 for a in k):
                raise InvalidParameterError(f"bad multi-index {k}")
            if sum(k) > self.degree:
                raise InvalidParameterError(f"multi-index {k} exceeds degree {self.degree}")
            clean[k] = float(v)
        if self.box.dim != self.dim:
            raise InvalidParameterError("box dimension mismatch")
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_vector(cls, box, d, vec):
        idx = multi_indices(box.dim, d)
        if len(vec) != len(idx):
            raise InvalidParameterError("coefficient vector has wrong length")
        return cls(box.dim, d, box, {a: float(c) for a, c in zip(idx, vec)})

    def vector(self):
        return np.array([self.coeffs.get(a, 0.0) for a in multi_indices(self.dim, self.degree)])

    def __call__(self, x):
        return eval_poly(self, x)

    def to_dict(self):
        return {"dim": self.dim, "degree": self.degree, "basis": "chebyshev-box",
                "box": self.box.to_dict(),
                "coeffs": [{"idx": list(k), "c": v} for k, v in sorted(self.coeffs.items())]}

    @classmethod
    def from_dict(cls, data):
        try:
            if data.get("basis", "chebyshev-box") != "chebyshev-box":
                raise ParseError(f"unsupported basis {data['basis']!r}")
            box = Box(data["box"]["lo"], data["box"]["hi"])
            coeffs = {}
            for i, item in enumerate(data["coeffs"]):
                try:
                    coeffs[tuple(item["idx"])] = float(item["c"])
                except (KeyError, TypeError, ValueError):
                    raise ParseError("bad coefficient entry", index=i) from None
            return cls(int(data["dim"]), int(data["degree"]), box, coeffs)
        except (KeyError, TypeError, InvalidParameterError) as exc:
            raise ParseError(f"bad polynomial file: {exc}") from None


def save_polynomial(P, path):
    Path(path).write_text(dumps(P.to_dict()) + "\n")


def load_polynomial(path):
    return Polynomial.from_dict(json.loads(Path(path).read_text()))


def eval_poly(P, x):
    """Evaluate at one point (returns float) or at rows of an (m, n) array."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim <= 1
    pts = arr.reshape(1, -1) if single else arr
    if pts.shape[1] != P.dim:
        raise InvalidParameterError(f"point has {pts.shape[1]} coordinates, expected {P.dim}")
    if not P.coeffs:
        vals = np.zeros(len(pts))
    else:
        idx = list(P.coeffs)
        A = basis_matrix(pts, P.box, P.degree, idx)
        vals = A @ np.array([P.coeffs[a] for a in idx])
    return float(vals[0]) if single else vals
