"""Finite point sets in an axis-aligned box, with the l-infinity metric.

Generators for the canonical example sets (regular grids, ``{1/k^r}``,
``{q^m}``), JSON/CSV file IO, and elementary metric queries.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InsufficientPointsError, InvalidParameterError, ParseError, TooLargeError
from .serialize import dumps

# cap on s**n for tensor grids
MAX_GRID_POINTS = 2_000_000


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = _frozen(np.atleast_1d(self.lo)), _frozen(np.atleast_1d(self.hi))
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size == 0:
            raise InvalidParameterError("box bounds must be equal-length 1-d sequences")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
            raise InvalidParameterError("box bounds must be finite")
        if not np.all(lo < hi):
            raise InvalidParameterError("box must have positive side length in every coordinate")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, n, lo=-1.0, hi=1.0):
        return cls(np.full(n, lo), np.full(n, hi))

    @property
    def dim(self):
        return self.lo.size

    @property
    def sides(self):
        return self.hi - self.lo

    @property
    def volume(self):
        return float(np.prod(self.sides))

    @property
    def diameter(self):
        """Largest l-infinity distance between two points of the box."""
        return float(np.max(self.sides))

    def corners(self):
        grids = np.meshgrid(*[[a, b] for a, b in zip(self.lo, self.hi)], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def to_unit(self, x):
        """Affine map of the box onto [-1, 1]^n."""
        return (2.0 * np.asarray(x, dtype=float) - (self.lo + self.hi)) / self.sides

    def from_unit(self, t):
        return 0.5 * ((self.hi - self.lo) * np.asarray(t, dtype=float) + self.lo + self.hi)

    def to_dict(self):
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    def __eq__(self, other):
        return (isinstance(other, Box) and np.array_equal(self.lo, other.lo)
                and np.array_equal(self.hi, other.hi))

    __hash__ = object.__hash__


@dataclass(frozen=True, eq=False)
class PointSet:
    """Distinct points inside a box; ``points`` has shape (m, dim)."""

    points: np.ndarray
    box: Box = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise InvalidParameterError("points must form an (m, n) array with n >= 1")
        box = self.box if self.box is not None else Box.cube(pts.shape[1])
        if box.dim != pts.shape[1]:
            raise InvalidParameterError(
                f"box dimension {box.dim} does not match point arity {pts.shape[1]}")
        if not np.all(np.isfinite(pts)):
            raise InvalidParameterError("coordinates must be finite")
        outside = np.any((pts < box.lo) | (pts > box.hi), axis=1)
        if np.any(outside):
            raise InvalidParameterError(f"point {int(np.argmax(outside))} lies outside the box")
        if len(pts) > 1:
            uniq = np.unique(pts, axis=0)
            if len(uniq) != len(pts):
                raise InvalidParameterError("points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "box", box)

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def subset(self, idx):
        return PointSet(self.points[np.asarray(idx, dtype=int)], self.box)

    def coords_1d(self):
        if self.dim != 1:
            raise InvalidParameterError("expected a one-dimensional point set")
        return self.points[:, 0]

    def to_dict(self):
        return {"dim": self.dim, "box": self.box.to_dict(), "points": self.points.tolist()}

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.box == other.box
                and np.array_equal(self.points, other.points))

    __hash__ = object.__hash__


# -- generators ---------------------------------------------------------------

def grid_nodes(s):
    i = np.arange(s, dtype=float)
    x = -1.0 + 2.0 * i / (s - 1)
    x[0], x[-1] = -1.0, 1.0
    return x


def make_grid_1d(s):
    """Regular grid of ``s`` nodes in [-1, 1], endpoints included."""
    if int(s) != s or s < 2:
        raise InvalidParameterError("grid needs s >= 2 nodes")
    return PointSet(grid_nodes(int(s)).reshape(-1, 1), Box.cube(1))


def make_grid_nd(n, s, max_points=MAX_GRID_POINTS):
    if n < 1 or s < 2:
        raise InvalidParameterError("need n >= 1 and s >= 2")
    if s ** n > max_points:
        raise TooLargeError(f"grid with {s}^{n} points exceeds cap {max_points}")
    x = grid_nodes(int(s))
    mesh = np.meshgrid(*([x] * n), indexing="ij")
    return PointSet(np.stack([m.ravel() for m in mesh], axis=1), Box.cube(n))


def make_power_set(r, K):
    """``{1/k^r : k = 1..K}`` in the box [-1, 1]."""
    if not r > 0 or K < 1:
        raise InvalidParameterError("need r > 0 and K >= 1")
    k = np.arange(1, int(K) + 1, dtype=float)
    return PointSet((1.0 / k ** r).reshape(-1, 1), Box.cube(1))


def make_geometric_set(q, K):
    """``{q^m : m = 0..K-1}`` in the box [-1, 1]."""
    if not 0 < q < 1:
        raise InvalidParameterError("q must lie in (0, 1)")
    if K < 1:
        raise InvalidParameterError("K must be >= 1")
    m = np.arange(int(K), dtype=float)
    return PointSet((q ** m).reshape(-1, 1), Box.cube(1))


# -- metric queries -----------------------------------------------------------

def linf_distances(points):
    """Condensed vector of pairwise l-infinity distances (i < j)."""
    p = np.asarray(points, dtype=float)
    m = len(p)
    if m < 2:
        return np.empty(0)
    iu, ju = np.triu_indices(m, k=1)
    return np.max(np.abs(p[iu] - p[ju]), axis=1)


def min_pairwise_distance(Z):
    if len(Z) < 2:
        raise InsufficientPointsError("minimal distance needs at least two points")
    if Z.dim == 1:
        return float(np.min(np.diff(np.sort(Z.points[:, 0]))))
    p = Z.points
    best = math.inf
    # row blocks keep memory at O(m * block)
    for start in range(0, len(p) - 1, 256):
        blk = p[start:start + 256]
        d = np.max(np.abs(blk[:, None, :] - p[None, :, :]), axis=2)
        rows = np.arange(len(blk))
        d[rows, start + rows] = np.inf
        best = min(best, float(d.min()))
    return best


def dense_subset(Z, eps):
    """One representative per cube of a greedy cover by side-``eps/2`` cubes.

    Every point of ``Z`` is within l-infinity distance ``eps/2`` of the result.
    """
    from .covering import greedy_cover

    if not eps > 0:
        raise InvalidParameterError("eps must be positive")
    if len(Z) <= 1:
        return Z
    groups = greedy_cover(Z.points, 0.5 * eps)
    reps = sorted(int(g[0]) for g in groups)
    return Z.subset(reps)


# -- IO -----------------------------------------------------------------------

def pointset_to_json(Z):
    return dumps(Z.to_dict()) + "\n"


def pointset_from_dict(data):
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("dim", "points"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    n = data["dim"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("dim must be a positive integer")
    box = data.get("box")
    try:
        if box is None:
            bx = Box.cube(n)
        else:
            bx = Box(box["lo"], box["hi"])
    except (KeyError, TypeError, InvalidParameterError) as exc:
        raise ParseError(f"bad box: {exc}") from None
    if bx.dim != n:
        raise ParseError(f"box dimension {bx.dim} != dim {n}")
    pts = data["points"]
    if not isinstance(pts, list):
        raise ParseError("points must be a list")
    rows = []
    for i, p in enumerate(pts):
        if not isinstance(p, list) or len(p) != n:
            raise ParseError(f"point arity differs from dim {n}", index=i)
        try:
            row = [float(v) for v in p]
        except (TypeError, ValueError):
            raise ParseError("non-numeric coordinate", index=i) from None
        if any(v < a or v > b for v, a, b in zip(row, bx.lo, bx.hi)):
            raise ParseError("point outside box", index=i)
        rows.append(row)
    _check_duplicates(rows)
    return PointSet(np.array(rows, dtype=float).reshape(-1, n), bx)


def _check_duplicates(rows):
    seen = {}
    for i, r in enumerate(rows):
        key = tuple(r)
        if key in seen:
            raise ParseError(f"duplicate of point {seen[key]}", index=i)
        seen[key] = i


def pointset_from_csv(text):
    rows, box = [], None
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            toks = stripped[1:].split()
            if toks and toks[0] == "box":
                try:
                    vals = [float(t) for t in toks[1:]]
                except ValueError:
                    raise ParseError("bad box directive", index=lineno) from None
                if len(vals) % 2 or not vals:
                    raise ParseError("box directive needs lo.. hi.. values", index=lineno)
                h = len(vals) // 2
                box = (vals[:h], vals[h:])
            continue
        try:
            row = [float(t) for t in next(csv.reader([stripped]))]
        except ValueError:
            raise ParseError("non-numeric CSV field", index=lineno) from None
        if rows and len(row) != len(rows[0][1]):
            raise ParseError("row length differs from first row", index=lineno)
        rows.append((lineno, row))
    if not rows:
        raise ParseError("CSV file contains no points")
    n = len(rows[0][1])
    try:
        bx = Box.cube(n) if box is None else Box(*box)
    except InvalidParameterError as exc:
        raise ParseError(f"bad box: {exc}") from None
    if bx.dim != n:
        raise ParseError(f"box dimension {bx.dim} != row length {n}")
    for lineno, row in rows:
        if any(v < a or v > b for v, a, b in zip(row, bx.lo, bx.hi)):
            raise ParseError("point outside box", index=lineno)
    seen = {}
    for lineno, row in rows:
        if tuple(row) in seen:
            raise ParseError(f"duplicate of line {seen[tuple(row)]}", index=lineno)
        seen[tuple(row)] = lineno
    return PointSet(np.array([r for _, r in rows], dtype=float), bx)


def load_pointset(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return pointset_from_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", index=exc.lineno) from None
    return pointset_from_dict(data)


def save_pointset(Z, path):
    Path(path).write_text(pointset_to_json(Z))
