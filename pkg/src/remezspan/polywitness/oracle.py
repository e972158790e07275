"""Ground truth for the Remez d-span of a finite set.

``exact_remez_span`` maximizes the inner LP value over a probe grid (plus a
local refinement of the best grid maxima in 1D).  Every probed value is the
exact supremum of |P(x)| over polynomials bounded by 1 on Z, so the result is
a certified lower bound on R_d(Z).  ``lebesgue_oracle`` computes the same
quantity for (d+1)-point sets from Lagrange basis polynomials alone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from ..errors import FalsificationFound, IndefiniteSetError, InvalidParameterError
from .basis import Polynomial, basis_matrix, probe_grid, space_dim
from .simplex import RemezLP, solve_exact

DEFAULT_RESOLUTION = {1: 513, 2: 65}
RANK_TOL = 1e-9
# grid probes this close (relative) to the float maximum are re-solved refined
POLISH_WINDOW = 1e-9
# the final value is recomputed in rational arithmetic up to this space dimension
EXACT_FINAL_MAX_DIM = 21


def default_resolution(n):
    return DEFAULT_RESOLUTION.get(n, 17)


def definiteness_rank(Z, d, tol=RANK_TOL):
    """(numerical rank, space dimension) of the evaluation matrix."""
    N = space_dim(Z.dim, d)
    A = basis_matrix(Z.points, Z.box, d)
    R = scipy.linalg.qr(A, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(R))
    if not diag.size or diag[0] == 0:
        return 0, N
    return int(np.sum(diag > tol * diag[0])), N


def is_d_definite(Z, d, tol=RANK_TOL):
    """True iff no nonzero polynomial of degree <= d vanishes on Z (numerically)."""
    if len(Z) < space_dim(Z.dim, d):
        return False
    rank, N = definiteness_rank(Z, d, tol)
    return rank == N


def make_lp(Z, d):
    """LP bound to the evaluation matrix of Z, with an extended-precision copy."""
    return RemezLP(basis_matrix(Z.points, Z.box, d), RANK_TOL,
                   A_ext=basis_matrix(Z.points, Z.box, d, dtype=np.longdouble))


def _solve_at(lp, box, d, x):
    x = np.atleast_2d(x)
    return lp.solve(basis_matrix(x, box, d)[0],
                    b_ext=basis_matrix(x, box, d, dtype=np.longdouble)[0])


def lp_value_at(Z, d, xstar, lp=None):
    """(max of P(x*) over P with |P| <= 1 on Z, optimal coefficient vector)."""
    sol = _solve_at(lp if lp is not None else make_lp(Z, d), Z.box, d, xstar)
    return sol.value, sol.coeffs


def refine_maxima_1d(f, xs, vals, lo, hi, rel_window=1e-3, max_peaks=8, xatol=1e-13):
    """Polish grid local maxima within ``rel_window`` of the best value.

    Returns (x, value) of the best refined point; never worse than the grid.
    """
    vals = np.asarray(vals)
    best_i = int(np.argmax(vals))
    best_x, best_v = float(xs[best_i]), float(vals[best_i])
    thresh = best_v - rel_window * abs(best_v)
    m = len(xs)
    peaks = [i for i in range(m)
             if vals[i] >= thresh
             and (i == 0 or vals[i] >= vals[i - 1])
             and (i == m - 1 or vals[i] >= vals[i + 1])]
    peaks.sort(key=lambda i: (-vals[i], i))
    for i in peaks[:max_peaks]:
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, m - 1)]
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            continue
        res = minimize_scalar(lambda t: -f(t), bounds=(a, b), method="bounded",
                              options={"xatol": xatol})
        v = -float(res.fun)
        if v > best_v:
            best_x, best_v = float(res.x), v
    return best_x, best_v


@dataclass
class RemezEstimate:
    value: float
    probe: np.ndarray
    witness: Polynomial
    probe_grid: int
    definite: bool = True
    refined: bool = False
    grid_value: Optional[float] = None

    def to_dict(self):
        return {"value": self.value, "probe": np.asarray(self.probe).tolist(),
                "resolution": self.probe_grid, "refined": self.refined,
                "grid_value": self.grid_value, "definite": self.definite,
                "witness": self.witness.to_dict()}


def _lp_values(Z, d, probes, threads=1):
    """LP values at every probe point, warm-started in order."""

    A = basis_matrix(Z.points, Z.box, d)

    def run(rows):
        lp = RemezLP(A, RANK_TOL)
        return np.array([lp.solve(b).value for b in basis_matrix(rows, Z.box, d)])

    if threads <= 1 or len(probes) < 64:
        return run(probes)
    chunks = np.array_split(probes, threads)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(run, chunks))
    return np.concatenate(parts)


def exact_remez_span(Z, d, resolution=None, refine=True, threads=1):
    """Maximum of the inner LP value over the probe grid (certified lower bound)."""
    N = space_dim(Z.dim, d)
    if len(Z) < N or not is_d_definite(Z, d):
        rank, N = definiteness_rank(Z, d)
        raise IndefiniteSetError(
            f"set is not {d}-definite: rank {rank} < {N}", rank=rank, dim=N)
    res = resolution or default_resolution(Z.dim)
    probes = probe_grid(Z.box, res)
    vals = _lp_values(Z, d, probes, threads)
    lp = make_lp(Z, d)
    top = vals.max()
    for k in np.flatnonzero(vals >= top - POLISH_WINDOW * abs(top)):
        vals[k] = _solve_at(lp, Z.box, d, probes[k]).value
    i = int(np.argmax(vals))  # ties: lowest probe index
    grid_value = float(vals[i])
    probe = probes[i].copy()
    value = grid_value
    refined = False
    if refine and Z.dim == 1:

        def f(t):
            return _solve_at(lp, Z.box, d, [[t]]).value

        x, v = refine_maxima_1d(f, probes[:, 0], vals, Z.box.lo[0], Z.box.hi[0])
        if v > value:
            value, probe, refined = v, np.array([x]), True
    sol = _solve_at(lp, Z.box, d, probe)
    value, coeffs = float(sol.value), sol.coeffs
    if N <= EXACT_FINAL_MAX_DIM:
        value, coeffs = _exact_objective(Z, d, probe, sol)
    witness = Polynomial.from_vector(Z.box, d, coeffs)
    return RemezEstimate(value, probe, witness, int(res), True, refined, grid_value)


def _exact_objective(Z, d, probe, sol):
    """Objective and coefficients at the optimal basis, solved over the rationals.

    Points, probe and box are floats, hence exact dyadic rationals, so only the
    final rounding is inexact.
    """
    AB = basis_matrix(Z.points[sol.basis], Z.box, d, dtype=object)
    b = basis_matrix(np.atleast_2d(probe), Z.box, d, dtype=object)[0]
    c = solve_exact(AB, [int(v) for v in sol.signs])
    return float(sum(bi * ci for bi, ci in zip(b, c))), np.array([float(v) for v in c])


def lebesgue_function(nodes, x):
    """Sum over i of |l_i(x)| for the Lagrange basis on ``nodes``."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for i, xi in enumerate(nodes):
        li = np.ones_like(x)
        for j, xj in enumerate(nodes):
            if j != i:
                li = li * (x - xj) / (xi - xj)
        total += np.abs(li)
    return total


def lebesgue_oracle(Z, d, resolution=None, refine=True):
    """Lebesgue constant of the (d+1) nodes of Z over the box."""
    if Z.dim != 1:
        raise InvalidParameterError("Lebesgue oracle is one-dimensional")
    if len(Z) != d + 1:
        raise InvalidParameterError(f"need exactly d+1 = {d + 1} points, got {len(Z)}")
    nodes = Z.points[:, 0]
    res = resolution or default_resolution(1)
    xs = probe_grid(Z.box, res)[:, 0]
    vals = lebesgue_function(nodes, xs)
    best = float(vals.max())
    if refine:
        _, best = refine_maxima_1d(lambda t: float(lebesgue_function(nodes, np.array(t))),
                                   xs, vals, Z.box.lo[0], Z.box.hi[0])
    return best


@dataclass
class FalsifyReport:
    trials: int
    seed: int
    bound: float
    max_ratio: float
    violations: int
    witness: Polynomial
    resolution: int

    def to_dict(self):
        return {"trials": self.trials, "seed": self.seed, "bound": self.bound,
                "max_ratio": self.max_ratio, "violations": self.violations,
                "resolution": self.resolution, "witness": self.witness.to_dict()}


def falsify(Z, d, bound, trials=10_000, seed=0, resolution=None, slack=1e-6,
            raise_on_violation=True, batch=2000):
    """Random-polynomial search for sup_box |P| / max_Z |P| above ``bound``."""
    if not is_d_definite(Z, d):
        raise IndefiniteSetError(f"set is not {d}-definite")
    res = resolution or default_resolution(Z.dim)
    A = basis_matrix(Z.points, Z.box, d)
    Bp = basis_matrix(probe_grid(Z.box, res), Z.box, d)
    rng = np.random.default_rng(seed)
    best_ratio, best_vec, violations = -np.inf, None, 0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        C = rng.standard_normal((A.shape[1], k))
        on_z = np.abs(A @ C).max(axis=0)
        on_box = np.abs(Bp @ C).max(axis=0)
        ratio = on_box / on_z
        violations += int(np.sum(ratio > bound + slack))
        j = int(np.argmax(ratio))
        if ratio[j] > best_ratio:
            best_ratio, best_vec = float(ratio[j]), C[:, j] / on_z[j]
        done += k
    report = FalsifyReport(trials, seed, float(bound), best_ratio, violations,
                           Polynomial.from_vector(Z.box, d, best_vec), int(res))
    if violations and raise_on_violation:
        raise FalsificationFound(report)
    return report
