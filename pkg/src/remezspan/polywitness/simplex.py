"""Dense simplex for the inner Remez problem.

Primal:  max  b.c   subject to  -1 <= A c <= 1     (c free, A is m x N)
Dual:    min  |y|_1 subject to  A^T y = b

The dual is run in standard form with y = u - v.  A basis is a set of N rows
of A plus a sign per row; its basic solution is ``y_B = A_B^-T b`` and it is
feasible once each sign is set to ``sign(y_B)``, which is done whenever the
objective changes.  The simplex multipliers are the primal coefficients
``c = A_B^-1 s`` and optimality means ``|A c| <= 1`` on every row.

Pricing picks the most violated row.  After a run of degenerate pivots the
objective is tilted by a tiny random vector, which makes the vertices simple,
and the tilted problem is solved.  A final phase restores the true objective
under Bland's rule (lowest index enters and leaves), which cannot cycle; if
it does not finish within its budget, the tilted optimum is kept.  Its
coefficients are feasible, so b.c is still a lower bound, off by O(1e-9)
relative.  When an extended-precision copy of A is supplied, the optimal
basic solutions are polished by mixed-precision iterative refinement;
``solve_exact`` recomputes a basic solution over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from ..errors import IndefiniteSetError, RemezSpanError

OPT_TOL = 1e-10
RATIO_TOL = 1e-12
REFINE_STEPS = 3
# an objective within this distance of a data row is that row
HIT_TOL = 1e-13
# relative size of the objective tilt used to escape degenerate stalls
PERTURB = 1e-9
# pivots allowed when restoring the true objective after a tilt
RESTORE_PIVOTS = 500


@dataclass
class LPSolution:
    value: float  # primal objective b.c
    dual_value: float  # |y|_1
    coeffs: np.ndarray
    y: np.ndarray  # full dual vector, length m
    basis: np.ndarray
    pivots: int
    signs: np.ndarray = None  # orientation of each basic constraint


@dataclass
class _Run:
    B: np.ndarray
    s: np.ndarray
    lu: tuple
    y_B: np.ndarray
    c: np.ndarray
    pivots: int
    status: str  # "optimal", "stalled" or "limit"


def select_basis(A, rank_tol=1e-9):
    """N linearly independent rows of A, by QR with column pivoting on A^T."""
    m, N = A.shape
    if m < N:
        raise IndefiniteSetError(f"{m} points cannot determine a {N}-dimensional space",
                                 rank=m, dim=N)
    _, R, piv = scipy.linalg.qr(A.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rank_tol * diag[0])) if diag.size and diag[0] > 0 else 0
    if rank < N:
        raise IndefiniteSetError(
            f"evaluation matrix has numerical rank {rank} < {N}", rank=rank, dim=N)
    return np.sort(piv[:N])


class RemezLP:
    """Solver bound to one evaluation matrix; warm-starts across objectives."""

    def __init__(self, A, rank_tol=1e-9, max_pivots=10_000, A_ext=None):
        self.A = np.asarray(A, dtype=float)
        self.A_ext = None if A_ext is None else np.asarray(A_ext, dtype=np.longdouble)
        self.max_pivots = max_pivots
        self.basis = select_basis(self.A, rank_tol)
        self.signs = None

    def _pivot(self, b, B, s, limit, stall=None, bland=False):
        """Simplex iterations from basis (B, s) for objective b."""
        A = self.A
        N = A.shape[1]
        B, s = B.copy(), s.copy()
        pivots = degenerate = 0
        while True:
            lu = scipy.linalg.lu_factor(A[B], check_finite=False)
            y_B = scipy.linalg.lu_solve(lu, b, trans=1, check_finite=False)
            if pivots == 0:
                tol = 1e-12 * max(1.0, float(np.abs(y_B).max()))
                s = np.where(s * y_B < -tol, -s, s)
            c = scipy.linalg.lu_solve(lu, s, check_finite=False)
            r = A @ c
            excess = np.abs(r) - 1.0
            excess[B] = 0.0
            viol = excess > OPT_TOL
            if not viol.any():
                return _Run(B, s, lu, y_B, c, pivots, "optimal")
            if pivots >= limit:
                return _Run(B, s, lu, y_B, c, pivots, "limit")
            if stall is not None and degenerate > stall:
                return _Run(B, s, lu, y_B, c, pivots, "stalled")
            bland = bland or degenerate > N
            q = int(np.argmax(viol)) if bland else int(np.argmax(excess))
            sq = 1.0 if r[q] > 0 else -1.0
            # entering column expressed in the basic columns s_k A_k^T
            dirn = s * scipy.linalg.lu_solve(lu, sq * A[q], trans=1, check_finite=False)
            xB = np.maximum(s * y_B, 0.0)
            pos = dirn > RATIO_TOL
            if not pos.any():
                raise RemezSpanError("dual program unbounded; inconsistent data")
            ratios = np.full(N, np.inf)
            ratios[pos] = xB[pos] / dirn[pos]
            rmin = ratios.min()
            ties = np.flatnonzero(ratios <= rmin + RATIO_TOL * max(1.0, rmin))
            leave = ties[np.argmin(B[ties])]  # lowest row index leaves among ties
            degenerate = degenerate + 1 if rmin <= RATIO_TOL else 0
            B[leave], s[leave] = q, sq
            pivots += 1

    def solve(self, b, basis=None, signs=None, b_ext=None):
        A = self.A
        m, N = A.shape
        b = np.asarray(b, dtype=float)
        if basis is None:
            B, s = self.basis.copy(), self.signs
        else:
            B, s = np.array(basis, dtype=int), signs
        s = np.ones(N) if s is None else np.array(s, dtype=float)
        hit = np.flatnonzero(np.abs(A - b).max(axis=1) <= HIT_TOL)
        if hit.size:
            return self._at_data_row(B, int(hit[0]))
        run = self._pivot(b, B, s, self.max_pivots, stall=N)
        total = run.pivots
        if run.status == "stalled":
            # a tiny random tilt of the objective makes every vertex simple
            tilt = np.random.default_rng(total).uniform(-1.0, 1.0, N)
            bp = b + PERTURB * max(1.0, float(np.abs(b).max())) * tilt
            run = self._pivot(bp, run.B, run.s, self.max_pivots - total)
            total += run.pivots
            if run.status == "optimal":
                final = self._pivot(b, run.B, run.s, RESTORE_PIVOTS, bland=True)
                total += final.pivots
                if final.status == "optimal":
                    run = final
                else:
                    # keep the tilted optimum: its c is feasible for b
                    y_B = scipy.linalg.lu_solve(run.lu, b, trans=1, check_finite=False)
                    run = _Run(run.B, run.s, run.lu, y_B, run.c, run.pivots, "optimal")
        if run.status != "optimal":
            raise RemezSpanError("simplex pivot limit reached")
        B, s, c, y_B = run.B, run.s, run.c, run.y_B
        self.basis, self.signs = B.copy(), s.copy()
        value, dual = float(b @ c), float(np.abs(y_B).sum())
        if self.A_ext is not None:
            AB = A[B]
            bx = np.asarray(b if b_ext is None else b_ext, dtype=np.longdouble)
            c_x = _refine(AB, self.A_ext[B], c, s.astype(np.longdouble))
            y_x = _refine(AB.T, self.A_ext[B].T, y_B, bx)
            c, y_B = c_x.astype(float), y_x.astype(float)
            value, dual = float(bx @ c_x), float(np.abs(y_x).sum())
        y = np.zeros(m)
        y[B] = y_B
        return LPSolution(value, dual, c, y, B.copy(), total, s.copy())

    def _at_data_row(self, B, k):
        """Objective equal to row k: optimum 1, attained by the constant polynomial.

        The vertex y = e_k is maximally degenerate, so pivoting is skipped.
        """
        ones = np.ones(len(B))
        c = scipy.linalg.solve(self.A[B], ones)  # interpolates 1, hence constant
        y = np.zeros(self.A.shape[0])
        y[k] = 1.0
        return LPSolution(1.0, 1.0, c, y, B.copy(), 0, ones)


def _refine(M, M_ext, x, rhs_ext):
    """Iterative refinement of M x = rhs with residuals in extended precision."""
    lu = scipy.linalg.lu_factor(M)
    x = x.astype(np.longdouble)
    for _ in range(REFINE_STEPS):
        r = rhs_ext - M_ext @ x
        x = x + scipy.linalg.lu_solve(lu, r.astype(float))
    return x


def solve_exact(M, rhs):
    """Solve M x = rhs by Gaussian elimination over Fractions (object arrays)."""
    M = [[Fraction(v) for v in row] for row in M]
    x = [Fraction(v) for v in rhs]
    N = len(M)
    for k in range(N):
        p = next((i for i in range(k, N) if M[i][k] != 0), None)
        if p is None:
            raise RemezSpanError("singular basis in exact solve")
        M[k], M[p], x[k], x[p] = M[p], M[k], x[p], x[k]
        for i in range(k + 1, N):
            f = M[i][k] / M[k][k]
            if f:
                for j in range(k, N):
                    M[i][j] -= f * M[k][j]
                x[i] -= f * x[k]
    for k in range(N - 1, -1, -1):
        x[k] = (x[k] - sum(M[k][j] * x[j] for j in range(k + 1, N))) / M[k][k]
    return x
