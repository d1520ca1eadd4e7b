import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, NumericalError
from .poly import Polynomial, basis_matrix, effective_degree
from .settings import (
    DEFAULT_GRID,
    DEFAULT_MAX_PIVOTS,
    DEFAULT_ORACLE_TOL,
    DEFAULT_SIMPLEX_EPS,
)

logger = logging.getLogger(__name__)

# pivots without progress before switching from Dantzig's rule to Bland's
STALL_PIVOTS = 50


@dataclass(frozen=True)
class GridProblem:
    grid: np.ndarray
    x0: float
    n: int
    lower: float
    upper: float

    @classmethod
    def from_problem(cls, prob, n, points_per_band=DEFAULT_GRID):
        return cls(cosine_grid(prob.set, points_per_band), prob.x0, int(n), prob.set.lower, prob.set.upper)


def cosine_grid(realset, points_per_band=DEFAULT_GRID):
    """Points a + (b - a)(1 - cos(pi k/M))/2, k = 0..M, on every band; nested under doubling M."""
    if int(points_per_band) != points_per_band or points_per_band < 1:
        raise InvalidInputError("Grid needs at least one point per band, got {0}".format(points_per_band))
    theta = np.pi * np.arange(points_per_band + 1) / points_per_band
    pieces = [a + (b - a) * 0.5 * (1 - np.cos(theta)) for a, b in realset.intervals]
    return np.concatenate(pieces)


def _pivot(T, basis, i, j):
    T[i] /= T[i, j]
    column = T[:, j].copy()
    column[i] = 0.0
    T -= np.outer(column, T[i])
    basis[i] = j


def _run(T, basis, columns, eps, max_pivots):
    """Minimize the objective in the last row of T over the first `columns` columns."""
    bland = False
    best = T[-1, -1]
    idle = 0
    for count in range(max_pivots):
        reduced = T[-1, :columns]
        if bland:
            entering = np.nonzero(reduced < -eps)[0]
            if entering.size == 0:
                return count
            j = int(entering[0])
        else:
            j = int(np.argmin(reduced))
            if reduced[j] >= -eps:
                return count

        col = T[:-1, j]
        rows = np.nonzero(col > eps)[0]
        if rows.size == 0:
            raise NumericalError("Linear program is unbounded; the grid problem is malformed.")
        ratios = T[rows, -1] / col[rows]
        low = ratios.min()
        ties = rows[ratios <= low + eps * max(1.0, abs(low))]
        i = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, basis, i, j)

        if T[-1, -1] > best + eps * max(1.0, abs(best)):
            best = T[-1, -1]
            idle = 0
        else:
            idle += 1
            if not bland and idle >= STALL_PIVOTS:
                logger.debug("Switching to Bland's rule after {0} idle pivots".format(idle))
                bland = True
    raise NumericalError("Simplex hit the pivot cap ({0}).".format(max_pivots))


def solve_standard(A, b, c, eps=DEFAULT_SIMPLEX_EPS, max_pivots=DEFAULT_MAX_PIVOTS):
    """
    min c.x subject to A x = b, x >= 0, by a two-phase dense tableau simplex.
    Returns (x, y, value) with y the dual solution, A^T y <= c.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    rows, cols = A.shape
    signs = np.where(b < 0, -1.0, 1.0)
    A *= signs[:, None]
    b = b * signs

    T = np.zeros((rows + 1, cols + rows + 1))
    T[:rows, :cols] = A
    T[:rows, cols : cols + rows] = np.eye(rows)
    T[:rows, -1] = b
    T[rows, :cols] = -A.sum(axis=0)
    T[rows, -1] = -b.sum()
    basis = list(range(cols, cols + rows))

    pivots = _run(T, basis, cols + rows, eps, max_pivots)
    if -T[rows, -1] > eps * max(1.0, b.sum()):
        raise NumericalError("Linear program is infeasible (phase one residual {0!r}).".format(-T[rows, -1]))

    for i, j in enumerate(basis):
        if j >= cols:
            candidates = np.nonzero(np.abs(T[i, :cols]) > eps)[0]
            if candidates.size:
                _pivot(T, basis, i, int(candidates[0]))

    full_cost = np.concatenate([c, np.zeros(rows)])
    T[rows, :] = 0.0
    T[rows, :cols] = c
    for i, j in enumerate(basis):
        T[rows] -= full_cost[j] * T[i]
    T[rows, cols : cols + rows] = 0.0
    pivots += _run(T, basis, cols, eps, max_pivots)

    x = np.zeros(cols + rows)
    x[basis] = T[:rows, -1]
    full = np.hstack([A, np.eye(rows)])
    y = np.linalg.solve(full[:, basis].T, full_cost[basis]) * signs
    logger.debug("simplex: {0} pivots".format(pivots))
    return x[:cols], y, float(-T[rows, -1])


@dataclass(frozen=True)
class OracleResult:
    poly: Polynomial
    t: float
    grid_size: int


def grid_minimax(gp, eps=DEFAULT_SIMPLEX_EPS, max_pivots=DEFAULT_MAX_PIVOTS):
    """
    Least max |p| over the grid among degree-n polynomials with p(x0) = 1.

    Solves the dual program min 1.nu subject to [A^T, -A^T] nu = phi(x0),
    nu >= 0, whose optimum is 1/t; the polynomial comes from its dual values.
    """
    n = gp.n
    if n < 0:
        raise InvalidInputError("Degree must be nonnegative, got {0}".format(n))
    if n + 2 > len(gp.grid):
        raise InvalidInputError("Grid of {0} points is too small for degree {1}".format(len(gp.grid), n))
    A = basis_matrix(gp.grid, n, gp.lower, gp.upper)
    phi = basis_matrix([gp.x0], n, gp.lower, gp.upper)[0]
    M = np.hstack([A.T, -A.T])
    _, y, value = solve_standard(M, phi, np.ones(M.shape[1]), eps=eps, max_pivots=max_pivots)
    if not value > 0:
        raise NumericalError("Grid program returned a nonpositive optimum {0!r}".format(value))
    t = 1.0 / value
    poly = Polynomial(tuple(float(v) for v in y * t), gp.lower, gp.upper)
    logger.info("Grid oracle: n = {0}, {1} points, t = {2!r}".format(n, len(gp.grid), t))
    return OracleResult(poly, t, len(gp.grid))


@dataclass(frozen=True)
class Comparison:
    r: float
    t: float
    norm_gap: float
    coefficient_deviation: float
    oracle_degree: int
    lower_ok: bool
    passed: bool

    def to_dict(self):
        return {
            "r": self.r,
            "t": self.t,
            "norm_gap": self.norm_gap,
            "coefficient_deviation": self.coefficient_deviation,
            "oracle_degree": self.oracle_degree,
            "lower_ok": self.lower_ok,
            "passed": self.passed,
        }


def compare(sol, oracle, tol=DEFAULT_ORACLE_TOL):
    a = np.asarray(sol.poly.coeffs, dtype=float)
    b = np.asarray(oracle.poly.coeffs, dtype=float)
    size = max(len(a), len(b))
    a = np.pad(a, (0, size - len(a)))
    b = np.pad(b, (0, size - len(b)))
    gap = abs(sol.r - oracle.t)
    lower_ok = sol.r >= oracle.t - 1e-9
    return Comparison(
        r=sol.r,
        t=oracle.t,
        norm_gap=gap,
        coefficient_deviation=float(np.max(np.abs(a - b))),
        oracle_degree=effective_degree(b, threshold=1e-6),
        lower_ok=lower_ok,
        passed=lower_ok and gap <= tol and math.isfinite(gap),
    )
