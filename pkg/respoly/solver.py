import dataclasses
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConvergenceError,
    ExchangeError,
    InvalidInputError,
    InvariantViolation,
    RootIsolationError,
    SingularReferenceError,
)
from .poly import Polynomial, basis_matrix, critical_points
from .realset import gap_of, locate
from .settings import (
    DEFAULT_ALTERNATION_RTOL,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_ROUNDING_FACTOR,
    DEFAULT_STALL_PATIENCE,
    DEFAULT_TOL,
)

logger = logging.getLogger(__name__)

EXCHANGE = "exchange"
CHEBYSHEV = "chebyshev"
DEGENERATE = "degenerate"
CONSTANT = "constant"


@dataclass(frozen=True)
class ReferenceSet:
    """Points x_1 < ... < x_{n+1} of the set; k of them lie left of x0."""

    points: tuple
    k: int

    @classmethod
    def split(cls, points, x0=None):
        points = tuple(float(x) for x in sorted(points))
        k = 0 if x0 is None else sum(1 for x in points if x < x0)
        return cls(points, k)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class ResidualSolution:
    n: int
    d_n: int
    poly: Polynomial
    r: float
    reference: ReferenceSet
    sign_at_top: int
    iterations: int
    levelling_defect: float
    problem: object
    converged: bool = True
    method: str = EXCHANGE

    @property
    def x0(self):
        return self.problem.x0

    @property
    def realset(self):
        return self.problem.set

    def to_dict(self):
        return {
            "intervals": self.realset.to_list(),
            "x0": self.x0,
            "n": self.n,
            "d_n": self.d_n,
            "r": self.r,
            "coefficients": list(self.poly.coeffs),
            "hull": [self.poly.lower, self.poly.upper],
            "alternation_points": list(self.reference.points),
            "k": self.reference.k,
            "sign_at_top": self.sign_at_top,
            "iterations": self.iterations,
            "levelling_defect": self.levelling_defect,
            "converged": self.converged,
            "method": self.method,
        }


@dataclass(frozen=True)
class _Levelled:
    poly: Polynomial
    h: float
    reference: ReferenceSet
    norm: float
    defect: float
    iterations: int
    converged: bool


def alternation_signs(points, x0=None, k=None):
    """sigma_j = (-1)^(k+1-j) sgn(x_j - x0); with no x0, plain alternation ending in +1."""
    points = np.asarray(points, dtype=float)
    j = np.arange(1, len(points) + 1)
    if x0 is None:
        return (-1.0) ** (len(points) - j)
    if k is None:
        k = int(np.sum(points < x0))
    return (-1.0) ** (k + 1 - j) * np.sign(points - x0)


def _error_values(p, points, x0):
    values = np.asarray(p(np.asarray(points, dtype=float)), dtype=float)
    if x0 is None:
        return values
    return values * np.sign(np.asarray(points) - x0)


def reference_solve(ref, x0, n, hull):
    """
    Levelled polynomial on a reference: p(x_j) = sigma_j h and p(x0) = 1.

    Returns the polynomial in the Chebyshev basis of `hull` and |h|.
    """
    if len(ref) != n + 1:
        raise InvalidInputError(
            "A degree {0} reference needs {1} points, got {2}".format(n, n + 1, len(ref))
        )
    lower, upper = hull
    points = np.asarray(ref.points, dtype=float)
    sigma = alternation_signs(points, x0, ref.k)

    system = np.zeros((n + 2, n + 2))
    system[: n + 1, : n + 1] = basis_matrix(points, n, lower, upper)
    system[: n + 1, n + 1] = -sigma
    system[n + 1, : n + 1] = basis_matrix([x0], n, lower, upper)[0]
    rhs = np.zeros(n + 2)
    rhs[n + 1] = 1.0

    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularReferenceError("Degenerate reference {0}: {1}".format(ref.points, e))
    if not np.all(np.isfinite(solution)):
        raise SingularReferenceError("Degenerate reference {0}".format(ref.points))

    poly = Polynomial(tuple(float(c) for c in solution[: n + 1]), lower, upper)
    return poly, abs(float(solution[n + 1]))


def _monic_solve(ref, n, hull):
    """Levelled monic polynomial on a reference: p(x_j) = sigma_j h."""
    lower, upper = hull
    points = np.asarray(ref.points, dtype=float)
    sigma = alternation_signs(points)
    halfwidth = 0.5 * (upper - lower)
    lead = halfwidth**n / 2.0 ** (n - 1)

    vander = basis_matrix(points, n, lower, upper)
    system = np.zeros((n + 1, n + 1))
    system[:, :n] = vander[:, :n]
    system[:, n] = -sigma
    rhs = -lead * vander[:, n]

    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularReferenceError("Degenerate reference {0}: {1}".format(ref.points, e))
    if not np.all(np.isfinite(solution)):
        raise SingularReferenceError("Degenerate reference {0}".format(ref.points))

    coeffs = tuple(float(c) for c in solution[:n]) + (lead,)
    return Polynomial(coeffs, lower, upper), abs(float(solution[n]))


def _dense_extrema(realset, p, x0, per_band):
    points = []
    for a, b in realset.intervals:
        grid = a + (b - a) * 0.5 * (1 - np.cos(np.linspace(0.0, math.pi, per_band)))
        values = np.abs(_error_values(p, grid, x0))
        inner = np.nonzero((values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:]))[0]
        points.extend(grid[inner + 1])
    return points


def extrema_candidates(realset, p, x0=None):
    """
    Band endpoints plus interior critical points of p, with the error
    values E(x) = sgn(x - x0) p(x) (plain p(x) when x0 is None).
    """
    points = list(realset.endpoints)
    try:
        interior = critical_points(p, window=realset.hull)
    except RootIsolationError as e:
        logger.warning(
            "Falling back to dense sampling for extrema: {0}".format(e)
        )
        interior = _dense_extrema(realset, p, x0, per_band=64 * (len(p.coeffs) + 1))
    points.extend(c for c in interior if realset.contains(c))
    points = np.unique(np.asarray(points, dtype=float))
    return points, _error_values(p, points, x0)


def _runs(points, values):
    """Group consecutive points by the sign of their value; zeros are dropped."""
    runs = []
    for x, e in zip(points, values):
        if e == 0:
            continue
        if runs and np.sign(e) == np.sign(runs[-1][0][1]):
            runs[-1].append((x, e))
        else:
            runs.append([(x, e)])
    return runs


def _pattern_ok(points, values, x0):
    """Whether the error values carry the exact sign pattern of a levelled reference."""
    if x0 is None or not len(points):
        return True
    k = int(np.sum(np.asarray(points) < x0))
    return bool(values[0] * (-1.0) ** k > 0)


def exchange(realset, p, ref, x0=None, h=None):
    """
    Multi-point exchange: the new reference is n+1 alternating extrema of
    E(x) = sgn(x - x0) p(x) on the set, one per sign run, each at least
    the current level h, always keeping a global extremum of |E|.

    The old reference points alternate and are always candidates, so there
    are at least n+1 sign runs.
    """
    size = len(ref)
    points, values = extrema_candidates(realset, p, x0)

    old = np.asarray(ref.points, dtype=float)
    old_values = _error_values(p, old, x0)
    level = float(np.min(np.abs(old_values))) if h is None else h

    merged = sorted(
        [(x, e) for x, e in zip(points, values) if abs(e) >= level * (1 - 1e-12)]
        + [(x, e) for x, e in zip(old, old_values)],
        key=lambda item: item[0],
    )
    spacing = 1e-12 * realset.diameter
    keep = []
    for x, e in merged:
        if keep and x - keep[-1][0] <= spacing:
            if abs(e) > abs(keep[-1][1]):
                keep[-1] = (x, e)
            continue
        keep.append((x, e))

    chosen = [max(run, key=lambda item: abs(item[1])) for run in _runs(*zip(*keep))]
    if len(chosen) < size:
        raise ExchangeError(
            "Found {0} sign-consistent extrema, need {1}.".format(len(chosen), size)
        )

    top = max(range(len(chosen)), key=lambda i: abs(chosen[i][1]))
    lo, hi = 0, len(chosen)
    while hi - lo > size:
        if top == lo or (top != hi - 1 and abs(chosen[lo][1]) >= abs(chosen[hi - 1][1])):
            hi -= 1
        else:
            lo += 1

    return ReferenceSet.split([x for x, _ in chosen[lo:hi]], x0)


def initial_reference(realset, n, x0=None):
    """n+1 points spread over the bands in proportion to band length."""
    size = n + 1
    lengths = np.array([b - a for a, b in realset.intervals])
    share = size * lengths / lengths.sum()
    counts = np.floor(share).astype(int)
    order = sorted(range(realset.m), key=lambda i: (-(share[i] - counts[i]), i))
    for i in order[: size - counts.sum()]:
        counts[i] += 1

    points = []
    for (a, b), count in zip(realset.intervals, counts):
        if count == 1:
            points.append(0.5 * (a + b))
        elif count > 1:
            theta = np.linspace(0.0, math.pi, count)
            points.extend(a + (b - a) * 0.5 * (1 - np.cos(theta)))
    return ReferenceSet.split(points, x0)


def _rounding_floor(poly, norm, n):
    """Relative levelling defect that double precision cannot resolve for this poly."""
    if norm <= 0:
        return math.inf
    return DEFAULT_ROUNDING_FACTOR * (n + 1) * np.finfo(float).eps * poly.magnitude() / norm


def _iterate(realset, n, x0, solve, tol, max_iterations, patience):
    """
    Exchange until the levelling defect drops below tol. When it stops
    improving, the best iterate is accepted only if its defect is at the
    rounding floor; anything above raises ConvergenceError.
    """
    ref = initial_reference(realset, n, x0)
    best = None
    since_best = 0

    for iteration in range(1, max_iterations + 1):
        try:
            poly, _ = solve(ref)
            points, values = extrema_candidates(realset, poly, x0)
        except (SingularReferenceError, RootIsolationError) as e:
            return _give_up(best, n, e)
        level = float(np.min(np.abs(_error_values(poly, ref.points, x0))))
        norm = max(float(np.max(np.abs(values))), level)
        defect = max(0.0, (norm - level) / norm) if norm > 0 else 0.0
        floor = _rounding_floor(poly, norm, n)
        logger.debug(
            "iteration {0}: h = {1!r}, max = {2!r}, defect = {3:.3e}, floor = {4:.1e}".format(
                iteration, level, norm, defect, floor
            )
        )
        current = _Levelled(poly, level, ref, norm, defect, iteration, defect <= max(tol, floor))
        if best is None or defect < 0.5 * best.defect:
            best = current
            since_best = 0
        else:
            since_best += 1
            if defect < best.defect:
                best = current

        if defect <= tol:
            return current
        if since_best >= patience:
            return _give_up(best, n, None)

        try:
            ref = exchange(realset, poly, ref, x0, h=level)
        except ExchangeError as e:
            return _give_up(best, n, e)

    raise ConvergenceError(
        "No convergence after {0} iterations (best defect {1:.3e}).".format(
            max_iterations, best.defect
        ),
        best=best,
    )


def _give_up(best, n, error):
    if best is not None and best.converged:
        logger.info(
            "Degree {0} exchange levelled to rounding level: defect {1:.3e} after {2} iterations".format(
                n, best.defect, best.iterations
            )
        )
        return best
    if best is None:
        raise error
    raise ConvergenceError(
        "Exchange stalled at levelling defect {0:.3e} (degree {1}){2}".format(
            best.defect, n, "" if error is None else ": {0}".format(error)
        ),
        best=best,
    )


@functools.lru_cache(maxsize=256)
def _chebyshev_levelled(realset, n, tol, max_iterations, patience):
    logger.info("Solving for the degree {0} Chebyshev polynomial".format(n))
    return _iterate(
        realset,
        n,
        None,
        lambda ref: _monic_solve(ref, n, realset.hull),
        tol,
        max_iterations,
        patience,
    )


def chebyshev(realset, n, tol=DEFAULT_TOL, max_iterations=DEFAULT_MAX_ITERATIONS):
    """Monic minimizer T_n of the sup norm on the set, and its norm t_n."""
    if int(n) != n or n < 1:
        raise InvalidInputError("Chebyshev polynomials need degree >= 1, got {0}".format(n))
    levelled = _chebyshev_levelled(
        realset, int(n), tol, max_iterations, DEFAULT_STALL_PATIENCE
    )
    return levelled.poly, levelled.norm


def _alternating_subset(realset, poly, x0, size, rtol):
    """
    An x0-alternating set of `size` points among the near-maximal extrema
    of poly, or None.
    """
    points, values = extrema_candidates(realset, poly, x0)
    top = float(np.max(np.abs(values)))
    near = np.abs(values) >= top * (1 - rtol)
    runs = _runs(points[near], values[near])
    if len(runs) < size:
        return None
    chosen = [max(run, key=lambda item: abs(item[1])) for run in runs]
    windows = [chosen[i : i + size] for i in range(len(chosen) - size + 1)]
    for window in windows:
        xs = [x for x, _ in window]
        es = [e for _, e in window]
        if _pattern_ok(xs, es, x0):
            return ReferenceSet.split(xs, x0), top
    return None


def _degenerate(prob, n, tol, max_iterations):
    """T_{n-1}/T_{n-1}(x0) when it has an x0-alternating set of n+1 points."""
    realset, x0 = prob.set, prob.x0
    if n == 1:
        candidate = Polynomial.constant(1.0, realset.lower, realset.upper)
        rtol = DEFAULT_ALTERNATION_RTOL
        iterations = 0
    else:
        try:
            levelled = _chebyshev_levelled(
                realset, n - 1, tol, max_iterations, DEFAULT_STALL_PATIENCE
            )
        except ConvergenceError as e:
            logger.info("Skipping the T_{0} candidate: {1}".format(n - 1, e))
            return None
        value = levelled.poly(x0)
        if abs(value) * (1 + 1e-12) < levelled.norm:
            return None
        candidate = levelled.poly.scale(1.0 / value)
        rtol = max(DEFAULT_ALTERNATION_RTOL, 10 * levelled.defect)
        iterations = levelled.iterations

    found = _alternating_subset(realset, candidate, x0, n + 1, rtol)
    if found is None:
        return None
    reference, norm = found
    level = float(np.min(np.abs(candidate(np.asarray(reference.points)))))
    return _Levelled(
        candidate.padded(n + 1),
        level,
        reference,
        norm,
        max(0.0, (norm - level) / norm),
        iterations,
        True,
    )


def _finish(prob, n, levelled, method):
    poly = levelled.poly
    d_n = poly.degree if method != DEGENERATE else n - 1
    if method == EXCHANGE and d_n < n:
        logger.warning(
            "Leading coefficient of the degree {0} solution is below the threshold, but "
            "T_{1}/T_{1}(x0) has no alternating set; keeping d_n = {0}.".format(n, n - 1)
        )
        d_n = n
    top = levelled.reference.points[-1]
    return ResidualSolution(
        n=n,
        d_n=d_n,
        poly=poly,
        r=levelled.norm,
        reference=levelled.reference,
        sign_at_top=int(np.sign(poly(top))),
        iterations=levelled.iterations,
        levelling_defect=levelled.defect,
        problem=prob,
        converged=levelled.converged,
        method=method,
    )


def solve_residual(
    prob, n, tol=DEFAULT_TOL, max_iterations=DEFAULT_MAX_ITERATIONS
):
    """
    Residual polynomial R_{x0,n}: degree <= n, R(x0) = 1, least sup norm on the set.

    Parameters:
    - prob: a NormalizedProblem from realset.locate
    - n: degree bound, n >= 0
    - tol: relative levelling tolerance
    - max_iterations: exchange iteration cap

    Returns a ResidualSolution. Raises ConvergenceError (with the best
    iterate attached) if the iteration cap is reached.
    """
    if int(n) != n or n < 0:
        raise InvalidInputError("Degree must be a nonnegative integer, got {0}".format(n))
    if not tol > 0:
        raise InvalidInputError("Tolerance must be positive, got {0}".format(tol))
    n = int(n)
    realset, x0 = prob.set, prob.x0
    lower, upper = realset.hull

    if n == 0:
        one = Polynomial.constant(1.0, lower, upper)
        levelled = _Levelled(one, 1.0, ReferenceSet.split([lower], x0), 1.0, 0.0, 0, True)
        return _finish(prob, 0, levelled, CONSTANT)

    if prob.outside_hull:
        cheb = _chebyshev_levelled(realset, n, tol, max_iterations, DEFAULT_STALL_PATIENCE)
        value = cheb.poly(x0)
        levelled = _Levelled(
            cheb.poly.scale(1.0 / value),
            cheb.h / abs(value),
            ReferenceSet.split(cheb.reference.points, x0),
            cheb.norm / abs(value),
            cheb.defect,
            cheb.iterations,
            cheb.converged,
        )
        logger.info("x0 = {0} is outside the hull; R is a scaled T_{1}".format(x0, n))
        return _finish(prob, n, levelled, CHEBYSHEV)

    degenerate = _degenerate(prob, n, tol, max_iterations)
    if degenerate is not None:
        logger.info("Degree {0} solution degenerates to T_{1}/T_{1}(x0)".format(n, n - 1))
        method = CONSTANT if n == 1 else DEGENERATE
        solution = _finish(prob, n, degenerate, DEGENERATE)
        return dataclasses.replace(solution, method=method)

    levelled = _iterate(
        realset,
        n,
        x0,
        lambda ref: reference_solve(ref, x0, n, realset.hull),
        tol,
        max_iterations,
        DEFAULT_STALL_PATIENCE,
    )
    logger.info(
        "Solved n = {0} in {1} iterations: r = {2!r}, defect = {3:.2e}".format(
            n, levelled.iterations, levelled.norm, levelled.defect
        )
    )
    return _finish(prob, n, levelled, EXCHANGE)


def residual_sequence(prob, n_max, tol=DEFAULT_TOL, max_iterations=DEFAULT_MAX_ITERATIONS):
    """Solutions for n = 0..n_max; the norms must not increase."""
    solutions = []
    for n in range(n_max + 1):
        solution = solve_residual(prob, n, tol=tol, max_iterations=max_iterations)
        if solutions and solution.r > solutions[-1].r * (1 + 1e-9 + solution.levelling_defect):
            raise InvariantViolation(
                "r_{0} = {1!r} exceeds r_{2} = {3!r}".format(
                    n, solution.r, n - 1, solutions[-1].r
                )
            )
        solutions.append(solution)
    return solutions


def dual_residual(sol):
    """The dual maximizer R/r and its value 1/r at x0."""
    return sol.poly.scale(1.0 / sol.r), 1.0 / sol.r


def renormalize(sol, y0):
    """R_{y0,n} = R_{x0,n}/R_{x0,n}(y0) for y0 in the same gap as x0."""
    realset = sol.realset
    gap, here = gap_of(realset, y0), sol.problem.gap
    if gap is None or gap.index != here.index or gap.kind != here.kind:
        raise InvalidInputError(
            "y0 = {0} is not in the gap of x0 = {1}".format(y0, sol.x0)
        )
    value = sol.poly(y0)
    poly = sol.poly.scale(1.0 / value)
    reference = ReferenceSet.split(sol.reference.points, y0)
    return dataclasses.replace(
        sol,
        poly=poly,
        r=sol.r / abs(value),
        reference=reference,
        sign_at_top=int(np.sign(poly(reference.points[-1]))),
        problem=locate(realset, y0),
    )


@dataclass(frozen=True)
class DegreeReport:
    d_n: int
    matched_chebyshev: bool
    deviation: float = None


def degree_report(sol, tol=DEFAULT_TOL, max_iterations=DEFAULT_MAX_ITERATIONS):
    if sol.d_n < sol.n - 1:
        raise InvariantViolation(
            "Degree {0} solution has effective degree {1}".format(sol.n, sol.d_n)
        )
    if sol.n == 0 or sol.d_n == sol.n:
        return DegreeReport(sol.d_n, None)

    realset = sol.realset
    if sol.n == 1:
        expected = Polynomial.constant(1.0, realset.lower, realset.upper)
    else:
        t, _ = chebyshev(realset, sol.n - 1, tol=tol, max_iterations=max_iterations)
        expected = t.scale(1.0 / t(sol.x0))
    a = np.asarray(sol.poly.coeffs)
    b = np.zeros_like(a)
    b[: len(expected.coeffs)] = expected.coeffs
    deviation = float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
    return DegreeReport(sol.d_n, deviation <= 1e-9, deviation)


def alternation_certificate(sol, rtol=None):
    """
    Checks on a solution: sign pattern at the reference, levelling spread,
    enough extreme points, the gap endpoints in the reference when 1 < k < n,
    R above r across the gap of x0, and which hull endpoint is active.
    """
    realset, x0, n = sol.realset, sol.x0, sol.n
    points = np.asarray(sol.reference.points)
    values = np.asarray(sol.poly(points), dtype=float)
    sigma = alternation_signs(points, x0, sol.reference.k)
    spread = float(np.max(np.abs(np.abs(values) - sol.r)) / sol.r)
    rtol = max(DEFAULT_ALTERNATION_RTOL, 10 * sol.levelling_defect) if rtol is None else rtol

    candidates, errors = extrema_candidates(realset, sol.poly, x0)
    extreme = int(np.sum(np.abs(errors) >= sol.r * (1 - rtol)))

    report = {
        "signs_ok": bool(np.all(values * sigma > 0)),
        "levelling_spread": spread,
        "levelled": spread <= rtol,
        "extreme_points": extreme,
        "enough_extreme_points": extreme >= n + 1,
        "endpoint_active": bool(
            math.isclose(points[0], realset.lower) or math.isclose(points[-1], realset.upper)
        ),
    }
    gap = sol.problem.gap
    if gap.bounded:
        k = sol.reference.k
        if 1 < k < n and sol.d_n == n:
            report["gap_edges_in_reference"] = bool(
                gap.left in sol.reference.points and gap.right in sol.reference.points
            )
        inside = np.linspace(gap.left, gap.right, 65)[1:-1]
        report["above_norm_in_gap"] = bool(
            sol.d_n == 0 or np.all(np.asarray(sol.poly(inside)) > sol.r * (1 - rtol))
        )
    return report
