import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .bands import (
    band_invariants,
    band_measures,
    band_set,
    green_period,
    norm_identity,
    preimage,
    widom_factor,
)
from .exceptions import InvalidInputError, RespolyException
from .oracle import GridProblem, compare, grid_minimax
from .poly import Polynomial, cheb_classical
from .potential import equilibrium, green, green_pole, pole_data
from .realset import gaps, locate, validate_set
from .settings import DEFAULT_GRID, DEFAULT_JOBS, DEFAULT_ORACLE_TOL
from .solver import degree_report, residual_sequence, solve_residual

logger = logging.getLogger(__name__)

SUITES = ("quick", "full")


@dataclass(frozen=True)
class Instance:
    name: str
    problem: object
    n: int
    r: float
    d_n: int = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    expected: float
    defect: float
    passed: bool

    def to_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "expected": self.expected,
            "defect": self.defect,
            "passed": self.passed,
        }


def _check(name, value, expected, tol, relative=False):
    defect = abs(value - expected)
    if relative and expected != 0:
        defect /= abs(expected)
    return CheckResult(name, float(value), float(expected), float(defect), bool(defect <= tol))


def _at_most(name, value, bound):
    return CheckResult(name, float(value), float(bound), float(max(0.0, value - bound)), bool(value <= bound))


def period_set(upsilon):
    """Upsilon^{-1}([-1, 1]) as a RealSet."""
    bands = preimage(upsilon, 1.0)
    if bands.degenerate:
        raise InvalidInputError("A constant polynomial has no period set.")
    return bands.realset


def interval():
    return validate_set([[-1, 1]])


def two_intervals():
    return validate_set([[-2, -1], [1, 2]])


def closed_form_instances():
    """Problems whose residual norms are known exactly."""
    out = []
    line = locate(interval(), 2.0)
    for n in range(1, 11):
        out.append(Instance("interval n={0}".format(n), line, n, 1.0 / cheb_classical(n, 2.0), n))

    pair = locate(two_intervals(), 0.0)
    out.append(Instance("two intervals n=1", pair, 1, 1.0, 0))
    out.append(Instance("two intervals n=2", pair, 2, 0.6, 2))
    out.append(Instance("two intervals n=3", pair, 3, 0.6, 2))

    quadratic = Polynomial.from_monomial([-2.0, 0.0, 2.0], -2.0, 2.0)
    period2 = locate(period_set(quadratic), 0.5)
    out.append(Instance("period-2 set n=2", period2, 2, 2.0 / 3.0, 2))
    out.append(Instance("period-2 set n=3", period2, 3, 2.0 / 3.0, 2))
    out.append(Instance("period-2 set n=4", period2, 4, 1.0 / 3.5, 4))

    cubic = Polynomial.from_monomial([0.0, -4.5, 0.0, 6.0], -2.0, 2.0)
    period3 = period_set(cubic)
    inner = locate(period3, 0.5)
    out.append(Instance("period-3 set n=3", inner, 3, 2.0 / 3.0, 3))
    out.append(Instance("period-3 set n=6", inner, 6, 1.0 / 3.5, 6))
    outside = locate(period3, 2.0)
    out.append(Instance("period-3 set x0=2 n=3", outside, 3, 1.0 / 39.0, 3))

    shrunk = locate(validate_set([[-2, -1], [1, 1.5]]), 0.0)
    out.append(Instance("shrunk two intervals n=2", shrunk, 2, 0.6, 2))
    return out


def run_examples():
    """Closed-form instances plus the potential-theory constants, as a defect table."""
    results = []
    for inst in closed_form_instances():
        sol = solve_residual(inst.problem, inst.n)
        results.append(_check("r: " + inst.name, sol.r, inst.r, 1e-9, relative=True))
        if inst.d_n is not None:
            results.append(_check("d_n: " + inst.name, sol.d_n, inst.d_n, 0))
        results.append(_at_most("norm identity: " + inst.name, norm_identity(sol), 1e-8))

    pair = locate(two_intervals(), 0.0)
    pd = pole_data(pair.set, pair.x0)
    three = widom_factor(pair, solve_residual(pair, 3), pd)
    results.append(_check("W_3 two intervals", three.W_n, 28 * math.sqrt(3) / 15, 1e-8))
    report = degree_report(solve_residual(pair, 3))
    results.append(_check("T_2 match two intervals n=3", float(bool(report.matched_chebyshev)), 1.0, 0))
    results.extend(potential_checks(pairs=5))
    return results


def potential_checks(pairs=20, seed=0):
    results = [
        _check("capacity [-1,1]", equilibrium(interval()).capacity, 0.5, 1e-9),
        _check("capacity [0,1]", equilibrium(validate_set([[0, 1]])).capacity, 0.25, 1e-9),
        _check("g [-1,1] at 2", green(equilibrium(interval()), 2.0), math.log(2 + math.sqrt(3)), 1e-9),
        _check("g two intervals at 0", green(equilibrium(two_intervals()), 0.0), 0.5 * math.log(3), 1e-8),
        _check("PW two intervals at 0", pole_data(two_intervals(), 0.0).pw, 0.5 * math.log(3), 1e-8),
        _check("PW [-1,1] at 2", pole_data(interval(), 2.0).pw, 0.0, 1e-12),
    ]
    rng = np.random.default_rng(seed)
    realset = two_intervals()
    worst = 0.0
    for _ in range(pairs):
        z, w = _outside_points(rng, realset, 2)
        worst = max(worst, abs(green_pole(realset, z, w) - green_pole(realset, w, z)))
    results.append(_at_most("green symmetry", worst, 1e-8))
    return results


def _outside_points(rng, realset, count):
    points = []
    while len(points) < count:
        x = rng.uniform(realset.lower - realset.diameter, realset.upper + realset.diameter)
        if not realset.contains(x) and all(abs(x - p) > 1e-3 for p in points):
            points.append(float(x))
    return points


def random_problem(rng, min_gap=0.05):
    """2-3 intervals in [0, 1] with bands and gaps at least min_gap, x0 well inside a gap."""
    m = int(rng.integers(2, 4))
    while True:
        cuts = np.sort(rng.uniform(0.0, 1.0, 2 * m))
        if np.all(np.diff(cuts) >= min_gap):
            break
    realset = validate_set(cuts.reshape(m, 2).tolist())
    gap = gaps(realset)[int(rng.integers(0, m))]
    if gap.bounded:
        x0 = gap.left + gap.width * rng.uniform(0.1, 0.9)
    else:
        x0 = realset.upper + realset.diameter * rng.uniform(0.1, 1.0)
    return locate(realset, float(x0))


def _bound_task(task):
    prob, n_max = task
    try:
        sols = residual_sequence(prob, n_max)
        pd = pole_data(prob.set, prob.x0)
        violations = 0
        worst_identity = 0.0
        for sol in sols[1:]:
            rec = widom_factor(prob, sol, pd)
            violations += int(not (rec.within_bounds and rec.exp_bound_ok))
            worst_identity = max(worst_identity, rec.norm_defect)
        return violations, worst_identity, None
    except RespolyException as e:
        return 0, 0.0, "{0}: {1}".format(e.__class__.__name__, e)


def _oracle_task(task):
    prob, n, grid, tol = task
    try:
        sol = solve_residual(prob, n)
        result = compare(sol, grid_minimax(GridProblem.from_problem(prob, n, grid)), tol=tol)
        return result.passed, result.norm_gap, None
    except RespolyException as e:
        return False, math.inf, "{0}: {1}".format(e.__class__.__name__, e)


def _pool_map(fn, tasks, jobs):
    if jobs > 1:
        with Pool(processes=jobs) as pool:
            return pool.map(fn, tasks)
    return [fn(task) for task in tasks]


def bound_checks(count, n_max, seed, jobs=DEFAULT_JOBS):
    rng = np.random.default_rng(seed)
    tasks = [(random_problem(rng), n_max) for _ in range(count)]
    outcomes = _pool_map(_bound_task, tasks, jobs)
    for (prob, _), (_, _, error) in zip(tasks, outcomes):
        if error is not None:
            logger.warning("ERROR -- {0} x0={1} -- {2}".format(prob.set.to_list(), prob.x0, error))
    failures = sum(1 for _, _, error in outcomes if error is not None)
    violations = sum(v for v, _, _ in outcomes)
    identity = max(w for _, w, _ in outcomes)
    return [
        _check("bound violations ({0} problems, n <= {1})".format(count, n_max), violations + failures, 0, 0),
        _at_most("norm identity (random problems)", identity, 1e-8),
    ]


def oracle_checks(count, n_max, seed, grid=DEFAULT_GRID, tol=DEFAULT_ORACLE_TOL, jobs=DEFAULT_JOBS):
    rng = np.random.default_rng(seed + 1)
    tasks = [(random_problem(rng), int(rng.integers(1, n_max + 1)), grid, tol) for _ in range(count)]
    outcomes = _pool_map(_oracle_task, tasks, jobs)
    worst = max(gap for _, gap, _ in outcomes)
    passed = sum(1 for ok, _, _ in outcomes if ok)
    return [
        _check("oracle agreement ({0} problems, grid {1})".format(count, grid), passed, count, 0),
        _at_most("oracle worst gap (grid {0})".format(grid), worst, tol),
    ]


def band_checks(count, n_max, seed, samples):
    """Band count, containment, equal band measures and the two Green's function paths."""
    rng = np.random.default_rng(seed + 2)
    results = []
    worst_measure = worst_green = 0.0
    structural = 0
    for _ in range(count):
        prob = random_problem(rng)
        sol = solve_residual(prob, int(rng.integers(2, n_max + 1)))
        bs = band_set(sol)
        if bs.degenerate:
            continue
        inv = band_invariants(bs, prob)
        structural += int(not all(inv.values())) + int(len(bs.intervals) != sol.d_n)
        worst_measure = max(worst_measure, max(abs(m - 1.0 / sol.d_n) for m in band_measures(bs)))
        gd_n = equilibrium(bs.realset)
        for z in _outside_points(rng, bs.realset, samples):
            worst_green = max(worst_green, abs(green_period(sol, z) - green(gd_n, z)))
    results.append(_check("band structure violations", structural, 0, 0))
    results.append(_at_most("band harmonic measure defect", worst_measure, 1e-6))
    results.append(_at_most("Green's function cross-check", worst_green, 1e-6))
    return results


def root_asymptotics():
    pair = locate(two_intervals(), 0.0)
    values = [abs(solve_residual(pair, n).r ** (1.0 / n) - 3 ** -0.5) for n in (10, 20, 40)]
    return [
        _at_most("r_40^(1/40) two intervals", values[-1], 0.02),
        _check("root asymptotics decreasing", float(values[0] >= values[1] >= values[2]), 1.0, 0),
    ]


def run_suite(name="quick", seed=0, jobs=DEFAULT_JOBS, grid=DEFAULT_GRID):
    if name not in SUITES:
        raise InvalidInputError("Unknown suite {0!r}; choose from {1}".format(name, ", ".join(SUITES)))
    logger.info("Running the {0} suite (seed {1})".format(name, seed))
    results = run_examples()
    if name == "quick":
        results.extend(bound_checks(3, 20, seed, jobs))
        results.extend(oracle_checks(3, 4, seed, grid=grid, jobs=jobs))
        results.extend(band_checks(2, 6, seed, 10))
        results.extend(root_asymptotics())
    else:
        results.extend(potential_checks(pairs=20, seed=seed))
        results.extend(bound_checks(200, 20, seed, jobs))
        results.extend(oracle_checks(50, 8, seed, grid=grid, jobs=jobs))
        results.extend(oracle_checks(10, 8, seed + 100, grid=4 * grid, tol=1e-4, jobs=jobs))
        results.extend(band_checks(20, 12, seed, 50))
        results.extend(root_asymptotics())
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning("{0} of {1} checks failed: {2}".format(len(failed), len(results), "; ".join(failed)))
    else:
        logger.info("All {0} checks passed".format(len(results)))
    return results
