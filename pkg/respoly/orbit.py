import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .bands import band_set, gap_zeros, green_period, widom_factor
from .exceptions import InvalidInputError, RespolyException
from .potential import equilibrium, green, green_pole, pole_data
from .settings import (
    DEFAULT_EPS,
    DEFAULT_JOBS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RETURN_THRESHOLD,
    DEFAULT_TOL,
)
from .solver import solve_residual

logger = logging.getLogger(__name__)

try:
    from tqdm.auto import tqdm

    has_tqdm = True
except ImportError:
    has_tqdm = False


def character_vector(gd):
    """Harmonic measures of the first m - 1 bands; empty for an interval."""
    return np.asarray(gd.masses[:-1], dtype=float)


def lattice_distance(x):
    return np.abs(x - np.round(x))


def near_returns(omega, N, eps=DEFAULT_EPS):
    """All n <= N with every n*omega_i within eps of an integer."""
    if int(N) != N or N < 1:
        raise InvalidInputError("N must be a positive integer, got {0}".format(N))
    if not 0 < eps < 0.5:
        raise InvalidInputError("eps must lie in (0, 1/2), got {0}".format(eps))
    omega = np.asarray(omega, dtype=float)
    out = []
    for n in range(1, int(N) + 1):
        if omega.size == 0 or np.max(lattice_distance(n * omega)) <= eps + 1e-12:
            out.append(n)
    return out


@dataclass(frozen=True)
class OrbitData:
    omega: tuple
    returns: tuple

    def to_dict(self):
        return {
            "omega": list(self.omega),
            "returns": [{"n": n, "distance": d} for n, d in self.returns],
        }


def orbit(gd, n_max, eps=DEFAULT_EPS):
    omega = character_vector(gd)
    returns = []
    for n in near_returns(omega, n_max, eps):
        distance = float(np.max(lattice_distance(n * omega))) if omega.size else 0.0
        returns.append((n, distance))
    return OrbitData(tuple(float(w) for w in omega), tuple(returns))


@dataclass(frozen=True)
class SweepResult:
    records: tuple
    failures: tuple
    omega: tuple
    near_returns: tuple
    running_min: tuple
    running_max: tuple
    liminf_est: float
    limsup_est: float
    lower_bound: float
    upper_bound: float
    checks: dict

    def summary(self):
        return {
            "liminf_est": self.liminf_est,
            "limsup_est": self.limsup_est,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "near_returns": list(self.near_returns),
            "failures": [
                {"n": n, "error": name, "message": message} for n, name, message in self.failures
            ],
            "checks": dict(self.checks),
        }


def _sweep_one(task):
    prob, pd, n, tol, max_iterations = task
    try:
        sol = solve_residual(prob, n, tol=tol, max_iterations=max_iterations)
        return n, widom_factor(prob, sol, pd), None
    except RespolyException as e:
        ex_name = ".".join([e.__module__, e.__class__.__name__])
        return n, None, (ex_name, str(e))


def widom_sweep(
    prob,
    n_max,
    jobs=DEFAULT_JOBS,
    progress=False,
    eps=DEFAULT_EPS,
    threshold=DEFAULT_RETURN_THRESHOLD,
    tol=DEFAULT_TOL,
    max_iterations=DEFAULT_MAX_ITERATIONS,
    ignore_errors=True,
):
    """
    Widom factors for n = 1..n_max with running extremes and their values
    along the near returns of the character orbit.

    A failing n is logged and recorded; the sweep carries on unless
    ignore_errors is False.
    """
    if int(n_max) != n_max or n_max < 2:
        raise InvalidInputError("n_max must be an integer >= 2, got {0}".format(n_max))
    if progress and not has_tqdm:
        raise InvalidInputError(
            "To print progress bars, you must have `tqdm` installed. To install: pip install tqdm."
        )

    pd = pole_data(prob.set, prob.x0)
    gd = equilibrium(prob.set)
    tasks = [(prob, pd, n, tol, max_iterations) for n in range(1, int(n_max) + 1)]

    if jobs > 1:
        pool = Pool(processes=jobs)
        results = pool.imap(_sweep_one, tasks)
    else:
        pool = None
        results = map(_sweep_one, tasks)

    records, failures = [], []
    try:
        for n, record, error in tqdm(results, total=len(tasks)) if progress else results:
            if error is None:
                logger.info("n = {0}: W = {1!r}".format(n, record.W_n))
                records.append(record)
                continue
            ex_name, message = error
            if ignore_errors is True:
                logger.warning("ERROR -- n={0} -- {1}: {2}".format(n, ex_name, message))
                failures.append((n, ex_name, message))
            else:
                raise RespolyException("n={0} -- {1}: {2}".format(n, ex_name, message))
    finally:
        if pool is not None:
            pool.terminate()

    values = [rec.W_n for rec in records]
    running_min = tuple(np.minimum.accumulate(values)) if values else ()
    running_max = tuple(np.maximum.accumulate(values)) if values else ()

    omega = character_vector(gd)
    returns = near_returns(omega, n_max, eps)
    at_returns = [rec.W_n for rec in records if rec.n in returns]

    checks = {
        "within_bounds": all(rec.within_bounds for rec in records),
        "interval_constant": (
            all(abs(w - 2.0) <= 1e-8 for w in values) if prob.set.m == 1 else None
        ),
        "near_return_threshold": (
            min(at_returns) - 2.0 <= threshold if at_returns else None
        ),
    }
    for name, ok in checks.items():
        if ok is False:
            logger.warning("Sweep check failed: {0}".format(name))

    return SweepResult(
        records=tuple(records),
        failures=tuple(failures),
        omega=tuple(float(w) for w in omega),
        near_returns=tuple(returns),
        running_min=tuple(float(v) for v in running_min),
        running_max=tuple(float(v) for v in running_max),
        liminf_est=float(min(values)) if values else None,
        limsup_est=float(max(values)) if values else None,
        lower_bound=2.0,
        upper_bound=2.0 * math.exp(pd.pw),
        checks=checks,
    )


SWEEP_COLUMNS = ["n", "d_n", "r", "W_n", "is_near_return", "lower", "upper", "gap_zeros", "defect"]


def sweep_rows(result):
    returns = set(result.near_returns)
    for rec in result.records:
        n, d_n, r, W, lower, upper, zeros, defect = rec.to_row()
        yield [n, d_n, r, W, int(n in returns), lower, upper, zeros, defect]


@dataclass(frozen=True)
class MagnitudeRow:
    z: complex
    magnitude: float
    predicted: float
    defect: float
    bounded: bool
    normalized: float

    def to_dict(self):
        return {
            "z": [self.z.real, self.z.imag],
            "magnitude": self.magnitude,
            "predicted": self.predicted,
            "defect": self.defect,
            "bounded": self.bounded,
            "normalized": self.normalized,
        }


def magnitude_asymptotic_check(prob, sol, pd, zs):
    """
    Compare |M_n(z)| = exp(-n g(z) + d_n g_n(z)) against the product over
    the zeros x_k of R outside the set of exp(-g(z, x_k)); a degree drop
    counts as a zero at infinity. `normalized` is
    exp(n g(x0) - n g(z)) |R(z)|, which tends to 1 along period-set subsequences.
    """
    realset = prob.set
    gd = equilibrium(realset)
    bands = band_set(sol)
    zeros = [x for x in gap_zeros(sol, realset) if x is not None]
    rows = []
    for z in zs:
        z = complex(z)
        if z.imag == 0 and not bands.degenerate and bands.realset.contains(z.real):
            raise InvalidInputError("z = {0} lies on the period set".format(z.real))
        if z == complex(prob.x0):
            raise InvalidInputError("z must differ from x0")
        g = green(gd, z)
        log_m = -sol.n * g + sol.d_n * green_period(sol, z)
        log_p = -sum(green_pole(realset, z, x) for x in zeros)
        if sol.d_n == sol.n - 1:
            log_p -= g
        magnitude, predicted = math.exp(log_m), math.exp(log_p)
        normalized = math.exp(sol.n * (pd.g_at_x0 - g)) * abs(sol.poly(z))
        rows.append(
            MagnitudeRow(
                z,
                magnitude,
                predicted,
                abs(magnitude - predicted),
                magnitude <= 1 + 1e-9,
                normalized,
            )
        )
    return rows
