import cmath
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import InvalidInputError, QuadratureError
from .poly import Polynomial, basis_matrix
from .realset import gaps, invert
from .settings import (
    DEFAULT_QUAD_LEVELS,
    DEFAULT_QUAD_MAX_ORDER,
    DEFAULT_QUAD_ORDER,
    DEFAULT_QUAD_RTOL,
)

logger = logging.getLogger(__name__)


class _Infinity(object):
    """The point at infinity, as a critical point of a Green's function."""

    def __repr__(self):
        return "INFINITY"

    def __float__(self):
        return math.inf

    def __reduce__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinite(z):
    if z is INFINITY:
        return True
    try:
        return cmath.isinf(complex(z))
    except TypeError:
        return False


@functools.lru_cache(maxsize=None)
def _gauss_legendre(order):
    return np.polynomial.legendre.leggauss(order)


@functools.lru_cache(maxsize=128)
def _graded_rule(order, levels, ends):
    """
    Composite Gauss-Legendre rule on [0, 1]. Panels shrink geometrically
    toward 0 ("left") or toward both ends ("both"); "none" is a single panel.
    """
    if ends == "none":
        breaks = np.array([0.0, 1.0])
    else:
        left = np.concatenate([[0.0], 2.0 ** -np.arange(levels, 0, -1, dtype=float), [1.0]])
        if ends == "left":
            breaks = left
        else:
            half = 0.5 * left
            breaks = np.concatenate([half, 1.0 - half[-2::-1]])
    x, w = _gauss_legendre(order)
    a, b = breaks[:-1, None], breaks[1:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate(f, lo, hi, order=DEFAULT_QUAD_ORDER, levels=DEFAULT_QUAD_LEVELS, ends="both", rtol=DEFAULT_QUAD_RTOL, what="integral"):
    """
    Integral of a vectorized f over [lo, hi] on graded panels. The order is
    doubled until two successive values agree to rtol, measured against
    the integral of |f|.
    """

    def apply(n):
        u, w = _graded_rule(n, levels, ends)
        x = lo + (hi - lo) * u
        values = np.asarray(f(x))
        weights = (hi - lo) * w
        if values.ndim > 1:
            weights = weights[:, None]
        return np.sum(weights * values, axis=0), np.sum(weights * np.abs(values), axis=0)

    n = order
    previous, _ = apply(n)
    while True:
        n *= 2
        current, size = apply(n)
        if np.all(np.abs(current - previous) <= rtol * np.maximum(size, 1e-300)):
            return current
        if n >= DEFAULT_QUAD_MAX_ORDER:
            raise QuadratureError(
                "{0} did not settle at order {1}: change {2}".format(
                    what, n, np.max(np.abs(current - previous))
                )
            )
        previous = current


def _half_log_distance(t, points):
    """0.5 * sum log|t - p| over the given points, for each t."""
    t = np.asarray(t, dtype=float)
    if len(points) == 0:
        return np.zeros_like(t)
    return 0.5 * np.sum(np.log(np.abs(t[:, None] - np.asarray(points)[None, :])), axis=1)


def _others(endpoints, left, right):
    out = list(endpoints)
    out.remove(left)
    out.remove(right)
    return out


def _arc_integral(q_values, left, right, endpoints, theta=(0.0, math.pi), **kwargs):
    """
    Integral of F(t)/sqrt|w(t)| dt over the piece of [left, right] with
    t = mid + half cos(theta), theta in `theta`, where left and right are
    consecutive endpoints; F is given by `q_values(t)`.
    """
    mid, half = 0.5 * (left + right), 0.5 * (right - left)
    rest = _others(endpoints, left, right)

    def integrand(th):
        t = mid + half * np.cos(th)
        values = np.asarray(q_values(t))
        scale = np.exp(-_half_log_distance(t, rest))
        if values.ndim > 1:
            scale = scale[:, None]
        return values * scale

    return integrate(integrand, theta[0], theta[1], **kwargs)


@dataclass(frozen=True)
class GreenData:
    """
    Equilibrium data of a set: the density is |q(x)| / (pi sqrt|w(x)|)
    with w(t) = prod (t - a_i)(t - b_i) and q monic of degree m - 1.
    """

    set: object
    q: Polynomial
    q_roots: tuple
    capacity: float
    masses: tuple
    quadrature: int

    def to_dict(self):
        return {
            "intervals": self.set.to_list(),
            "capacity": self.capacity,
            "q_roots": list(self.q_roots),
            "band_masses": list(self.masses),
            "q": self.q.to_dict(),
        }


def _gap_moments(realset, gap, degree, order, levels):
    lo, hi = realset.hull
    return _arc_integral(
        lambda t: basis_matrix(t, degree, lo, hi),
        gap.left,
        gap.right,
        realset.endpoints,
        order=order,
        levels=levels,
        what="gap moment",
    )


def _monic_density_numerator(realset, order, levels):
    m = realset.m
    lo, hi = realset.hull
    if m == 1:
        return Polynomial.constant(1.0, lo, hi)
    bounded = gaps(realset)[:-1]
    moments = np.array([_gap_moments(realset, g, m - 1, order, levels) for g in bounded])
    try:
        beta = np.linalg.solve(moments[:, : m - 1], -moments[:, m - 1])
    except np.linalg.LinAlgError as e:
        raise QuadratureError("Gap conditions are singular: {0}".format(e))
    lead = (0.5 * (hi - lo)) ** (m - 1) / 2.0 ** (m - 2)
    return Polynomial(tuple(lead * b for b in beta) + (lead,), lo, hi)


def _capacity(realset, q, order, levels):
    """log C = log(x+ - o) - int_{x+}^inf (q/sqrt(w) - 1/(t - o)) dt."""
    top = realset.upper
    diam = realset.diameter
    origin = realset.lower - diam
    below = list(realset.endpoints[:-1])
    everything = list(realset.endpoints)

    def near(u):
        t = top + diam * u**2
        return 2.0 * math.sqrt(diam) * q(t) * np.exp(-_half_log_distance(t, below)) - 2.0 * diam * u / (
            t - origin
        )

    far_start = top + diam

    def far(v):
        t = far_start / v
        return (q(t) * np.exp(-_half_log_distance(t, everything)) - 1.0 / (t - origin)) * far_start / v**2

    head = integrate(near, 0.0, 1.0, order=order, levels=levels, ends="left", what="capacity")
    tail = integrate(far, 0.0, 1.0, order=order, levels=levels, ends="none", what="capacity tail")
    return math.exp(math.log(top - origin) - float(head) - float(tail))


@functools.lru_cache(maxsize=256)
def _equilibrium(realset, order, levels):
    q = _monic_density_numerator(realset, order, levels)

    masses = []
    for a, b in realset.intervals:
        mass = _arc_integral(
            lambda t: np.abs(q(t)), a, b, realset.endpoints, order=order, levels=levels, what="band mass"
        )
        masses.append(float(mass) / math.pi)
    total = sum(masses)
    if abs(total - 1.0) > 1e-6:
        raise QuadratureError("Equilibrium masses sum to {0!r}".format(total))
    if abs(total - 1.0) > 1e-10:
        logger.warning("Equilibrium masses sum to {0!r}".format(total))

    roots = []
    scale = max(abs(realset.lower), abs(realset.upper))
    for gap in gaps(realset)[:-1]:
        fl, fr = q(gap.left), q(gap.right)
        if fl * fr > 0:
            raise QuadratureError(
                "Density numerator keeps its sign on the gap ({0}, {1})".format(gap.left, gap.right)
            )
        roots.append(brentq(q, gap.left, gap.right, xtol=1e-15 * scale, rtol=4 * np.finfo(float).eps))

    capacity = _capacity(realset, q, order, levels)
    logger.debug("Equilibrium of {0}: capacity {1!r}".format(realset.to_list(), capacity))
    return GreenData(realset, q, tuple(roots), capacity, tuple(masses), order)


def equilibrium(realset, order=DEFAULT_QUAD_ORDER, levels=DEFAULT_QUAD_LEVELS):
    """Equilibrium measure, density numerator roots and capacity of the set."""
    return _equilibrium(realset, order, levels)


def gap_integral(gd, gap):
    """Residual of the gap condition: the integral of q/sqrt|w| across a bounded gap."""
    return float(
        _arc_integral(gd.q, gap.left, gap.right, gd.set.endpoints, order=gd.quadrature, what="gap integral")
    )


def density(gd, x):
    i = gd.set.component_of(x)
    if i is None:
        return 0.0
    w = np.exp(2 * _half_log_distance(np.array([float(x)]), gd.set.endpoints))[0]
    if w == 0:
        return math.inf
    return abs(gd.q(x)) / (math.pi * math.sqrt(w))


def harmonic_measure(gd, band):
    """Equilibrium mass of a band of the set, or of a sub-interval of one."""
    u, v = float(band[0]), float(band[1])
    tol = 1e-12 * gd.set.diameter
    if not u < v:
        raise InvalidInputError("Empty band [{0}, {1}]".format(u, v))
    for i, (a, b) in enumerate(gd.set.intervals):
        if a - tol <= u and v <= b + tol:
            break
    else:
        raise InvalidInputError("[{0}, {1}] is not inside the set".format(u, v))

    u, v = max(u, a), min(v, b)
    if u == a and v == b:
        return gd.masses[i]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    theta = (
        math.acos(min(1.0, max(-1.0, (v - mid) / half))),
        math.acos(min(1.0, max(-1.0, (u - mid) / half))),
    )
    value = _arc_integral(
        lambda t: np.abs(gd.q(t)), a, b, gd.set.endpoints, theta=theta, order=gd.quadrature, what="harmonic measure"
    )
    return float(value) / math.pi


def _sqrt_w(s, endpoints):
    """Branch of sqrt(w) analytic off the set, positive right of the set."""
    out = np.ones_like(s, dtype=complex)
    for e in endpoints:
        out = out * np.sqrt(s - e)
    return out


def green(gd, z):
    """
    Green's function of the complement of the set with pole at infinity,
    g(z) = Re of the integral of q/sqrt(w) from the nearest band endpoint.
    """
    if is_infinite(z):
        return math.inf
    z = complex(z)
    z = complex(z.real, abs(z.imag))
    if z.imag == 0 and gd.set.contains(z.real):
        logger.debug("green: {0} lies on the set".format(z.real))
        return 0.0

    endpoints = np.asarray(gd.set.endpoints)
    nearest = int(np.argmin(np.abs(z - endpoints)))
    start = float(endpoints[nearest])
    rest = np.delete(endpoints, nearest)
    delta = z - start
    # sqrt(s - start) = sqrt(delta) u on the path; u underflows to 0 near the endpoint
    factor = 2.0 * cmath.sqrt(delta)

    def integrand(u):
        s = start + delta * u**2
        return (gd.q(s) / _sqrt_w(s, rest) * factor).real

    value = integrate(integrand, 0.0, 1.0, order=gd.quadrature, what="Green's function")
    return abs(float(value))


@dataclass(frozen=True)
class PoleData:
    """
    Green's function with a finite pole x0, through the inverted set
    1/(x - x0). `critical_points` holds one point per gap of the set not
    containing x0; the one in the unbounded gap may be INFINITY.
    """

    base: GreenData
    x0: float
    critical_points: tuple
    critical_values: tuple
    pw: float
    g_at_x0: float
    at_infinity: bool

    def to_dict(self):
        return {
            "x0": self.x0,
            "critical_points": [
                "inf" if c is INFINITY else c for c in self.critical_points
            ],
            "critical_values": list(self.critical_values),
            "pw": self.pw,
            "g_at_x0": self.g_at_x0,
            "critical_point_at_infinity": self.at_infinity,
        }


def green_pole(realset, z, x0):
    """g(z, x0) = g_f(1/(z - x0)), f the set inverted about x0."""
    if not is_infinite(z) and complex(z) == complex(x0):
        raise InvalidInputError("g(z, x0) has its pole at z = x0 = {0}".format(x0))
    base = equilibrium(invert(realset, x0))
    if is_infinite(z):
        return green(base, 0.0)
    z = complex(z)
    if z.imag == 0 and realset.contains(z.real):
        return 0.0
    return green(base, 1.0 / (z - x0))


@functools.lru_cache(maxsize=256)
def _pole_data(realset, x0):
    base = equilibrium(invert(realset, x0))
    points, values = [], []
    at_infinity = False
    for c in base.q_roots:
        values.append(green(base, c))
        if abs(c) <= 1e-12 * base.set.diameter:
            points.append(INFINITY)
            at_infinity = True
        else:
            points.append(x0 + 1.0 / c)
    g0 = green(equilibrium(realset), x0)
    order = sorted(range(len(points)), key=lambda i: math.inf if points[i] is INFINITY else points[i])
    pw = float(sum(values))
    logger.debug("PW({0}, {1}) = {2!r}".format(realset.to_list(), x0, pw))
    return PoleData(
        base,
        x0,
        tuple(points[i] for i in order),
        tuple(values[i] for i in order),
        pw,
        g0,
        at_infinity,
    )


def pole_data(realset, x0):
    if realset.contains(x0):
        raise InvalidInputError("x0 = {0} lies on the set".format(x0))
    return _pole_data(realset, float(x0))


def critical_points(realset, x0):
    """Critical points of g(., x0): one per gap without x0, INFINITY included."""
    return list(pole_data(realset, x0).critical_points)


def pw_constant(realset, x0):
    """Sum of g(c, x0) over the critical points c of g(., x0)."""
    return pole_data(realset, x0).pw
