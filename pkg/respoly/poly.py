import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import Polynomial as PowerSeries
from numpy.polynomial import chebyshev as chebmod

from .exceptions import InvalidInputError, RootIsolationError
from .settings import (
    DEFAULT_DEGREE_THRESHOLD,
    DEFAULT_IMAG_TOL,
    DEFAULT_MAX_POLISH_STEPS,
    DEFAULT_ROOT_RTOL,
)

logger = logging.getLogger(__name__)


def effective_degree(coeffs, threshold=DEFAULT_DEGREE_THRESHOLD):
    """Index of the last coefficient above threshold * max|c|."""
    c = np.abs(np.asarray(coeffs, dtype=float))
    if c.size == 0 or c.max() == 0:
        return 0
    above = np.nonzero(c > threshold * c.max())[0]
    return int(above[-1])


@dataclass(frozen=True)
class Polynomial:
    """
    A real polynomial in the Chebyshev basis of [lower, upper]:
    p(x) = sum c_i C_i((2x - lower - upper) / (upper - lower)).
    """

    coeffs: tuple
    lower: float
    upper: float

    @classmethod
    def on(cls, realset, coeffs):
        return cls(tuple(float(c) for c in coeffs), realset.lower, realset.upper)

    @classmethod
    def constant(cls, value, lower, upper):
        return cls((float(value),), lower, upper)

    @classmethod
    def from_monomial(cls, coeffs, lower, upper):
        """From power-basis coefficients [a_0, a_1, ...] in x."""
        series = PowerSeries(coeffs).convert(kind=Chebyshev, domain=[lower, upper])
        return cls(tuple(float(c) for c in series.coef), lower, upper)

    @property
    def series(self):
        return Chebyshev(self.coeffs, domain=[self.lower, self.upper])

    @property
    def degree(self):
        return effective_degree(self.coeffs)

    @property
    def halfwidth(self):
        return 0.5 * (self.upper - self.lower)

    @property
    def midpoint(self):
        return 0.5 * (self.upper + self.lower)

    def __call__(self, x):
        value = self.series(x)
        if np.ndim(value) == 0:
            return complex(value) if np.iscomplexobj(value) else float(value)
        return value

    def mapped(self, x):
        return (np.asarray(x) - self.midpoint) / self.halfwidth

    def derivative(self):
        return Polynomial(
            tuple(float(c) for c in self.series.deriv().coef), self.lower, self.upper
        )

    def truncate(self, degree=None):
        degree = self.degree if degree is None else degree
        return Polynomial(self.coeffs[: degree + 1], self.lower, self.upper)

    def scale(self, factor):
        return Polynomial(
            tuple(factor * c for c in self.coeffs), self.lower, self.upper
        )

    def padded(self, length):
        extra = max(0, length - len(self.coeffs))
        return Polynomial(self.coeffs + (0.0,) * extra, self.lower, self.upper)

    def to_monomial(self):
        return self.series.convert(kind=PowerSeries).coef

    @property
    def leading_coefficient(self):
        """Power-basis coefficient of x**degree."""
        d = self.degree
        if d == 0:
            return self.coeffs[0]
        return self.coeffs[d] * 2.0 ** (d - 1) / self.halfwidth**d

    def magnitude(self):
        """Bound for |p| on the hull, used as the local scale of values."""
        return float(np.sum(np.abs(self.coeffs)))

    def to_dict(self):
        return {
            "basis": "chebyshev",
            "hull": [self.lower, self.upper],
            "coefficients": list(self.coeffs),
            "degree": self.degree,
        }


def basis_matrix(x, degree, lower, upper):
    """Rows [phi_0(x_j), ..., phi_degree(x_j)] for the hull Chebyshev basis."""
    t = (2.0 * np.asarray(x, dtype=float) - lower - upper) / (upper - lower)
    return chebmod.chebvander(t, degree)


def cheb_classical(n, x):
    """C_n(x) by the three-term recurrence C_{k+1} = 2x C_k - C_{k-1}."""
    if int(n) != n or n < 0:
        raise InvalidInputError("Chebyshev index must be a nonnegative integer, got {0}".format(n))
    x = x if np.isscalar(x) else np.asarray(x)
    previous, current = 1.0 + 0.0 * x, x
    if n == 0:
        return previous
    for _ in range(int(n) - 1):
        previous, current = current, 2.0 * x * current - previous
    return current


def _polish(p, dp, a, b, rtol, floor, max_steps=DEFAULT_MAX_POLISH_STEPS):
    """
    Safeguarded Newton on every bracket [a_i, b_i] at once. Each bracket
    must hold a sign change; a Newton step that leaves it is replaced by
    bisection.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    fa = p(a)
    x = 0.5 * (a + b)
    done = np.zeros(a.shape, dtype=bool)
    for _ in range(max_steps):
        fx = np.atleast_1d(p(x))
        dfx = np.atleast_1d(dp(x))
        hit = fx == 0
        same = np.sign(fx) == np.sign(fa)
        a = np.where(same & ~done, x, a)
        fa = np.where(same & ~done, fx, fa)
        b = np.where(~same & ~done, x, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dfx != 0, x - fx / dfx, np.nan)
        inside = np.isfinite(step) & (step > a) & (step < b)
        new_x = np.where(inside, step, 0.5 * (a + b))
        tol = rtol * np.maximum(np.abs(new_x), floor)
        finished = hit | (np.abs(new_x - x) <= tol) | (b - a <= tol)
        x = np.where(done | hit, x, new_x)
        done = done | finished
        if done.all():
            break
    return x


def _scan(p, a, b, points):
    """Sign-change brackets of p on a uniform grid over [a, b]."""
    grid = np.linspace(a, b, points)
    values = p(grid)
    brackets = []
    for i in range(points - 1):
        if values[i] == 0:
            brackets.append((grid[i], grid[i]))
        elif values[i] * values[i + 1] < 0:
            brackets.append((grid[i], grid[i + 1]))
    if values[-1] == 0:
        brackets.append((grid[-1], grid[-1]))
    return brackets


def real_roots(p, window=None, rtol=DEFAULT_ROOT_RTOL, imag_tol=DEFAULT_IMAG_TOL):
    """
    All real roots of p in `window`, sorted.

    Candidates come from the eigenvalues of the colleague matrix; each one
    is then bracketed by a sign change and polished with bisection-safeguarded
    Newton. Roots are assumed simple. A candidate where p is numerically
    zero but no sign change can be resolved on a refined grid raises
    RootIsolationError instead of being dropped.
    """
    q = p.truncate()
    if q.degree < 1:
        raise InvalidInputError("real_roots needs a polynomial of degree >= 1.")

    scale = max(q.halfwidth, abs(q.midpoint))
    candidates = q.series.roots()
    real = sorted(
        c.real
        for c in np.atleast_1d(candidates)
        if abs(c.imag) <= imag_tol * max(scale, abs(c))
    )
    if not real:
        return []

    if window is None:
        spread = real[-1] - real[0]
        pad = 1e-3 * (spread + q.halfwidth)
        lo, hi = real[0] - pad, real[-1] + pad
    else:
        lo, hi = float(window[0]), float(window[1])
        if not lo < hi:
            raise InvalidInputError("Empty root window [{0}, {1}].".format(lo, hi))

    unique = [real[0]]
    for c in real[1:]:
        if c - unique[-1] > 1e-12 * scale:
            unique.append(c)
    cuts = [lo] + [0.5 * (u + v) for u, v in zip(unique, unique[1:])] + [hi]

    dp = q.derivative()
    noise = 1e-9 * q.magnitude()
    brackets, exact = [], []
    for c, left, right in zip(unique, cuts, cuts[1:]):
        left, right = max(left, lo), min(right, hi)
        if left >= right:
            continue
        fl, fr = q(left), q(right)
        if fl == 0:
            exact.append(left)
        if fr == 0:
            exact.append(right)
        if fl * fr < 0:
            brackets.append((left, right))
            continue
        if fl == 0 or fr == 0 or not left <= c <= right:
            continue
        if abs(q(c)) > noise:
            # a complex pair with a small imaginary part
            continue
        found = []
        for points in (65, 257, 1025, 4097):
            found = _scan(q, left, right, points)
            if found:
                break
        if not found:
            raise RootIsolationError(
                "Could not separate a root of a degree {0} polynomial near {1}".format(
                    q.degree, c
                ),
                diagnostic={"candidate": c, "value": q(c), "bracket": [left, right]},
            )
        for u, v in found:
            if u == v:
                exact.append(u)
            else:
                brackets.append((u, v))

    roots = list(exact)
    if brackets:
        a, b = zip(*brackets)
        roots.extend(float(x) for x in _polish(q, dp, a, b, rtol, floor=1e-3 * scale))

    roots.sort()
    out = []
    for x in roots:
        if not out or x - out[-1] > 1e-12 * scale:
            out.append(float(x))
    logger.debug("real_roots: {0} roots in [{1}, {2}]".format(len(out), lo, hi))
    return out


def critical_points(p, window=None):
    """Real roots of p' (none when p is affine or constant)."""
    if p.degree < 2:
        return []
    return real_roots(p.derivative(), window=window)
