import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .exceptions import ConvergenceError, InvariantViolation
from .poly import real_roots
from .potential import (
    INFINITY,
    equilibrium,
    green,
    green_pole,
    harmonic_measure,
    integrate,
    is_infinite,
)
from .realset import gaps, validate_set
from .settings import DEFAULT_TOUCH_RTOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BandSet:
    """
    The preimage of [-level, level] under a polynomial of degree d_n:
    d_n closed bands, sorted, consecutive bands possibly touching.
    """

    intervals: tuple
    d_n: int
    level: float
    source: object = field(default=None, compare=False, repr=False)

    @property
    def degenerate(self):
        return self.d_n == 0

    @property
    def realset(self):
        """The bands as a RealSet, touching bands merged."""
        if self.degenerate:
            return None
        diam = self.intervals[-1][1] - self.intervals[0][0]
        return validate_set(self.intervals, tol=1e-9 * diam)

    def to_dict(self):
        return {
            "d_n": self.d_n,
            "level": self.level,
            "bands": [list(b) for b in self.intervals],
        }


def _root_on_segment(poly, target, left, right, span):
    """The x in [left, right] with poly(x) = target; poly is monotone there. None means unbounded."""
    f = lambda x: poly(x) - target
    if left is None:
        step = span
        left = right - step
        while f(left) * f(right) > 0:
            step *= 2
            left = right - step
            if not math.isfinite(left):
                raise InvariantViolation("No preimage of {0!r} to the left".format(target))
    if right is None:
        step = span
        right = left + step
        while f(left) * f(right) > 0:
            step *= 2
            right = left + step
            if not math.isfinite(right):
                raise InvariantViolation("No preimage of {0!r} to the right".format(target))
    fl, fr = f(left), f(right)
    if fl == 0:
        return left
    if fr == 0:
        return right
    if fl * fr > 0:
        return left if abs(fl) < abs(fr) else right
    return brentq(f, left, right, xtol=1e-15 * max(1.0, abs(left), abs(right)), rtol=4 * np.finfo(float).eps)


def preimage(poly, level, touch_rtol=DEFAULT_TOUCH_RTOL, source=None):
    """
    The bands poly^{-1}([-level, level]) of a real polynomial whose critical
    values all have modulus at least `level`. Critical values within
    touch_rtol of the level give touching bands.
    """
    p = poly.truncate()
    d = p.degree
    if d == 0:
        return BandSet((), 0, level, source)

    crit = real_roots(p.derivative()) if d >= 2 else []
    if len(crit) != d - 1:
        raise InvariantViolation(
            "A degree {0} polynomial with {1} real critical points has no full preimage".format(
                d, len(crit)
            )
        )
    values = [abs(p(c)) for c in crit]
    for c, v in zip(crit, values):
        if v < level * (1 - touch_rtol):
            raise InvariantViolation(
                "Critical value {0!r} at {1!r} is below the level {2!r}".format(v, c, level)
            )

    if d == 1:
        c0, c1 = p.coeffs[0], p.coeffs[1]
        ends = [p.midpoint + p.halfwidth * (target - c0) / c1 for target in (-level, level)]
        return BandSet(((min(ends), max(ends)),), 1, level, source)

    touching = [abs(v - level) <= touch_rtol * level for v in values]
    span = max(1.0, p.halfwidth)
    cuts = [None] + list(crit) + [None]
    bands = []
    for i in range(d):
        left, right = cuts[i], cuts[i + 1]
        ends = []
        for target in (-level, level):
            if left is not None and touching[i - 1] and abs(p(left) - target) <= touch_rtol * level:
                ends.append(left)
            elif right is not None and touching[i] and abs(p(right) - target) <= touch_rtol * level:
                ends.append(right)
            else:
                ends.append(_root_on_segment(p, target, left, right, span))
        bands.append((min(ends), max(ends)))
    logger.debug("preimage: {0} bands at level {1!r}".format(d, level))
    return BandSet(tuple(bands), d, level, source)


def band_set(sol):
    """The period-d_n set R^{-1}([-r, r]) of a residual polynomial."""
    touch_rtol = max(DEFAULT_TOUCH_RTOL, 10 * sol.levelling_defect)
    return preimage(sol.poly, sol.r, touch_rtol=touch_rtol, source=sol)


def green_period(sol, z):
    """Closed-form Green's function of the period set: |Re arccosh(R(z)/r)| / d_n."""
    if sol.d_n == 0:
        return 0.0
    if is_infinite(z):
        return math.inf
    w = complex(sol.poly(complex(z))) / sol.r
    return abs(np.arccosh(w).real) / sol.d_n


def norm_identity(sol, gd_n=None):
    """
    |r - 1/cosh(d_n g_n(x0))|. With gd_n (equilibrium data of the period
    set) g_n comes from the general potential solver instead of the closed form.
    """
    if sol.d_n == 0:
        logger.debug("norm identity skipped for d_n = 0")
        return 0.0
    g = green(gd_n, sol.x0) if gd_n is not None else green_period(sol, sol.x0)
    return abs(sol.r - 1.0 / math.cosh(sol.d_n * g))


def band_invariants(bs, prob):
    """Containment of the set, avoidance of the x0 gap, at most one band per gap."""
    if bs.degenerate:
        return {"contains_set": True, "avoids_x0_gap": True, "one_band_per_gap": True}
    realset = prob.set
    tol = 1e-9 * realset.diameter
    contains = all(
        any(u - tol <= a and b <= v + tol for u, v in bs.realset.intervals) for a, b in realset.intervals
    )
    per_gap = [len({i for _, _, i in _pieces_in_gap(bs, g, tol)}) for g in gaps(realset)]
    x0_pieces = _pieces_in_gap(bs, prob.gap, tol)
    return {
        "contains_set": contains,
        "avoids_x0_gap": not x0_pieces,
        "one_band_per_gap": all(count <= 1 for count in per_gap),
    }


def _pieces_in_gap(bs, gap, tol=0.0):
    """Pieces of the bands strictly inside a gap, as (u, v, band index)."""
    pieces = []
    for i, (u, v) in enumerate(bs.intervals):
        if gap.bounded:
            lo, hi = max(u, gap.left), min(v, gap.right)
            if hi - lo > tol:
                pieces.append((lo, hi, i))
        else:
            if v - max(u, gap.left) > tol:
                pieces.append((max(u, gap.left), v, i))
            if min(v, gap.right) - u > tol:
                pieces.append((u, min(v, gap.right), i))
    return pieces


def band_measures(bs):
    """Harmonic measure of every band, computed on the period set itself."""
    if bs.degenerate:
        return []
    gd = equilibrium(bs.realset)
    return [harmonic_measure(gd, band) for band in bs.intervals]


def gap_measures(bs, realset):
    """Equilibrium mass of the period set that falls in each gap of `realset`."""
    out = []
    if bs.degenerate:
        return [0.0 for _ in gaps(realset)]
    gd = equilibrium(bs.realset)
    tol = 1e-12 * realset.diameter
    for gap in gaps(realset):
        out.append(sum(harmonic_measure(gd, (u, v)) for u, v, _ in _pieces_in_gap(bs, gap, tol)))
    if any(mass > 1.0 / bs.d_n + 1e-6 for mass in out):
        raise InvariantViolation("A gap carries more than 1/d_n of the period set's mass: {0}".format(out))
    return out


def gap_zeros(sol, realset):
    """The zero of R in each gap (bounded gaps first, then the unbounded one), or None."""
    all_gaps = gaps(realset)
    out = [None] * len(all_gaps)
    p = sol.poly.truncate()
    if p.degree == 0:
        return out
    for root in real_roots(p):
        if realset.contains(root):
            continue
        for i, gap in enumerate(all_gaps):
            if gap.contains(root):
                if out[i] is not None:
                    raise InvariantViolation(
                        "Two zeros of R in one gap: {0!r} and {1!r}".format(out[i], root)
                    )
                out[i] = root
    return out


@dataclass(frozen=True)
class WidomRecord:
    n: int
    d_n: int
    r: float
    W_n: float
    lower: float
    upper: float
    g_at_x0: float
    pw: float
    norm_defect: float
    norm_identity_skipped: bool
    lower_attained: bool
    exp_bound_ok: bool
    cosh_bound_ok: bool
    within_bounds: bool
    gap_zeros: tuple
    band_set: BandSet = field(compare=False, repr=False)

    def to_row(self):
        zeros = ";".join("" if z is None else repr(z) for z in self.gap_zeros)
        return [self.n, self.d_n, self.r, self.W_n, self.lower, self.upper, zeros, self.norm_defect]

    def to_dict(self):
        return {
            "n": self.n,
            "d_n": self.d_n,
            "r": self.r,
            "W_n": self.W_n,
            "lower": self.lower,
            "upper": self.upper,
            "g_at_x0": self.g_at_x0,
            "pw": self.pw,
            "norm_defect": self.norm_defect,
            "norm_identity_skipped": self.norm_identity_skipped,
            "lower_attained": self.lower_attained,
            "exp_bound_ok": self.exp_bound_ok,
            "cosh_bound_ok": self.cosh_bound_ok,
            "within_bounds": self.within_bounds,
            "gap_zeros": list(self.gap_zeros),
            "bands": self.band_set.to_dict(),
        }


CSV_COLUMNS = ["n", "d_n", "r", "W_n", "lower", "upper", "gap_zeros", "defect"]


def widom_log(r, n, g):
    """log of r (e^{ng} + e^{-ng})."""
    return math.log(r) + n * g + math.log1p(math.exp(-2 * n * g))


def widom_factor(prob, sol, pd):
    """
    Widom factor W_n = r (e^{ng} + e^{-ng}) with g = g(x0) of the set
    itself, against the bounds 2 <= W_n <= 2 exp(PW).
    """
    if not sol.converged:
        raise ConvergenceError(
            "Degree {0} solution is not levelled (defect {1:.3e}); no Widom factor".format(
                sol.n, sol.levelling_defect
            )
        )
    n, g, r = sol.n, pd.g_at_x0, sol.r
    W = math.exp(widom_log(r, n, g))
    upper = 2.0 * math.exp(pd.pw)
    bands = band_set(sol)
    skipped = sol.d_n == 0
    defect = norm_identity(sol)

    tol = 1e-9 * prob.set.diameter
    lower_attained = (
        sol.d_n == n
        and not bands.degenerate
        and bands.realset.m == prob.set.m
        and all(
            abs(u - a) <= tol and abs(v - b) <= tol
            for (u, v), (a, b) in zip(bands.realset.intervals, prob.set.intervals)
        )
    )
    record = WidomRecord(
        n=n,
        d_n=sol.d_n,
        r=r,
        W_n=W,
        lower=2.0,
        upper=upper,
        g_at_x0=g,
        pw=pd.pw,
        norm_defect=defect,
        norm_identity_skipped=skipped,
        lower_attained=lower_attained,
        exp_bound_ok=math.log(r) >= -n * g - 1e-9,
        cosh_bound_ok=W >= 2.0 - 1e-8,
        within_bounds=2.0 - 1e-8 <= W <= upper + 1e-8,
        gap_zeros=tuple(gap_zeros(sol, prob.set)),
        band_set=bands,
    )
    if not record.within_bounds:
        logger.warning("W_{0} = {1!r} is outside [2, {2!r}]".format(n, W, upper))
    return record


def gap_contributions(sol, pd, bs=None):
    """
    d_n times the integral of g(x, x0) against the period set's equilibrium
    measure over the part of the period set inside each gap. Returns the
    per-gap values (gaps ordered as `gaps`, the x0 gap reported as 0) and the
    defect of their sum against d_n (g(x0) - g_n(x0)).
    """
    realset, x0 = sol.realset, sol.x0
    bs = band_set(sol) if bs is None else bs
    all_gaps = gaps(realset)
    if bs.degenerate:
        return [0.0] * len(all_gaps), 0.0
    gd_n = equilibrium(bs.realset)
    rest = bs.realset.endpoints
    out = []
    for gap in all_gaps:
        total = 0.0
        for u, v, _ in _pieces_in_gap(bs, gap, 1e-12 * realset.diameter):
            a, b = next((a, b) for a, b in bs.realset.intervals if a <= u and v <= b)
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            others = [e for e in rest if e not in (a, b)]

            def integrand(theta):
                t = mid + half * np.cos(theta)
                g = np.array([green_pole(realset, x, x0) for x in t])
                scale = np.exp(-0.5 * np.sum(np.log(np.abs(t[:, None] - np.asarray(others)[None, :])), axis=1)) if others else 1.0
                return g * np.abs(gd_n.q(t)) * scale

            lo = math.acos(min(1.0, max(-1.0, (v - mid) / half)))
            hi = math.acos(min(1.0, max(-1.0, (u - mid) / half)))
            total += float(integrate(integrand, lo, hi, order=8, levels=10, rtol=1e-6, what="gap contribution")) / math.pi
        out.append(sol.d_n * total)
    expected = sol.d_n * (pd.g_at_x0 - green_period(sol, x0))
    return out, abs(sum(out) - expected)


@dataclass(frozen=True)
class GapSaturation:
    gap_index: int
    kind: str
    critical_point: object
    present_fraction: float
    distance_to_critical: float
    distance_to_edge: float
    shrink_rate: float
    classification: str

    def to_dict(self):
        return {
            "gap_index": self.gap_index,
            "kind": self.kind,
            "critical_point": "inf" if self.critical_point is INFINITY else self.critical_point,
            "present_fraction": self.present_fraction,
            "distance_to_critical": self.distance_to_critical,
            "distance_to_edge": self.distance_to_edge,
            "shrink_rate": self.shrink_rate,
            "classification": self.classification,
        }


@dataclass(frozen=True)
class SaturationReport:
    gaps: tuple
    overall: str
    liminf_est: float
    limsup_est: float

    def to_dict(self):
        return {
            "gaps": [g.to_dict() for g in self.gaps],
            "overall": self.overall,
            "liminf_est": self.liminf_est,
            "limsup_est": self.limsup_est,
        }


UPPER = "upper"
LOWER = "lower"
UNDETERMINED = "undetermined"


def _inverted(x, x0):
    return 0.0 if x is INFINITY else 1.0 / (x - x0)


def saturation_diagnostics(records, pd, realset, near=0.05):
    """
    Classify each gap without x0 by the behaviour of R's zeros over the
    given records, in coordinates 1/(x - x0) where the unbounded gap is a
    bounded interval and a zero at infinity sits at 0. Zeros settling on
    the critical point read as "upper", zeros absent or drifting to the
    edges read as "lower", anything else as "undetermined".
    """
    records = sorted(records, key=lambda rec: rec.n)
    tail = records[len(records) // 2 :] or records
    x0 = pd.x0
    all_gaps = gaps(realset)
    x0_gap = next(i for i, g in enumerate(all_gaps) if g.contains(x0))
    other_gaps = [i for i in range(len(all_gaps)) if i != x0_gap]
    critical = {_gap_position(all_gaps, c): c for c in pd.critical_points}

    out = []
    for i in other_gaps:
        gap = all_gaps[i]
        c = critical.get(i)
        edges = sorted((_inverted(gap.left, x0), _inverted(gap.right, x0)))
        width = edges[1] - edges[0]
        zc = _inverted(c, x0) if c is not None else None

        zeros = []
        for rec in tail:
            z = rec.gap_zeros[i]
            if z is None and not gap.bounded and rec.d_n == rec.n - 1 and rec.n >= 1:
                z = INFINITY
            zeros.append(None if z is None else _inverted(z, x0))
        present = [z for z in zeros if z is not None]
        fraction = len(present) / len(zeros) if zeros else 0.0

        to_crit = to_edge = None
        if present and zc is not None:
            to_crit = float(np.median([abs(z - zc) / width for z in present]))
        if present:
            to_edge = float(np.median([min(abs(z - edges[0]), abs(edges[1] - z)) / width for z in present]))

        widths = [
            (rec.n, v - u)
            for rec in records
            for u, v, _ in _pieces_in_gap(rec.band_set, gap)
            if not rec.band_set.degenerate and v > u
        ]
        rate = None
        if len(widths) >= 3:
            ns, ws = zip(*widths)
            rate = float(np.polyfit(ns, np.log(ws), 1)[0])

        if fraction == 1.0 and to_crit is not None and to_crit <= near:
            kind = UPPER
        elif fraction == 0.0 or (to_edge is not None and to_edge <= near and fraction < 1.0):
            kind = LOWER
        else:
            kind = UNDETERMINED
        out.append(GapSaturation(i, gap.kind, c, fraction, to_crit, to_edge, rate, kind))

    kinds = {g.classification for g in out}
    overall = kinds.pop() if len(kinds) == 1 else UNDETERMINED
    if not out:
        overall = LOWER
    values = [rec.W_n for rec in tail]
    return SaturationReport(tuple(out), overall, min(values), max(values))


def _gap_position(all_gaps, c):
    if c is INFINITY:
        return len(all_gaps) - 1
    for i, gap in enumerate(all_gaps):
        if gap.contains(c):
            return i
    return len(all_gaps)
