import json
import logging
import math
import os
from dataclasses import dataclass

from .exceptions import InvalidInputError
from .settings import DEFAULT_SET_TOL

logger = logging.getLogger(__name__)

BOUNDED = "bounded"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class RealSet:
    """
    A compact set of the real line stored as sorted, strictly disjoint,
    nondegenerate closed intervals. Build it with `validate_set`.
    """

    intervals: tuple

    @property
    def m(self):
        return len(self.intervals)

    @property
    def lower(self):
        return self.intervals[0][0]

    @property
    def upper(self):
        return self.intervals[-1][1]

    @property
    def hull(self):
        return (self.lower, self.upper)

    @property
    def diameter(self):
        return self.upper - self.lower

    @property
    def endpoints(self):
        return tuple(x for band in self.intervals for x in band)

    def component_of(self, x, tol=0.0):
        for i, (a, b) in enumerate(self.intervals):
            if a - tol <= x <= b + tol:
                return i
        return None

    def contains(self, x, tol=0.0):
        return self.component_of(x, tol=tol) is not None

    def to_list(self):
        return [[a, b] for a, b in self.intervals]


@dataclass(frozen=True)
class Gap:
    """
    A component of the complement of a RealSet in the extended line.
    For the unbounded gap, `left` is x₊ and `right` is x₋, so the gap is
    (left, ∞) ∪ {∞} ∪ (−∞, right).
    """

    kind: str
    left: float
    right: float
    index: int

    @property
    def bounded(self):
        return self.kind == BOUNDED

    @property
    def width(self):
        return self.right - self.left if self.bounded else math.inf

    def contains(self, x):
        if self.bounded:
            return self.left < x < self.right
        return x > self.left or x < self.right


@dataclass(frozen=True)
class NormalizedProblem:
    set: RealSet
    x0: float
    gap_index: object

    @property
    def gap(self):
        all_gaps = gaps(self.set)
        if self.gap_index == UNBOUNDED:
            return all_gaps[-1]
        return all_gaps[self.gap_index]

    @property
    def in_bounded_gap(self):
        return self.gap_index != UNBOUNDED

    @property
    def outside_hull(self):
        return self.x0 < self.set.lower or self.x0 > self.set.upper

    def to_dict(self):
        return {"intervals": self.set.to_list(), "x0": self.x0}


def _as_float(value, what):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError("{0} is not a number: {1!r}".format(what, value))
    if not math.isfinite(x):
        raise InvalidInputError("{0} must be finite, got {1!r}".format(what, value))
    return x


def validate_set(raw, tol=DEFAULT_SET_TOL):
    """
    Build a canonical RealSet from a list of [a, b] pairs.

    Overlapping or touching pairs (gap at most `tol`) are merged, so the
    result depends only on the point set, not on the input order.
    """
    pairs = list(raw) if raw is not None else []
    if not pairs:
        raise InvalidInputError("A set needs at least one interval.")

    cleaned = []
    for pair in pairs:
        try:
            a, b = pair
        except (TypeError, ValueError):
            raise InvalidInputError("Expected an [a, b] pair, got {0!r}".format(pair))
        a = _as_float(a, "Interval endpoint")
        b = _as_float(b, "Interval endpoint")
        if a > b:
            raise InvalidInputError(
                "Interval [{0}, {1}] has its endpoints reversed.".format(a, b)
            )
        cleaned.append((a, b))

    cleaned.sort()
    merged = [list(cleaned[0])]
    for a, b in cleaned[1:]:
        if a <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])

    for a, b in merged:
        if a >= b:
            raise InvalidInputError(
                "Interval [{0}, {1}] is a single point; the set must be non-polar.".format(
                    a, b
                )
            )

    return RealSet(tuple((a, b) for a, b in merged))


def gaps(realset):
    """Bounded gaps left to right, then the unbounded gap."""
    out = []
    for i in range(realset.m - 1):
        out.append(
            Gap(BOUNDED, realset.intervals[i][1], realset.intervals[i + 1][0], i)
        )
    out.append(Gap(UNBOUNDED, realset.upper, realset.lower, realset.m - 1))
    return out


def gap_of(realset, x):
    """The gap containing x (±inf belong to the unbounded gap), or None for x in the set."""
    if math.isinf(x) or x > realset.upper or x < realset.lower:
        return gaps(realset)[-1]
    for gap in gaps(realset)[:-1]:
        if gap.contains(x):
            return gap
    return None


def locate(realset, x0, tol=DEFAULT_SET_TOL):
    x0 = _as_float(x0, "x0")
    if realset.contains(x0, tol=tol):
        raise InvalidInputError(
            "x0 = {0} lies in the set {1}; it must lie in a gap.".format(
                x0, realset.to_list()
            )
        )
    gap = gap_of(realset, x0)
    gap_index = gap.index if gap.bounded else UNBOUNDED
    logger.debug("x0 = {0} located in {1} gap {2}".format(x0, gap.kind, gap_index))
    return NormalizedProblem(realset, x0, gap_index)


def affine(realset, scale, shift):
    """Image of the set under x -> scale*x + shift."""
    scale = _as_float(scale, "scale")
    shift = _as_float(shift, "shift")
    if scale == 0:
        raise InvalidInputError("An affine image needs a nonzero scale.")
    return validate_set(
        [(scale * a + shift, scale * b + shift) for a, b in realset.intervals]
        if scale > 0
        else [(scale * b + shift, scale * a + shift) for a, b in realset.intervals]
    )


def invert(realset, x0):
    """The set {1/(x - x0) : x in realset}, interval by interval."""
    if realset.contains(x0):
        raise InvalidInputError("Cannot invert about a point of the set.")
    return validate_set(
        [(1.0 / (b - x0), 1.0 / (a - x0)) for a, b in realset.intervals]
    )


def load_set_spec(spec, tol=DEFAULT_SET_TOL):
    """A set spec as (RealSet, x0 or None); see load_problem for the accepted forms."""
    if isinstance(spec, str):
        if os.path.exists(spec):
            try:
                with open(spec) as f:
                    data = json.load(f)
            except (OSError, ValueError) as e:
                raise InvalidInputError("Could not read set file {0}: {1}".format(spec, e))
        else:
            try:
                data = json.loads(spec)
            except ValueError as e:
                raise InvalidInputError("Set spec is neither a file nor JSON: {0}".format(e))
    else:
        data = spec

    if not isinstance(data, dict) or "intervals" not in data:
        raise InvalidInputError('Set spec must be an object with an "intervals" key.')

    return validate_set(data["intervals"], tol=tol), data.get("x0")


def load_problem(spec, x0=None, tol=DEFAULT_SET_TOL):
    """
    Read a problem from a mapping, an inline JSON string or a JSON file.

    Parameters:
    - spec: {"intervals": [[a, b], ...], "x0": number}, as a dict, as
      JSON text, or as a path to a file holding that JSON
    - x0: optional override for the file's x0
    - tol: merge/membership tolerance passed to validate_set and locate
    """
    realset, given = load_set_spec(spec, tol=tol)
    point: float = x0 if x0 is not None else given
    if point is None:
        raise InvalidInputError("No x0 given, neither in the set spec nor as an option.")
    return locate(realset, point, tol=tol)
