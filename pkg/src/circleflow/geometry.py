"""Exact geometry on circles R/lZ.

Positions are ``Fraction`` values in ``[0, l)``.  Floats are tolerated so
that maps with flow-chart pieces can reuse the same helpers, but nothing in
this module introduces floating point on its own.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Real
from typing import Iterable, Sequence

Number = Real  # Fraction for exact data, float for numeric flow pieces


def as_number(x) -> Number:
    """Coerce ints and ``"p/q"`` strings to ``Fraction``; leave floats alone."""
    if isinstance(x, float):
        return x
    if isinstance(x, (Fraction, int, str)):
        return Fraction(x)
    if isinstance(x, Real):
        return Fraction(x)
    raise TypeError(f"not a real number: {x!r}")


def reduce(x: Number, l: Number) -> Number:
    return x % l


def cdist(x: Number, y: Number, l: Number) -> Number:
    """Circle distance between raw positions on R/lZ."""
    r = (x - y) % l
    return min(r, l - r)


@dataclass(frozen=True)
class CirclePoint:
    pos: Number
    length: Number = Fraction(1)

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("circle length must be positive")
        object.__setattr__(self, "pos", as_number(self.pos) % self.length)

    def __add__(self, delta) -> "CirclePoint":
        return CirclePoint(self.pos + delta, self.length)


def circle_dist(x: CirclePoint, y: CirclePoint) -> Number:
    if x.length != y.length:
        raise ValueError(f"points on different circles ({x.length} vs {y.length})")
    return cdist(x.pos, y.pos, x.length)


@dataclass(frozen=True)
class Arc:
    """Arc of ``length`` starting at ``start`` and running counterclockwise.

    An arc of length ``l`` is the whole circle whatever the flags say.
    """

    start: CirclePoint
    length: Number
    incl_start: bool = True
    incl_end: bool = False

    def __post_init__(self):
        if not 0 < self.length <= self.start.length:
            raise ValueError(f"arc length {self.length} outside (0, {self.start.length}]")

    @classmethod
    def between(cls, a, b, l=Fraction(1), incl_start=True, incl_end=False) -> "Arc":
        """The arc from ``a`` to ``b`` counterclockwise; ``a == b`` gives the full circle."""
        a, b = as_number(a), as_number(b)
        length = (b - a) % l
        return cls(CirclePoint(a, l), length if length else l, incl_start, incl_end)

    @classmethod
    def full(cls, l=Fraction(1)) -> "Arc":
        return cls(CirclePoint(0, l), as_number(l))

    @property
    def circle(self) -> Number:
        return self.start.length

    @property
    def is_full(self) -> bool:
        return self.length == self.circle

    @property
    def end(self) -> CirclePoint:
        return self.start + self.length

    @property
    def midpoint(self) -> CirclePoint:
        return self.start + self.length / 2

    def contains(self, x) -> bool:
        pos = x.pos if isinstance(x, CirclePoint) else as_number(x)
        if self.is_full:
            return True
        off = (pos - self.start.pos) % self.circle
        if off == 0:
            return self.incl_start
        if off < self.length:
            return True
        if off == self.length:
            return self.incl_end
        return False

    __contains__ = contains

    def __repr__(self):
        lb = "[" if self.incl_start else "("
        rb = "]" if self.incl_end else ")"
        return f"{lb}{self.start.pos}, {self.end.pos}{rb}_{self.circle}"


def arc_measure(a: Arc) -> Number:
    return a.length


def half_interval(a: Arc, side: str) -> Arc:
    """Left or right half of a proper arc.

    The outer end keeps the bracket of ``a``.  The midpoint takes the bracket
    of the opposite end of ``a``, so ``[a,b)_+ = [m, b)`` and ``(a,b]_- = (a, m]``.
    """
    if a.is_full:
        raise ValueError("half-interval of the full circle is undefined")
    half = a.length / 2
    if side in ("right", "+"):
        return Arc(a.midpoint, half, a.incl_start, a.incl_end)
    if side in ("left", "-"):
        return Arc(a.start, half, a.incl_start, a.incl_end)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def ball(p: CirclePoint, delta) -> Arc:
    """Open ball ``{x : d(x, p) < delta}``."""
    delta = as_number(delta)
    if not 0 < delta < p.length / 2:
        raise ValueError(f"radius {delta} outside (0, {p.length / 2})")
    return Arc(p + (-delta), 2 * delta, False, False)


def _ball_with(p, delta, incl_start, incl_end) -> Arc:
    b = ball(p, delta)
    return Arc(b.start, b.length, incl_start, incl_end)


def ball_plus(p: CirclePoint, delta) -> Arc:
    return half_interval(_ball_with(p, delta, True, False), "right")


def ball_star_plus(p: CirclePoint, delta) -> Arc:
    return half_interval(ball(p, delta), "right")


def ball_minus(p: CirclePoint, delta) -> Arc:
    return half_interval(_ball_with(p, delta, False, True), "left")


def ball_star_minus(p: CirclePoint, delta) -> Arc:
    return half_interval(ball(p, delta), "left")


def _positions(points: Sequence) -> tuple[list, Number]:
    if not points:
        raise ValueError("empty tuple")
    if isinstance(points[0], CirclePoint):
        l = points[0].length
        if any(p.length != l for p in points):
            raise ValueError("points on different circles")
        return [p.pos for p in points], l
    return [as_number(p) % 1 for p in points], Fraction(1)


def is_ordered_tuple(points: Sequence, l=None) -> bool:
    """Whether the points run strictly counterclockwise starting from the first."""
    pos, circle = _positions(points)
    if l is not None:
        circle = as_number(l)
        pos = [p % circle for p in pos]
    if len(pos) < 3:
        raise ValueError("ordered tuples need at least 3 points")
    if len(set(pos)) != len(pos):
        raise ValueError("duplicate points")
    x0 = pos[0]
    lifts = [(p - x0) % circle for p in pos]
    return all(u < v for u, v in zip(lifts, lifts[1:]))


def is_ordered_tuple_bruteforce(points: Sequence, l=None) -> bool:
    """Check every 3-subtuple against open-arc membership (test oracle)."""
    pos, circle = _positions(points)
    if l is not None:
        circle = as_number(l)
        pos = [p % circle for p in pos]
    if len(set(pos)) != len(pos):
        raise ValueError("duplicate points")
    for i, j, k in combinations(range(len(pos)), 3):
        arc = Arc.between(pos[i], pos[k], circle, False, False)
        if not arc.contains(pos[j]):
            return False
    return True


def sorted_cyclic(points: Iterable[Number]) -> list:
    """Points sorted by position in ``[0, l)``, which is the indexing used for breakpoints."""
    return sorted(points)


def merge_arcs(arcs: Sequence[Arc]) -> list[Arc]:
    """Union of open arcs on one circle, merging overlapping ones."""
    if not arcs:
        return []
    l = arcs[0].circle
    if any(a.is_full for a in arcs):
        return [Arc.full(l)]
    items = sorted((a.start.pos, a.start.pos + a.length) for a in arcs)
    merged: list[list] = []
    for s, e in items:
        if merged and s < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    # the last interval may wrap past l onto the first ones
    while len(merged) > 1 and merged[-1][1] - l > merged[0][0]:
        s, e = merged.pop(0)
        merged[-1][1] = max(merged[-1][1], e + l)
    if merged[-1][1] - merged[0][0] >= l and len(merged) == 1:
        return [Arc.full(l)]
    return [Arc(CirclePoint(s, l), min(e - s, l), False, False) for s, e in merged]
