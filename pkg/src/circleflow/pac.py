"""Piecewise bijections of circles and of finite unions of circles.

A map is stored as a list of pieces.  Each piece is a half-open source arc
``[start, start + length)`` on one source component together with a target
component and a transform acting on *lifted* coordinates: the piece's own
lift is ``[start, start + length)`` with ``start`` in ``[0, L)``, and the
transform returns a real whose class mod the target length is the image.

Two transforms are available.  ``Affine`` covers AIETs and is exact over
``Fraction``.  ``FlowChart`` is the time-t map of the logistic flow between
two fixed points and exists for the glued-flow example; it is closed under
inversion, translation and same-chart composition, which is all that
example needs.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .geometry import Arc, CirclePoint, Number, as_number, cdist, merge_arcs, ball

# Tolerance for position comparisons once floats are involved.
NUMERIC_EPS = 1e-12


class UnsupportedComposition(ValueError):
    pass


def _is_exact(*xs) -> bool:
    return not any(isinstance(x, float) for x in xs)


def _same_position(x, y, m) -> bool:
    if _is_exact(x, y):
        return (x - y) % m == 0
    return cdist(x, y, m) <= NUMERIC_EPS


@dataclass(frozen=True)
class Affine:
    """``x -> slope * x + offset`` on lifted coordinates."""

    slope: Number
    offset: Number

    exact = True

    def __call__(self, x):
        if self.slope == 1:
            return x + self.offset
        return self.slope * x + self.offset

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        return float(self.slope) * xs + float(self.offset)

    def inverse_apply(self, y):
        if self.slope == 1:
            return y - self.offset
        return (y - self.offset) / self.slope

    def inverse(self) -> "Affine":
        if self.slope == 1:
            return Affine(self.slope, -self.offset)
        return Affine(1 / self.slope, -self.offset / self.slope)

    def pre_shift(self, c) -> "Affine":
        """The transform ``x -> self(x + c)``."""
        if self.slope == 1:
            return Affine(self.slope, self.offset + c)
        return Affine(self.slope, self.offset + self.slope * c)

    def post_shift(self, c) -> "Affine":
        return Affine(self.slope, self.offset + c)

    def then(self, outer) -> "Transform":
        """``outer`` after ``self``."""
        if isinstance(outer, Affine):
            if outer.slope == 1:
                return Affine(self.slope, self.offset + outer.offset)
            return Affine(outer.slope * self.slope, outer.slope * self.offset + outer.offset)
        if self.slope != 1:
            raise UnsupportedComposition("flow chart after a non-isometric affine piece")
        return outer.pre_shift(self.offset)

    def equivalent(self, other, m) -> bool:
        return (
            isinstance(other, Affine)
            and self.slope == other.slope
            and (self.offset - other.offset) % m == 0
        )

    def image_length(self, length):
        return self.slope * length

    def to_json(self) -> dict:
        return {"kind": "affine", "slope": str(self.slope), "offset": str(self.offset)}


@dataclass(frozen=True)
class FlowChart:
    """Time-``t`` map of the flow from ``r`` towards ``a``, plus a translation.

    In the chart ``u = (x - r) / (a - x)`` the flow is ``u -> u * e^t``.  The
    map fixes ``r`` and ``a`` (before ``shift``) and is increasing on the arc
    between them whichever of the two is larger.
    """

    r: Number
    a: Number
    t: Number
    shift: Number = Fraction(0)

    exact = False

    @staticmethod
    def _chart(r, a, t, x):
        if t == 0:
            return x
        e = math.exp(float(t))
        num = (x - r) * e
        return float(r) + float(a - r) * float(num / ((a - x) + num))

    def __call__(self, x):
        return self._chart(self.r, self.a, self.t, x) + self.shift

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        r, a = float(self.r), float(self.a)
        e = math.exp(float(self.t))
        num = (xs - r) * e
        return r + (a - r) * num / ((a - xs) + num) + float(self.shift)

    def inverse_apply(self, y):
        return self._chart(self.r, self.a, -self.t, y - self.shift)

    def inverse(self) -> "FlowChart":
        s = self.shift
        return FlowChart(self.r + s, self.a + s, -self.t, -s)

    def pre_shift(self, c) -> "FlowChart":
        return FlowChart(self.r - c, self.a - c, self.t, self.shift + c)

    def post_shift(self, c) -> "FlowChart":
        return FlowChart(self.r, self.a, self.t, self.shift + c)

    def then(self, outer) -> "Transform":
        if isinstance(outer, Affine):
            if outer.slope != 1:
                raise UnsupportedComposition("non-isometric affine piece after a flow chart")
            return self.post_shift(outer.offset)
        # outer(self(x)) = chart_o(chart_s(x) + s_s) + s_o, with chart_o moved back by s_s
        r, a = outer.r - self.shift, outer.a - self.shift
        if (r, a) != (self.r, self.a):
            raise UnsupportedComposition("flow charts on different arcs")
        total = self.t + outer.t
        if total == 0:
            return Affine(Fraction(1), self.shift + outer.shift)
        return FlowChart(self.r, self.a, total, self.shift + outer.shift)

    def equivalent(self, other, m) -> bool:
        return (
            isinstance(other, FlowChart)
            and self.r == other.r
            and self.a == other.a
            and self.t == other.t
            and (self.shift - other.shift) % m == 0
        )

    def to_json(self) -> dict:
        def num(x):
            return str(x) if isinstance(x, (Fraction, int)) else float(x)

        return {"kind": "flowchart", "r": num(self.r), "a": num(self.a), "t": num(self.t),
                "shift": num(self.shift)}


Transform = Union[Affine, FlowChart]


@dataclass(frozen=True)
class Piece:
    comp: int
    start: Number
    length: Number
    target: int
    transform: Transform

    @property
    def end(self):
        return self.start + self.length

    @property
    def image_start(self):
        return self.transform(self.start)

    @property
    def image_end(self):
        return self.transform(self.end)


def _domain(lengths) -> tuple:
    if isinstance(lengths, (int, Fraction, str, float)):
        lengths = (lengths,)
    out = tuple(as_number(l) for l in lengths)
    if not out or any(l <= 0 for l in out):
        raise ValueError(f"bad domain {lengths!r}")
    return out


@dataclass(frozen=True, eq=False)
class PacMap:
    """A right-continuous piecewise bijection between two domains.

    ``source`` and ``target`` are tuples of circle lengths.  Build maps with
    :meth:`build`, which normalizes; the raw constructor keeps whatever pieces
    it is given so that :func:`validate` can report on malformed input.
    """

    source: tuple
    target: tuple
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "source", _domain(self.source))
        object.__setattr__(self, "target", _domain(self.target))
        object.__setattr__(self, "pieces", tuple(sorted(self.pieces, key=lambda p: (p.comp, p.start))))

    @classmethod
    def build(cls, source, target, pieces) -> "PacMap":
        return normalize(cls(source, target, tuple(pieces)))

    @classmethod
    def identity(cls, domain=Fraction(1)) -> "PacMap":
        dom = _domain(domain)
        return cls(dom, dom, tuple(Piece(c, Fraction(0), l, c, Affine(Fraction(1), Fraction(0)))
                                   for c, l in enumerate(dom)))

    @classmethod
    def rotation(cls, angle, l=Fraction(1)) -> "PacMap":
        l = as_number(l)
        return normalize(cls((l,), (l,), (Piece(0, Fraction(0), l, 0, Affine(Fraction(1), as_number(angle))),)))

    @classmethod
    def from_affine_pieces(cls, spec, l=Fraction(1)) -> "PacMap":
        """Single-circle map from ``[(start, end, slope, offset), ...]`` rows."""
        l = as_number(l)
        pieces = []
        for start, end, slope, offset in spec:
            start, end = as_number(start), as_number(end)
            pieces.append(Piece(0, start, end - start, 0, Affine(as_number(slope), as_number(offset))))
        return cls.build((l,), (l,), pieces)

    # -- lookup ----------------------------------------------------------
    @cached_property
    def _by_comp(self) -> list:
        groups = [[] for _ in self.source]
        for p in self.pieces:
            groups[p.comp].append(p)
        return groups

    @cached_property
    def _starts(self) -> list:
        return [[p.start for p in g] for g in self._by_comp]

    @property
    def numeric(self) -> bool:
        return any(not p.transform.exact for p in self.pieces)

    @property
    def is_circle_map(self) -> bool:
        return len(self.source) == 1 and len(self.target) == 1

    @property
    def length(self):
        if len(self.source) != 1:
            raise ValueError("map is not defined on a single circle")
        return self.source[0]

    def locate(self, x, comp: int = 0) -> tuple[int, Number]:
        """Index (within the component) of the piece containing ``x`` and the lift of ``x``."""
        L = self.source[comp]
        x = x % L
        starts = self._starts[comp]
        i = bisect_right(starts, x) - 1
        if i < 0:
            i = len(starts) - 1
        p = self._by_comp[comp][i]
        if x < p.start:
            x = x + L
        return i, x

    def piece_at(self, x, comp: int = 0) -> Piece:
        return self._by_comp[comp][self.locate(x, comp)[0]]

    def at(self, comp: int, x) -> tuple[int, Number]:
        i, lx = self.locate(as_number(x), comp)
        p = self._by_comp[comp][i]
        return p.target, p.transform(lx) % self.target[p.target]

    def __call__(self, x):
        if len(self.source) != 1:
            raise ValueError("use .at(comp, x) for maps between domains")
        return self.at(0, x)[1]

    def left_limit_at(self, comp: int, x) -> tuple[int, Number]:
        i, lx = self.locate(as_number(x), comp)
        group = self._by_comp[comp]
        p = group[i]
        if lx == p.start:
            p = group[i - 1]
            return p.target, p.transform(p.end) % self.target[p.target]
        return p.target, p.transform(lx) % self.target[p.target]

    def boundaries(self) -> list[tuple[int, Number]]:
        return [(p.comp, p.start) for p in self.pieces]

    def discontinuities(self) -> list[tuple[int, Number]]:
        """All (component, position) pairs where the map is not continuous."""
        out = []
        for group in self._by_comp:
            for i, p in enumerate(group):
                q = group[i - 1]
                if q.target != p.target:
                    out.append((p.comp, p.start))
                    continue
                m = self.target[p.target]
                if not _same_position(q.transform(q.end), p.transform(p.start), m):
                    out.append((p.comp, p.start))
        return out

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, PacMap):
            return NotImplemented
        a, b = normalize(self), normalize(other)
        return a.source == b.source and a.target == b.target and a.pieces == b.pieces

    def __hash__(self):
        n = normalize(self)
        return hash((n.source, n.target, n.pieces))

    def __matmul__(self, other: "PacMap") -> "PacMap":
        return compose(self, other)

    def __repr__(self):
        rows = []
        for p in self.pieces:
            rows.append(f"  c{p.comp}[{p.start}, {p.end}) -> c{p.target} {p.transform}")
        return f"PacMap({self.source} -> {self.target},\n" + "\n".join(rows) + ")"


def _canonical(p: Piece, L, m) -> Piece:
    start, T = p.start, p.transform
    if not 0 <= start < L:
        k = math.floor(start / L)
        start = start - k * L
        T = T.pre_shift(k * L)
    y = T(start)
    if not 0 <= y < m:
        T = T.post_shift(-math.floor(y / m) * m)
    if T is p.transform and start is p.start:
        return p
    return Piece(p.comp, start, p.length, p.target, T)


def _mergeable(p: Piece, q: Piece, k: int, L, m) -> bool:
    """Whether ``q`` (following ``p``, lifted by ``k * L``) continues ``p``'s formula."""
    if p.target != q.target:
        return False
    other = q.transform.pre_shift(-k * L) if k else q.transform
    return p.transform.equivalent(other, m)


def _covers(p: Piece, L, m) -> bool:
    span = p.image_end - p.image_start
    if _is_exact(span, p.length):
        return p.length == L and span == m
    return abs(p.length - L) <= NUMERIC_EPS and abs(span - m) <= NUMERIC_EPS


def normalize(f: PacMap) -> PacMap:
    """Merge adjacent pieces that share a formula and put every piece in canonical lift.

    The result is idempotent under ``normalize``.  Piece starts are the
    discontinuities plus any slope changes; a map with a single formula on a
    whole component keeps one piece starting at 0.
    """
    if getattr(f, "_normalized", False):
        return f
    out = []
    for comp, L in enumerate(f.source):
        group = [_canonical(p, L, f.target[p.target]) for p in f.pieces if p.comp == comp and p.length > 0]
        group.sort(key=lambda p: p.start)
        merged: list[Piece] = []
        for p in group:
            if merged and _mergeable(merged[-1], p, 0, L, f.target[p.target]):
                q = merged[-1]
                merged[-1] = Piece(q.comp, q.start, q.length + p.length, q.target, q.transform)
            else:
                merged.append(p)
        if len(merged) > 1:
            last, first = merged[-1], merged[0]
            if _mergeable(last, first, 1, L, f.target[last.target]):
                merged[-1] = Piece(last.comp, last.start, last.length + first.length, last.target, last.transform)
                merged.pop(0)
        if len(merged) == 1 and _covers(merged[0], L, f.target[merged[0].target]):
            # a single piece wrapping onto its whole target circle has no preferred start
            p = merged[0]
            merged[0] = _canonical(Piece(p.comp, Fraction(0), L, p.target, p.transform), L, f.target[p.target])
        out.extend(merged)
    g = PacMap(f.source, f.target, tuple(out))
    object.__setattr__(g, "_normalized", True)
    return g


def _cuts_inside(starts, m, lo, hi, eps):
    """Breakpoints of a component strictly inside the lifted window ``(lo, hi)``."""
    cuts = []
    base = math.floor(lo / m) * m
    for shift in (base, base + m, base + 2 * m):
        for s in starts:
            c = s + shift
            if lo + eps < c < hi - eps:
                cuts.append(c)
    return sorted(set(cuts))


def compose(f: PacMap, g: PacMap) -> PacMap:
    """``f o g``: refine ``g`` by the preimages of ``f``'s breakpoints, then normalize."""
    if g.target != f.source:
        raise ValueError(f"cannot compose: target {g.target} of g is not source {f.source} of f")
    pieces = []
    for p in g.pieces:
        m = f.source[p.target]
        T = p.transform
        y0, y1 = p.image_start, p.image_end
        eps = 0 if _is_exact(y0, y1) else NUMERIC_EPS
        ys = [y0] + _cuts_inside(f._starts[p.target], m, y0, y1, eps) + [y1]
        xs = [p.start] + [T.inverse_apply(y) for y in ys[1:-1]] + [p.end]
        L = g.source[p.comp]
        for ya, yb, xa, xb in zip(ys, ys[1:], xs, xs[1:]):
            if xb <= xa:
                continue
            mid = (ya + yb) / 2
            i, lifted = f.locate(mid, p.target)
            q = f._by_comp[p.target][i]
            shift = round((lifted - mid) / m) * m
            composite = T.then(q.transform.pre_shift(shift))
            k = math.floor(xa / L)
            start = xa - k * L
            if k:
                composite = composite.pre_shift(k * L)
            pieces.append(Piece(p.comp, start, xb - xa, q.target, composite))
    return normalize(PacMap(g.source, f.target, tuple(pieces)))


def invert(f: PacMap) -> PacMap:
    pieces = []
    for p in f.pieces:
        m = f.target[p.target]
        y0 = p.image_start
        y1 = p.image_end
        Tinv = p.transform.inverse()
        k = math.floor(y0 / m)
        start = y0 - k * m
        if k:
            Tinv = Tinv.pre_shift(k * m)
        pieces.append(Piece(p.target, start, y1 - y0, p.comp, Tinv))
    return normalize(PacMap(f.target, f.source, tuple(pieces)))


def power(f: PacMap, n: int) -> PacMap:
    if n < 0:
        return power(invert(f), -n)
    result = PacMap.identity(f.source)
    base = f
    while n:
        if n & 1:
            result = compose(base, result)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def evaluate_array(f: PacMap, xs, comp: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized evaluation: target components and float images of ``xs``."""
    xs = np.mod(np.asarray(xs, dtype=float), float(f.source[comp]))
    group = f._by_comp[comp]
    starts = np.array([float(p.start) for p in group])
    idx = np.searchsorted(starts, xs, side="right") - 1
    lifted = np.where(idx < 0, xs + float(f.source[comp]), xs)
    idx = np.where(idx < 0, len(group) - 1, idx)
    out = np.empty_like(xs)
    tgt = np.empty(xs.shape, dtype=int)
    for i, p in enumerate(group):
        sel = idx == i
        if sel.any():
            out[sel] = np.mod(p.transform.apply_array(lifted[sel]), float(f.target[p.target]))
            tgt[sel] = p.target
    return tgt, out


# -- evaluation on CirclePoint ---------------------------------------------
def evaluate(f: PacMap, x) -> CirclePoint:
    if isinstance(x, CirclePoint):
        if x.length != f.length:
            raise ValueError("point is not on the source circle")
        x = x.pos
    return CirclePoint(f(x), f.target[0])


def left_limit(f: PacMap, x) -> CirclePoint:
    if isinstance(x, CirclePoint):
        x = x.pos
    return CirclePoint(f.left_limit_at(0, x)[1], f.target[0])


# -- discontinuity bookkeeping ---------------------------------------------
def bp0(f: PacMap) -> tuple:
    """Discontinuity points of a circle map, ascending in ``[0, l)``."""
    if len(f.source) != 1:
        raise ValueError("bp0 is defined here for single-circle sources; use f.discontinuities()")
    return tuple(sorted(x for _, x in normalize(f).discontinuities()))


def sharp(f: PacMap) -> int:
    return len(normalize(f).discontinuities())


def delta_f_at(f: PacMap, p) -> Number:
    l = f.length
    others = [q for q in bp0(f) if q != as_number(p)]
    if not others:
        return l
    return min(l, min(cdist(p, q, l) for q in others))


def delta_f(f: PacMap) -> Number:
    """Minimal spacing of the discontinuities, capped at the circle length."""
    pts = bp0(f)
    l = f.length
    if not pts:
        return l
    return min([l] + [delta_f_at(f, p) for p in pts])


def v_n(f: PacMap, n: int) -> list[Arc]:
    """Union of the balls of radius ``1/(2n(#f+1))`` around the discontinuities."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts = bp0(f)
    if not pts:
        return []
    l = f.length
    radius = Fraction(1, 2 * n * (len(pts) + 1))
    return merge_arcs([ball(CirclePoint(p, l), radius) for p in pts])


def continuity_intervals(f: PacMap) -> list[Arc]:
    """Maximal continuity intervals ``[p_i, p_{i+1})``, indexed from the smallest breakpoint."""
    pts = bp0(f)
    l = f.length
    if not pts:
        return [Arc.full(l)]
    if len(pts) == 1:
        return [Arc(CirclePoint(pts[0], l), l)]
    return [Arc.between(a, b, l) for a, b in zip(pts, pts[1:] + pts[:1])]


def image_measure(f: PacMap, arc: Arc) -> Number:
    """Measure of ``f(arc)`` (maps are bijective, so overlaps never occur)."""
    L = f.length
    s0 = arc.start.pos
    total = 0
    for p in f.pieces:
        # intersect the lifted piece with the arc in both lifts of the piece
        for k in (-1, 0, 1):
            lo = max(p.start + k * L, s0)
            hi = min(p.end + k * L, s0 + arc.length)
            if hi > lo:
                total += p.transform(hi - k * L) - p.transform(lo - k * L)
    return total


# -- validation ---------------------------------------------------------------
@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def add(self, kind, detail):
        self.violations.append(Violation(kind, detail))


def _tiling_gaps(intervals: Sequence[tuple], L) -> list[str]:
    """Problems with a list of lifted ``(start, length)`` intervals tiling ``R/LZ``."""
    problems = []
    items = sorted(((s % L), n) for s, n in intervals)
    total = sum(n for _, n in items)
    exact = _is_exact(total, *(s for s, _ in items))
    if (total != L) if exact else abs(total - L) > NUMERIC_EPS:
        problems.append(f"total length {total} != {L}")
    for (s, n), (s2, _) in zip(items, items[1:] + items[:1]):
        end = (s + n) % L
        same = end == s2 if exact else cdist(end, s2, L) <= NUMERIC_EPS
        if not same:
            problems.append(f"[{s}, {s + n}) is not followed by a piece starting at its end")
    return problems


def validate(f: PacMap) -> ValidationReport:
    rep = ValidationReport()
    for p in f.pieces:
        if not 0 <= p.comp < len(f.source) or not 0 <= p.target < len(f.target):
            rep.add("component", f"piece {p} refers to a missing component")
            return rep
        if p.length <= 0:
            rep.add("tiling", f"piece at {p.start} has non-positive length")
        T = p.transform
        if isinstance(T, Affine):
            if T.slope <= 0:
                rep.add("orientation", f"slope {T.slope} on [{p.start}, {p.end})")
        else:
            lo, hi = sorted((T.r, T.a))
            if T.r == T.a:
                rep.add("orientation", "flow chart with coincident fixed points")
            elif not (lo <= p.start and p.end <= hi):
                rep.add("domain", f"piece [{p.start}, {p.end}) leaves the chart arc [{lo}, {hi}]")
    if not rep.ok:
        return rep
    for comp, L in enumerate(f.source):
        items = [(p.start, p.length) for p in f.pieces if p.comp == comp]
        if not items:
            rep.add("tiling", f"source component {comp} has no pieces")
            continue
        for msg in _tiling_gaps(items, L):
            rep.add("tiling", f"source component {comp}: {msg}")
    for comp, m in enumerate(f.target):
        images = [(p.image_start, p.image_end - p.image_start) for p in f.pieces if p.target == comp]
        if not images:
            rep.add("image overlap", f"target component {comp} is not covered")
            continue
        for msg in _tiling_gaps(images, m):
            rep.add("image overlap", f"target component {comp}: {msg}")
    return rep
