"""L1-type distances between circle maps.

For affine pieces the pointwise distance ``x -> dist(f(x), g(x))`` is a tent
function of an affine lifted difference, so it is piecewise linear with
breakpoints where the difference crosses a multiple of half the circle.  The
integral is then an exact sum of trapezoids.  Flow-chart pieces fall back to
``scipy.integrate.quad`` and carry its error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .geometry import Arc, Number
from .pac import PacMap, evaluate_array, image_measure, invert


@dataclass(frozen=True)
class MetricValue:
    value: Number
    error_bound: float = 0.0
    exact: bool = True

    def __add__(self, other: "MetricValue") -> "MetricValue":
        return MetricValue(self.value + other.value, self.error_bound + other.error_bound,
                           self.exact and other.exact)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        if self.exact:
            return str(self.value)
        return f"{float(self.value):.15g} +/- {self.error_bound:.2g}"


def _check_same(f: PacMap, g: PacMap):
    if f.source != g.source or f.target != g.target:
        raise ValueError(f"domain mismatch: {f.source}->{f.target} vs {g.source}->{g.target}")
    if len(f.source) != 1 or len(f.target) != 1:
        raise ValueError("distances are defined for self-maps of a single circle")


def _walk(h: PacMap, cuts):
    """For consecutive cut intervals, the piece of ``h`` covering it and the lift shift."""
    L = h.source[0]
    pieces = h._by_comp[0]
    out, k = [], -1
    for a in cuts[:-1]:
        while k + 1 < len(pieces) and pieces[k + 1].start <= a:
            k += 1
        # before the first piece start we are still on the last piece, one turn later
        out.append((pieces[k], 0) if k >= 0 else (pieces[-1], L))
    return out


def _segments(f: PacMap, g: PacMap):
    """Common refinement of f and g: (a, b, f-piece, f-lift shift, g-piece, g-lift shift)."""
    L = f.source[0]
    cuts = sorted({Fraction(0), L, *(p.start for p in f.pieces), *(p.start for p in g.pieces)})
    fw, gw = _walk(f, cuts), _walk(g, cuts)
    for a, b, (p, sp), (q, sq) in zip(cuts, cuts[1:], fw, gw):
        yield a, b, p, sp, q, sq


def _tent(y, m):
    r = y % m
    return min(r, m - r)


def _tent_segments(a, b, ha, hb, m):
    """Split ``[a, b]`` where the affine ``h`` (``ha`` -> ``hb``) crosses multiples of ``m/2``."""
    half = m / 2
    xs = [a]
    if ha != hb:
        lo, hi = sorted((ha, hb))
        k = math.floor(lo / half) + 1
        while k * half < hi:
            y = k * half
            xs.append(a + (b - a) * (y - ha) / (hb - ha))
            k += 1
        if ha > hb:
            xs[1:] = sorted(xs[1:])
    xs.append(b)
    return xs


def _linear_pieces(f: PacMap, g: PacMap):
    """(x0, x1, dist at x0, dist at x1) on intervals where the pointwise distance is linear."""
    m = f.target[0]
    for a, b, p, sp, q, sq in _segments(f, g):
        Tf, Tg = p.transform, q.transform
        if Tf.slope == Tg.slope == 1:
            v = _tent(Tf.offset + sp - Tg.offset - sq, m)
            yield a, b, v, v
            continue

        def h(x):
            return Tf(x + sp) - Tg(x + sq)

        ha, hb = h(a), h(b)
        if ha == hb:
            v = _tent(ha, m)
            yield a, b, v, v
            continue
        xs = _tent_segments(a, b, ha, hb, m)
        for x0, x1 in zip(xs, xs[1:]):
            if x1 > x0:
                yield x0, x1, _tent(h(x0), m), _tent(h(x1), m)


def _numeric_d_tilde1(f: PacMap, g: PacMap) -> MetricValue:
    m = float(f.target[0])
    total, err = 0.0, 0.0
    for a, b, p, sp, q, sq in _segments(f, g):
        Tf, Tg = p.transform, q.transform
        sp, sq = float(sp), float(sq)

        def integrand(x):
            r = (Tf(x + sp) - Tg(x + sq)) % m
            return min(r, m - r)

        val, e = integrate.quad(integrand, float(a), float(b), limit=200, epsabs=1e-13, epsrel=1e-12)
        total += val
        err += e
    return MetricValue(total, err, False)


def d_tilde1(f: PacMap, g: PacMap) -> MetricValue:
    """Integral over the circle of the pointwise circle distance between f and g."""
    _check_same(f, g)
    if f.numeric or g.numeric:
        return _numeric_d_tilde1(f, g)
    total = Fraction(0)
    for x0, x1, u, v in _linear_pieces(f, g):
        total += (x1 - x0) * (u + v) / 2
    return MetricValue(total)


def d(f: PacMap, g: PacMap) -> MetricValue:
    """The inverse-symmetrized distance, which is compatible with the group structure."""
    return d_tilde1(f, g) + d_tilde1(invert(f), invert(g))


def _numeric_measure_U(f: PacMap, g: PacMap, delta, samples: int = 200_000) -> float:
    L = float(f.source[0])
    m = float(f.target[0])
    xs = (np.arange(samples) + 0.5) * (L / samples)
    _, fx = evaluate_array(f, xs)
    _, gx = evaluate_array(g, xs)
    r = np.mod(fx - gx, m)
    dist = np.minimum(r, m - r)
    return float(np.count_nonzero(dist > float(delta)) * (L / samples))


def measure_U(f: PacMap, g: PacMap, delta) -> Number:
    """Measure of the set where f and g are more than ``delta`` apart."""
    _check_same(f, g)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if f.numeric or g.numeric:
        return _numeric_measure_U(f, g, delta)
    total = Fraction(0)
    for x0, x1, u, v in _linear_pieces(f, g):
        if u > delta and v > delta:
            total += x1 - x0
        elif u > delta or v > delta:
            # linear between u and v, crosses delta once
            frac = (max(u, v) - delta) / abs(v - u)
            total += (x1 - x0) * frac
    return total


def measure_U_n(f: PacMap, g: PacMap, n: int) -> Number:
    dt = d_tilde1(f, g).value
    if dt == 0:
        return Fraction(0)
    return measure_U(f, g, n * dt)


def quad_oracle_d_tilde1(f: PacMap, g: PacMap, samples: int = 1_000_000) -> float:
    """Midpoint rule on a uniform grid refined by both maps' piece boundaries."""
    _check_same(f, g)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    L = float(f.source[0])
    m = float(f.target[0])
    grid = np.linspace(0.0, L, samples + 1)
    extra = [float(p.start) for p in f.pieces] + [float(p.start) for p in g.pieces]
    nodes = np.unique(np.concatenate([grid, extra]))
    mids = (nodes[:-1] + nodes[1:]) / 2
    widths = np.diff(nodes)
    _, fx = evaluate_array(f, mids)
    _, gx = evaluate_array(g, mids)
    r = np.mod(fx - gx, m)
    return float(np.sum(np.minimum(r, m - r) * widths))


def measure_distortion_check(g: PacMap, I: Arc) -> bool:
    """Whether ``d(g, id) >= |mu(I) - mu(g(I))|^2 / 8`` holds for this arc."""
    if I.length > g.length / 2:
        raise ValueError("arc must have measure at most half the circle")
    lhs = d(g, PacMap.identity(g.source)).value
    gap = I.length - image_measure(g, I)
    return lhs >= gap * gap / 8
