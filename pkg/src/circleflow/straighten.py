"""Conjugate a one-parameter family of circle maps into a continuous flow.

Pipeline: sample the family near ``t = 0`` to find where the circle must be
cut, read off which cut arcs exchange endpoints under small times, group the
arcs into orbits and glue each orbit into its own circle.  The conjugated
family is then checked for invariance and continuity on each circle.

Indices of cut points and arcs are 0-based everywhere.
"""
from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .flows import OneParameterFamily
from .geometry import Arc, CirclePoint, Number, cdist
from .pac import Affine, PacMap, Piece, bp0, compose, continuity_intervals, evaluate_array, invert, sharp

log = logging.getLogger(__name__)


class StraighteningError(RuntimeError):
    pass


class NoCutPoints(StraighteningError):
    """The sampled maps are continuous: nothing needs cutting."""


class ParameterNotSmallEnough(StraighteningError):
    pass


class CutSetInvalid(StraighteningError):
    pass


class InconsistentJumpMaps(StraighteningError):
    pass


@dataclass(frozen=True)
class StraightenConfig:
    t0: Fraction = Fraction(1, 4)
    q_max: int = 12
    tol: float = 1e-9
    window: int = 3
    verify_ts: tuple = (Fraction(1, 32), Fraction(-1, 32), Fraction(1, 8), Fraction(-1, 8),
                        Fraction(1, 2), Fraction(-1, 2))
    grid: int = 1000


# -- cut set -----------------------------------------------------------------
@dataclass(frozen=True)
class CutSet:
    points: tuple
    length: Number = Fraction(1)
    stable_from: tuple = ()  # first q of the stability window for each point

    def __post_init__(self):
        if not self.points:
            raise ValueError("a cut set needs at least one point")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def delta(self) -> Number:
        if self.n == 1:
            return self.length
        return min(cdist(a, b, self.length) for i, a in enumerate(self.points) for b in self.points[i + 1:])

    def arc(self, i: int) -> Arc:
        if self.n == 1:
            return Arc(CirclePoint(self.points[0], self.length), self.length)
        return Arc.between(self.points[i], self.points[(i + 1) % self.n], self.length)

    def measure(self, i: int) -> Number:
        return self.arc(i).length

    def index_of(self, x) -> int:
        """Index of the arc ``[b_i, b_{i+1})`` containing ``x``."""
        i = bisect_right(self.points, x % self.length) - 1
        return i if i >= 0 else self.n - 1

    def index_of_left(self, x, tol: float = 0.0) -> int:
        """Index of the arc ``(b_i, b_{i+1}]`` containing ``x``, where left limits land."""
        x = x % self.length
        for k, b in enumerate(self.points):
            if cdist(x, b, self.length) <= tol:
                return (k - 1) % self.n
        return self.index_of(x)

    def index_snapped(self, x, tol: float = 0.0) -> int:
        x = x % self.length
        for k, b in enumerate(self.points):
            if cdist(x, b, self.length) <= tol:
                return k
        return self.index_of(x)

    def distance_to(self, x) -> Number:
        return min(cdist(x, b, self.length) for b in self.points)


def _near(x, pts, tol, l) -> bool:
    for p in pts:
        if isinstance(x, Fraction) and isinstance(p, Fraction):
            if x == p:
                return True
        elif cdist(x, p, l) <= tol:
            return True
    return False


def detect_cut_points(fam: OneParameterFamily, q_max: int = 12, tol: float = 1e-9,
                      window: int = 3, t0=None) -> CutSet:
    """Breakpoints of ``fam(+-t_q)`` that stay put over the last ``window`` dyadic times."""
    if q_max < window:
        raise ValueError(f"q_max must be at least the window size {window}")
    t0 = fam.t0 if t0 is None else t0
    l = fam(Fraction(0)).length
    samples = {}
    for q in range(1, q_max + 1):
        t = t0 / 2**q
        samples[q] = (bp0(fam(t)), bp0(fam(-t)))
    last = samples[q_max]
    candidates = sorted(set(last[0]) | set(last[1]), key=lambda x: (float(x), not isinstance(x, Fraction)))
    window_qs = range(q_max - window + 1, q_max + 1)
    stable = []
    for p in candidates:
        if all(_near(p, samples[q][0], tol, l) and _near(p, samples[q][1], tol, l) for q in window_qs):
            if not _near(p, stable, tol, l):
                stable.append(p)
    if not stable:
        raise NoCutPoints("no cut points: the family may already be continuous")
    stable.sort()
    first = []
    for p in stable:
        q0 = q_max - window + 1
        while q0 > 1 and _near(p, samples[q0 - 1][0], tol, l) and _near(p, samples[q0 - 1][1], tol, l):
            q0 -= 1
        first.append(q0)
    log.info("cut points %s", stable)
    return CutSet(tuple(stable), l, tuple(first))


# -- classification ------------------------------------------------------------
TYPE1, TYPE2 = "type1", "type2"


@dataclass(frozen=True)
class ClassifiedInterval:
    arc: Arc
    kind: str
    cuts_in_closure: int


def _cuts_in_closure(arc: Arc, cuts: CutSet, tol) -> int:
    l = cuts.length
    count = 0
    for b in cuts.points:
        off = (b - arc.start.pos) % l
        if off <= arc.length + tol or l - off <= tol:
            count += 1
    return count


def classify_intervals(m: PacMap, cuts: CutSet, tol: float = 1e-9) -> list[ClassifiedInterval]:
    """Tag each continuity interval of ``m`` as short (type 1) or long (type 2)."""
    dB = cuts.delta
    for p in bp0(m):
        if cuts.distance_to(p) >= dB / 8:
            raise ParameterNotSmallEnough(f"discontinuity {p} is not within {dB / 8} of the cut set")
    out = []
    for arc in continuity_intervals(m):
        mu = arc.length
        if mu <= dB / 4:
            kind = TYPE1
        elif mu >= dB / 2:
            kind = TYPE2
        else:
            raise ParameterNotSmallEnough(f"continuity interval {arc} has measure {mu} in the gap")
        out.append(ClassifiedInterval(arc, kind, _cuts_in_closure(arc, cuts, tol)))
    for c in out:
        if c.kind == TYPE1 and c.cuts_in_closure != 1:
            raise ParameterNotSmallEnough(f"short interval {c.arc} touches {c.cuts_in_closure} cut points")
    return out


def side_swap_violations(m: PacMap, cuts: CutSet, intervals: Sequence[ClassifiedInterval],
                         tol: float = 1e-9) -> list:
    """Short intervals in a right half of a cut arc whose image is not in a left half (and vice versa)."""
    l = cuts.length
    bad = []

    def side(lo, hi):
        # which half of its cut arc the lifted interval [lo, hi] sits in, if any
        i = cuts.index_of((lo + hi) / 2)
        a = cuts.arc(i)
        s, mid = a.start.pos, a.length / 2
        off_lo = (lo - s) % l
        off_hi = off_lo + (hi - lo)
        if off_hi <= mid + tol:
            return "-"
        if off_lo >= mid - tol:
            return "+"
        return None

    for c in intervals:
        if c.kind != TYPE1:
            continue
        lo = c.arc.start.pos
        hi = lo + c.arc.length
        before = side(lo, hi)
        y0 = m(lo)
        y1 = m.left_limit_at(0, hi % l)[1]
        ylen = (y1 - y0) % l
        after = side(y0, y0 + ylen)
        if before is None or after is None or before == after:
            bad.append((c.arc, before, after))
    return bad


# -- jump maps -------------------------------------------------------------------
@dataclass(frozen=True)
class JumpMaps:
    sigma1: tuple
    tau1: tuple
    sigma2: tuple
    tau2: tuple
    sigma: tuple
    tau: tuple
    t_q: Number

    def pseudo_inverse_violations(self) -> list:
        bad = []
        for i in range(len(self.sigma)):
            if self.tau[i] != i and self.sigma[self.tau[i]] != i:
                bad.append(("tau", i))
            if self.sigma[i] != i and self.tau[self.sigma[i]] != i:
                bad.append(("sigma", i))
        return bad


def _endpoint_indices(m: PacMap, cuts: CutSet, tol: float) -> tuple[tuple, tuple]:
    s, t = [], []
    for i in range(cuts.n):
        s.append(cuts.index_snapped(m(cuts.points[i]), tol))
        nxt = cuts.points[(i + 1) % cuts.n]
        t.append(cuts.index_of_left(m.left_limit_at(0, nxt)[1], tol))
    return tuple(s), tuple(t)


def _combine(one: tuple, two: tuple, what: str) -> tuple:
    out = []
    for i, (a, b) in enumerate(zip(one, two)):
        if a != i and b != i:
            raise CutSetInvalid(f"{what}({i}) moves for both signs of t ({a}, {b})")
        out.append(a if a != i else b)
    return tuple(out)


def _jump_maps_at(fam: OneParameterFamily, cuts: CutSet, t, tol: float) -> JumpMaps:
    s1, t1 = _endpoint_indices(fam(t), cuts, tol)
    s2, t2 = _endpoint_indices(fam(-t), cuts, tol)
    return JumpMaps(s1, t1, s2, t2, _combine(s1, s2, "sigma"), _combine(t1, t2, "tau"), t)


def compute_jump_maps(fam: OneParameterFamily, cuts: CutSet, t_q, tol: float = 1e-9) -> JumpMaps:
    """Jump maps read at ``t_q``, checked against ``t_q / 2``."""
    jm = _jump_maps_at(fam, cuts, t_q, tol)
    half = _jump_maps_at(fam, cuts, t_q / 2, tol)
    if (jm.sigma1, jm.tau1, jm.sigma2, jm.tau2) != (half.sigma1, half.tau1, half.sigma2, half.tau2):
        raise ParameterNotSmallEnough(f"jump maps change between t={t_q} and t={t_q / 2}")
    bad = jm.pseudo_inverse_violations()
    if bad:
        raise CutSetInvalid(f"jump maps are not pseudo-inverse at {bad}")
    return jm


def is_local_sharp_max(fam: OneParameterFamily, t, ks=range(1, 5)) -> bool:
    """Sampled test that the discontinuity count at ``t`` is a local maximum."""
    here = sharp(fam(t))
    return all(sharp(fam(t * (1 + s * Fraction(1, 2**k)))) <= here for k in ks for s in (1, -1))


# -- orbits ------------------------------------------------------------------------
def _iterate(fn: tuple, i: int) -> list:
    seen, out = set(), []
    while i not in seen:
        seen.add(i)
        out.append(i)
        i = fn[i]
    return out


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple  # one tuple of arc indices per component, in block order
    representatives: tuple
    L: frozenset
    S: frozenset

    @property
    def sizes(self) -> tuple:
        return tuple(len(o) for o in self.orbits)


def orbit_decomposition(jm: JumpMaps) -> OrbitDecomposition:
    sigma, tau = jm.sigma, jm.tau
    n = len(sigma)
    if jm.pseudo_inverse_violations():
        raise InconsistentJumpMaps("jump maps are not pseudo-inverse")
    L = frozenset(i for i in range(n) if sigma[i] == i)
    full = {i: set(_iterate(tau, i)) | set(_iterate(sigma, i)) for i in range(n)}
    covered = set()
    for l in L:
        chain = _iterate(tau, l)
        # the tau-chain from a sigma-fixed point ends in a tau-fixed point
        if tau[chain[-1]] != chain[-1]:
            raise InconsistentJumpMaps(f"tau-orbit of {l} does not end at a fixed point")
        covered |= full[l]
    for i in (i for i in range(n) if tau[i] == i):
        chain = _iterate(sigma, i)
        if sigma[chain[-1]] != chain[-1]:
            raise InconsistentJumpMaps(f"sigma-orbit of {i} does not end at a fixed point")
    S = frozenset(range(n)) - covered
    for s in S:
        cyc_s, cyc_t = _iterate(sigma, s), _iterate(tau, s)
        # on S both maps are single cycles through s, inverse to each other
        if sigma[cyc_s[-1]] != s or tau[cyc_t[-1]] != s or not set(cyc_s) == set(cyc_t) == full[s]:
            raise InconsistentJumpMaps(f"{s} does not lie on a single sigma/tau cycle")
    reps = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        orbit = full[i]
        in_L = sorted(orbit & L)
        if len(in_L) > 1:
            raise InconsistentJumpMaps(f"orbit {sorted(orbit)} contains several sigma-fixed points")
        rep = in_L[0] if in_L else min(orbit)
        blocks = _iterate(tau, rep)
        if set(blocks) != orbit:
            raise InconsistentJumpMaps(f"tau-orbit of {rep} does not enumerate {sorted(orbit)}")
        if seen & orbit:
            raise InconsistentJumpMaps("orbits overlap")
        seen |= orbit
        reps.append(rep)
    reps.sort()
    orbits = tuple(tuple(_iterate(tau, r)) for r in reps)
    if sorted(i for o in orbits for i in o) != list(range(n)):
        raise InconsistentJumpMaps("orbits do not partition the arcs")
    return OrbitDecomposition(orbits, tuple(reps), L, S)


# -- conjugator ------------------------------------------------------------------
def build_domain_and_conjugator(cuts: CutSet, od: OrbitDecomposition) -> tuple[tuple, PacMap]:
    """Glue the arcs of each orbit, in block order, into one circle."""
    lengths = []
    pieces = []
    for j, orbit in enumerate(od.orbits):
        cum = Fraction(0)
        for i in orbit:
            b = cuts.points[i]
            pieces.append(Piece(0, b, cuts.measure(i), j, Affine(Fraction(1), cum - b)))
            cum += cuts.measure(i)
        lengths.append(cum)
    domain = tuple(lengths)
    return domain, PacMap.build((cuts.length,), domain, pieces)


# -- verification ------------------------------------------------------------------
@dataclass
class ConjugateCheck:
    t: Number
    invariant: bool
    residuals: tuple  # worst continuity residual per component

    def ok(self, tol: float) -> bool:
        return self.invariant and all(r <= tol for r in self.residuals)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    tol: float = 1e-9

    @property
    def ok(self) -> bool:
        return all(c.ok(self.tol) for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((max(c.residuals, default=0.0) for c in self.checks), default=0.0)


def _continuity_residuals(g: PacMap) -> tuple:
    res = []
    for comp, m in enumerate(g.target):
        worst = 0.0
        group = [p for p in g.pieces if p.comp == comp]
        for k, p in enumerate(group):
            q = group[k - 1]
            if q.target != p.target:
                worst = float("inf")
                continue
            gap = float(cdist(q.transform(q.end), p.transform(p.start), m))
            worst = max(worst, gap)
        res.append(worst)
    return tuple(res)


def _invariant(g: PacMap, grid: int) -> bool:
    if any(p.comp != p.target for p in g.pieces):
        return False
    for comp, L in enumerate(g.source):
        xs = (np.arange(grid) + 0.5) * (float(L) / grid)
        tgt, _ = evaluate_array(g, xs, comp)
        if np.any(tgt != comp):
            return False
    return True


def check_conjugate(f: PacMap, m: PacMap, t, grid: int = 1000) -> ConjugateCheck:
    g = compose(f, compose(m, invert(f)))
    return ConjugateCheck(t, _invariant(g, grid), _continuity_residuals(g))


@dataclass
class StraighteningResult:
    cuts: CutSet
    jump_maps: JumpMaps
    orbits: OrbitDecomposition
    domain: tuple
    conjugator: PacMap
    report: VerificationReport
    classified: tuple = ()
    notes: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.report.ok


def verify_conjugate_continuity(res: StraighteningResult, fam: OneParameterFamily, ts: Sequence,
                                tol: float = 1e-9, grid: int = 1000) -> VerificationReport:
    rep = VerificationReport(tol=tol)
    for t in ts:
        rep.checks.append(check_conjugate(res.conjugator, fam(t), t, grid))
    return rep


def _trivial(fam: OneParameterFamily, cfg: StraightenConfig) -> StraighteningResult:
    l = fam(Fraction(0)).length
    cuts = CutSet((Fraction(0),), l)
    ident = tuple([0])
    jm = JumpMaps(ident, ident, ident, ident, ident, ident, Fraction(0))
    od = OrbitDecomposition(((0,),), (0,), frozenset({0}), frozenset())
    f = PacMap.identity((l,))
    res = StraighteningResult(cuts, jm, od, (l,), f, VerificationReport(tol=cfg.tol),
                              notes=["sampled maps are continuous; no cut needed"])
    res.report = verify_conjugate_continuity(res, fam, cfg.verify_ts, cfg.tol, cfg.grid)
    return res


def straighten(fam: OneParameterFamily, cfg: StraightenConfig | None = None) -> StraighteningResult:
    cfg = cfg or StraightenConfig()
    try:
        cuts = detect_cut_points(fam, cfg.q_max, cfg.tol, cfg.window, cfg.t0)
    except NoCutPoints:
        return _trivial(fam, cfg)
    notes = []
    last_error = None
    for q in range(1, cfg.q_max + 1):
        t = cfg.t0 / 2**q
        if not is_local_sharp_max(fam, t):
            notes.append(f"t={t}: not a local maximum of the discontinuity count")
            continue
        try:
            classified = classify_intervals(fam(t), cuts, cfg.tol)
            classify_intervals(fam(-t), cuts, cfg.tol)
            jm = compute_jump_maps(fam, cuts, t, cfg.tol)
        except ParameterNotSmallEnough as e:
            notes.append(f"t={t}: {e}")
            last_error = e
            continue
        break
    else:
        raise ParameterNotSmallEnough(f"no usable sample time down to q={cfg.q_max}: {last_error}")
    log.info("jump maps at t=%s: sigma=%s tau=%s", t, jm.sigma, jm.tau)
    od = orbit_decomposition(jm)
    domain, f = build_domain_and_conjugator(cuts, od)
    res = StraighteningResult(cuts, jm, od, domain, f, VerificationReport(tol=cfg.tol),
                              tuple(classified), notes)
    ts = list(cfg.verify_ts) + [jm.t_q, -jm.t_q]
    res.report = verify_conjugate_continuity(res, fam, ts, cfg.tol, cfg.grid)
    return res
