"""One-parameter families of circle maps and a few named example maps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .geometry import as_number
from .pac import Affine, FlowChart, PacMap, Piece, compose, invert, power, sharp
from .metric import d

ONE = Fraction(1)
ZERO = Fraction(0)


def _frac_part(x):
    return x - math.floor(x)


@dataclass(frozen=True)
class TorusParams:
    lam: tuple
    alpha: tuple

    def __post_init__(self):
        lam = tuple(as_number(x) for x in self.lam)
        alpha = tuple(as_number(x) for x in self.alpha)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)
        if len(lam) != len(alpha) or not lam:
            raise ValueError("lam and alpha must be non-empty and of equal length")
        if any(x <= 0 for x in lam) or sum(lam) != 1:
            raise ValueError(f"lengths must be positive and sum to 1, got {lam}")
        if any(not 0 <= a < 1 for a in alpha):
            raise ValueError(f"angles must lie in [0, 1), got {alpha}")

    @property
    def beta(self) -> tuple:
        out, acc = [ZERO], ZERO
        for x in self.lam:
            acc += x
            out.append(acc)
        return tuple(out)


@dataclass
class OneParameterFamily:
    """A map-valued function of time, evaluated on demand."""

    name: str
    evaluate: Callable[[object], PacMap]
    declared_homomorphism: bool = True
    t0: Fraction = Fraction(1, 4)
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, t) -> PacMap:
        t = as_number(t)
        if t not in self._cache:
            self._cache[t] = self.evaluate(t)
        return self._cache[t]

    def sample_times(self, q_max: int) -> list:
        return [self.t0 / 2**q for q in range(1, q_max + 1)]


def _block_rotation(start, length, theta) -> list[Piece]:
    """Rotate ``[start, start + length)`` inside itself by ``theta`` (taken mod ``length``)."""
    theta = theta % length
    if theta == 0:
        return [Piece(0, start, length, 0, Affine(ONE, ZERO))]
    cut = start + length - theta
    return [
        Piece(0, start, length - theta, 0, Affine(ONE, theta)),
        Piece(0, cut, theta, 0, Affine(ONE, theta - length)),
    ]


def _blocks_map(blocks) -> PacMap:
    pieces = []
    for start, length, theta in blocks:
        pieces += _block_rotation(start, length, theta)
    return PacMap.build((ONE,), (ONE,), pieces)


def standard_torus_action(p: TorusParams, t) -> PacMap:
    """Rotate the j-th block by the fraction ``t * alpha_j`` of its length."""
    t = as_number(t)
    beta = p.beta
    return _blocks_map(
        (beta[j], p.lam[j], p.lam[j] * _frac_part(t * p.alpha[j])) for j in range(len(p.lam))
    )


def torus_family(p: TorusParams) -> OneParameterFamily:
    return OneParameterFamily(f"torus{p.lam}{p.alpha}", lambda t: standard_torus_action(p, t))


def rotation_family(alpha=Fraction(1, 2)) -> OneParameterFamily:
    alpha = as_number(alpha)
    return OneParameterFamily("rotation", lambda t: PacMap.rotation(t * alpha))


def example31(n: int) -> PacMap:
    """AIET close to the identity whose inverse stays far from it in the plain L1 distance."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = [Fraction(1, 4) + Fraction(k, 4 * n) for k in range(n + 1)]
    b = [1 - Fraction(1, 4 * n) + Fraction(k, 4 * n * n) for k in range(n + 1)]
    half = Fraction(1, 2)
    rows = [(0, Fraction(1, 4), 1, 0)]
    for k in range(n):
        rows.append((a[k], a[k + 1], half, a[k] - half * a[k]))
    s = Fraction(2 * n, 2 * n - 1)
    rows.append((half, b[0], s, half - s * half))
    for k in range(n):
        slope = Fraction(n, 2)
        rows.append((b[k], b[k + 1], slope, a[k] + Fraction(1, 8 * n) - slope * b[k]))
    return PacMap.from_affine_pieces(rows)


def example41(n: int) -> PacMap:
    """Swap the two halves of every dyadic interval of length ``2^-n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    step = Fraction(1, 2**n)
    return _blocks_map((k * step, step, step / 2) for k in range(2**n))


def cauchy46(n: int) -> PacMap:
    """Identity on ``[0, 2^-n)``; halves swapped on each ``[2^-k, 2^-(k-1))``, ``k <= n``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    blocks = [(ZERO, Fraction(1, 2**n), ZERO)]
    blocks += [(Fraction(1, 2**k), Fraction(1, 2**k), Fraction(1, 2 ** (k + 1))) for k in range(1, n + 1)]
    return _blocks_map(blocks)


def example62_phi(n: int, t) -> PacMap:
    """Rotate each of the ``n`` equal blocks by ``frac(t) / n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = as_number(t)
    w = Fraction(1, n)
    return _blocks_map((k * w, w, _frac_part(t) * w) for k in range(n))


def example62(t) -> PacMap:
    """Continuous in ``t`` but not a homomorphism; the block count grows with ``|t|``."""
    t = as_number(t)
    return example62_phi(max(1, math.floor(abs(t))), t)


def _dyadic_generator(n: int) -> PacMap:
    if n < 0:
        raise ValueError("n must be >= 0")
    blocks = [(ZERO, Fraction(1, 2**n), ZERO)] if n else []
    blocks += [(Fraction(1, 2**m), Fraction(1, 2**m), Fraction(1, 2 ** (n + 1))) for m in range(1, n + 1)]
    if not blocks:
        return PacMap.identity()
    return _blocks_map(blocks)


def dyadic63(m: int, n: int) -> PacMap:
    """The ``m``-th power of the generator attached to ``2^-n``."""
    return power(_dyadic_generator(n), m)


def dyadic_rho(t) -> PacMap:
    t = Fraction(t)
    n = t.denominator.bit_length() - 1
    if t.denominator != 2**n:
        raise ValueError(f"{t} is not a dyadic rational")
    return dyadic63(t.numerator, n)


# -- glued flow ---------------------------------------------------------------
GLUED_DOMAIN = (Fraction(1, 2), Fraction(3, 8), Fraction(1, 8))
# fixed points of the flow on the first circle; the second one attracts for t > 0
GLUED_REPELLER = Fraction(3, 8)
GLUED_ATTRACTOR = Fraction(1, 8)


def glued_h() -> PacMap:
    """The gluing IET from the three-circle domain onto the unit circle."""
    q = Fraction
    return PacMap.build(GLUED_DOMAIN, (ONE,), [
        Piece(0, ZERO, q(1, 4), 0, Affine(ONE, ZERO)),
        Piece(0, q(1, 4), q(1, 4), 0, Affine(ONE, q(3, 8))),
        Piece(1, ZERO, q(3, 8), 0, Affine(ONE, q(1, 4))),
        Piece(2, ZERO, q(1, 8), 0, Affine(ONE, q(7, 8))),
    ])


def glued_psi(t) -> PacMap:
    """Flow with fixed points 1/8 and 3/8 on the circle of length 1/2; identity elsewhere."""
    if t == 0:
        return PacMap.identity(GLUED_DOMAIN)
    r, a = GLUED_REPELLER, GLUED_ATTRACTOR
    half = GLUED_DOMAIN[0]
    pieces = [
        Piece(0, a, r - a, 0, FlowChart(r, a, t)),
        Piece(0, r, a + half - r, 0, FlowChart(r, a + half, t)),
        Piece(1, ZERO, GLUED_DOMAIN[1], 1, Affine(ONE, ZERO)),
        Piece(2, ZERO, GLUED_DOMAIN[2], 2, Affine(ONE, ZERO)),
    ]
    return PacMap.build(GLUED_DOMAIN, GLUED_DOMAIN, pieces)


def glued_flow61(t) -> PacMap:
    if t == 0:
        return PacMap.identity()
    h = glued_h()
    return compose(h, compose(glued_psi(t), invert(h)))


# -- registry used by the CLI and the straightening scripts ------------------
def make_family(name: str, *, lam=None, alpha=None) -> OneParameterFamily:
    if name == "torus":
        lam = lam or (Fraction(1, 3),) * 3
        alpha = alpha or (Fraction(1, 3), ZERO, Fraction(1, 2))
        return torus_family(TorusParams(tuple(lam), tuple(alpha)))
    if name == "glued61":
        return OneParameterFamily("glued61", glued_flow61)
    if name == "dyadic63":
        return OneParameterFamily("dyadic63", dyadic_rho)
    if name == "example62":
        return OneParameterFamily("example62", example62, declared_homomorphism=False)
    if name == "rotation":
        return rotation_family(alpha[0] if alpha else Fraction(1, 2))
    raise ValueError(f"unknown family {name!r}")


FAMILIES = ("torus", "glued61", "dyadic63", "example62", "rotation")
INDEXED = {"example31": example31, "example41": example41, "cauchy46": cauchy46}


@dataclass
class HomomorphismReport:
    max_defect: float
    worst_pair: tuple | None
    continuity: list  # (t_k, d(fam(t_k), id))

    def ok(self, tol: float) -> bool:
        return self.max_defect <= tol


def homomorphism_check(fam: OneParameterFamily, ts: Sequence, tol: float = 1e-9,
                       continuity_steps: int = 6) -> HomomorphismReport:
    """Largest ``d(fam(s + t), fam(s) o fam(t))`` over the sampled pairs."""
    ts = [as_number(t) for t in ts]
    worst, pair = 0, None
    for s in ts:
        for t in ts:
            defect = d(fam(s + t), compose(fam(s), fam(t)))
            v = float(defect.value)
            if v > worst or pair is None:
                worst, pair = v, (s, t)
    ident = PacMap.identity(fam(ZERO).source)
    cont = []
    for k in range(1, continuity_steps + 1):
        tk = fam.t0 / 2**k
        cont.append((tk, float(d(fam(tk), ident).value)))
    return HomomorphismReport(worst, pair, cont)


def sharp_profile(fam: OneParameterFamily, ts: Sequence) -> list[tuple]:
    return [(t, sharp(fam(t))) for t in ts]
