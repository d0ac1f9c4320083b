"""Random maps for property tests and experiments."""
from __future__ import annotations

import random
from fractions import Fraction

from .pac import Affine, PacMap, Piece


def _random_partition(rng: random.Random, k: int, denom: int) -> list[Fraction]:
    """``k`` positive rationals with denominator ``denom`` summing to 1."""
    cuts = sorted(rng.sample(range(1, denom), k - 1))
    bounds = [0] + cuts + [denom]
    return [Fraction(b - a, denom) for a, b in zip(bounds, bounds[1:])]


def random_aiet(rng: random.Random, max_pieces: int = 5, denom: int = 48, affine: bool = True,
                rotate: bool = True) -> PacMap:
    """Random AIET of the unit circle: cut source and target, permute, join affinely."""
    k = rng.randint(1, max_pieces)
    src = _random_partition(rng, k, denom)
    tgt = _random_partition(rng, k, denom) if affine else list(src)
    order = list(range(k))
    rng.shuffle(order)
    # target blocks laid out in shuffled order, optionally rotated as a whole
    offset = Fraction(rng.randrange(denom), denom) if rotate else Fraction(0)
    tstart = {}
    acc = offset
    for j in order:
        tstart[j] = acc
        acc += tgt[j]
    pieces, s = [], Fraction(0)
    for i in range(k):
        slope = tgt[i] / src[i]
        pieces.append(Piece(0, s, src[i], 0, Affine(slope, tstart[i] - slope * s)))
        s += src[i]
    shift = Fraction(rng.randrange(denom), denom) if rotate else Fraction(0)
    f = PacMap.build((Fraction(1),), (Fraction(1),), pieces)
    if shift:
        from .pac import compose
        f = compose(f, PacMap.rotation(shift))
    return f


def random_iet(rng: random.Random, max_pieces: int = 5, denom: int = 48) -> PacMap:
    return random_aiet(rng, max_pieces, denom, affine=False)


def random_arc_inside(rng: random.Random, lo, hi, denom: int = 97):
    """A rational sub-interval ``[a, b)`` of the lifted interval ``[lo, hi)``."""
    span = hi - lo
    u = sorted(Fraction(rng.randrange(denom + 1), denom) for _ in range(2))
    if u[0] == u[1]:
        u[1] = min(Fraction(1), u[0] + Fraction(1, denom))
        if u[0] == u[1]:
            u[0] -= Fraction(1, denom)
    return lo + span * u[0], lo + span * u[1]
