import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from circleflow.generators import random_aiet
from circleflow.geometry import Arc, CirclePoint

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DENOM = 96

fractions = st.integers(0, DENOM - 1).map(lambda k: Fraction(k, DENOM))
lengths = st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3, 8), Fraction(5, 3)])


@st.composite
def points(draw, l=None):
    l = draw(lengths) if l is None else l
    return CirclePoint(draw(fractions) * l, l)


@st.composite
def arcs(draw, l=Fraction(1), max_frac=1):
    start = draw(fractions) * l
    k = draw(st.integers(1, int(DENOM * max_frac)))
    return Arc(CirclePoint(start, l), Fraction(k, DENOM) * l, draw(st.booleans()), draw(st.booleans()))


def aiets(max_pieces=5, affine=True):
    """Random affine interval exchanges of the unit circle, driven by a seed."""
    return st.integers(0, 2**32 - 1).map(
        lambda s: random_aiet(random.Random(s), max_pieces=max_pieces, affine=affine))


@pytest.fixture
def rng():
    return random.Random(12345)
