import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circleflow.flows import example31, example41, glued_h
from circleflow.generators import random_aiet, random_arc_inside
from circleflow.geometry import Arc, CirclePoint, is_ordered_tuple
from circleflow.pac import (Affine, FlowChart, PacMap, Piece, UnsupportedComposition, bp0, compose,
                            continuity_intervals, delta_f, delta_f_at, evaluate, invert, left_limit,
                            image_measure, normalize, power, sharp, v_n, validate)

from conftest import aiets

ID = PacMap.identity()
R = PacMap.rotation


def test_evaluate_examples():
    assert evaluate(R(F(1, 4)), CirclePoint(F(7, 8))).pos == F(1, 8)
    assert example41(1)(0) == F(1, 4)
    assert all(ID(F(k, 7)) == F(k, 7) for k in range(7))


def test_left_limit_examples():
    assert left_limit(ID, F(1, 2)).pos == F(1, 2)
    assert left_limit(example41(1), F(1, 4)).pos == F(1, 2)
    f2 = example31(2)
    last = f2.pieces[-1]
    assert left_limit(f2, 0).pos == last.transform(last.end) % 1


@given(aiets())
def test_left_limit_differs_exactly_at_breakpoints(f):
    bps = set(bp0(f))
    for k in range(48):
        x = F(k, 48)
        assert (left_limit(f, x).pos != f(x)) == (x in bps)


def test_normalize_merges_split_rotation():
    q = F(1, 3)
    split = PacMap((F(1),), (F(1),), tuple(Piece(0, k * q, q, 0, Affine(F(1), F(1, 5))) for k in range(3)))
    n = normalize(split)
    assert len(n.pieces) == 1 and n == R(F(1, 5))


def test_normalize_keeps_example41_pieces():
    assert len(normalize(example41(2)).pieces) == 8


@given(aiets())
def test_normalize_is_idempotent(f):
    once = normalize(PacMap(f.source, f.target, f.pieces))
    assert normalize(PacMap(once.source, once.target, once.pieces)).pieces == once.pieces


@given(aiets())
def test_piece_boundaries_cover_breakpoints(f):
    # boundaries can also sit where the slope changes continuously
    starts = {p.start for p in f.pieces}
    assert set(bp0(f)) <= starts


def test_compose_examples():
    assert compose(R(F(1, 4)), R(F(1, 4))) == R(F(1, 2))
    f3 = example31(3)
    assert compose(f3, invert(f3)) == ID
    assert len(compose(f3, invert(f3)).pieces) == 1


def test_compose_domain_mismatch():
    with pytest.raises(ValueError):
        compose(ID, PacMap.identity(F(1, 2)))


@given(aiets(), aiets(), aiets())
def test_compose_is_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(aiets())
def test_inverse_laws(f):
    assert compose(f, invert(f)) == ID
    assert compose(invert(f), f) == ID
    assert invert(invert(f)) == f


def test_invert_examples():
    assert invert(ID) == ID
    assert sharp(invert(example41(2))) == sharp(example41(2)) == 8


@given(aiets(), aiets())
def test_breakpoints_of_composition(f, g):
    fg = compose(f, g)
    assert set(bp0(fg)) <= set(bp0(g)) | {invert(g)(p) for p in bp0(f)}
    assert abs(sharp(f) - sharp(g)) <= sharp(fg) <= sharp(f) + sharp(g)


@given(aiets())
def test_breakpoints_of_inverse(f):
    assert set(bp0(invert(f))) == {f(p) for p in bp0(f)}


def test_bp0_examples():
    assert bp0(ID) == () and sharp(ID) == 0
    for n in range(1, 7):
        assert sharp(example41(n)) == 2 ** (n + 1)
    gluing = {F(0), F(1, 4), F(5, 8), F(7, 8)}
    # h is a domain map; its inverse is a circle map whose jumps sit at gluing points
    assert set(bp0(invert(glued_h()))) <= gluing


def test_delta_f_examples():
    f = PacMap.from_affine_pieces([(0, F(1, 4), 1, F(3, 8)), (F(1, 4), F(5, 8), 1, F(-1, 4)),
                                   (F(5, 8), F(7, 8), 1, F(1, 8)), (F(7, 8), 1, 1, F(-1, 4))])
    assert bp0(f) == (0, F(1, 4), F(5, 8), F(7, 8))
    assert delta_f(f) == F(1, 8)
    assert delta_f_at(f, F(1, 4)) == F(1, 4)
    assert delta_f(example41(1)) == F(1, 4)
    assert delta_f(R(F(1, 3))) == 1


def test_v_n_examples():
    balls = v_n(example41(1), 1)
    assert len(balls) == 4 and all(b.length == F(1, 5) for b in balls)
    assert sum(b.length for b in balls) == F(4, 5)
    assert v_n(ID, 3) == []


@given(aiets(), st.sampled_from([1, 2, 3, 10, 100]))
def test_v_n_measure_bound(f, n):
    assert sum(a.length for a in v_n(f, n)) <= F(1, n)


def test_continuity_intervals_examples():
    assert continuity_intervals(ID) == [Arc.full()]
    arcs = continuity_intervals(example41(1))
    assert [(a.start.pos, a.length) for a in arcs] == [(F(k, 4), F(1, 4)) for k in range(4)]


@given(aiets())
def test_continuity_intervals_map_onto_inverse_ones(f):
    targets = {(a.start.pos, a.length) for a in continuity_intervals(invert(f))}
    for a in continuity_intervals(f):
        if a.is_full:
            continue
        assert (f(a.start.pos), image_measure(f, a)) in targets


@given(st.integers(0, 2**32 - 1))
def test_order_preserved_inside_continuity_intervals(seed):
    rng = random.Random(seed)
    f = random_aiet(rng)
    arc = rng.choice(continuity_intervals(f))
    lo, hi = random_arc_inside(rng, arc.start.pos, arc.start.pos + arc.length)
    xs = sorted({lo + (hi - lo) * F(rng.randrange(50), 50) for _ in range(4)})
    if len(xs) >= 3:
        assert is_ordered_tuple([f(x % 1) for x in xs])
    # the inverse has no jump strictly inside f([lo, hi))
    ylo = f(lo % 1)
    span = image_measure(f, Arc(CirclePoint(lo % 1), hi - lo))
    assert not any(0 < (p - ylo) % 1 < span for p in bp0(invert(f)))


def test_validate_examples():
    assert validate(ID).ok
    overlap = PacMap((F(1),), (F(1),), (Piece(0, F(0), F(1, 2), 0, Affine(F(1), F(0))),
                                          Piece(0, F(1, 2), F(1, 2), 0, Affine(F(1), F(-1, 4)))))
    assert "image overlap" in validate(overlap).kinds()
    flat = PacMap((F(1),), (F(1),), (Piece(0, F(0), F(1), 0, Affine(F(0), F(0))),))
    assert "orientation" in validate(flat).kinds()
    gap = PacMap((F(1),), (F(1),), (Piece(0, F(0), F(1, 2), 0, Affine(F(1), F(0))),))
    assert "tiling" in validate(gap).kinds()


@given(aiets())
def test_random_maps_validate(f):
    assert validate(f).ok


def test_power():
    f = example41(3)
    assert power(f, 2) == ID
    r = R(F(1, 7))
    assert power(r, 7) == ID and power(r, -1) == invert(r)


@given(st.floats(0.01, 0.49), st.floats(-4, 4))
def test_flow_chart_round_trip(x, t):
    T = FlowChart(0.0, 0.5, t)
    y = T(x)
    assert 0 < y < 0.5
    assert abs(T.inverse_apply(y) - x) <= 1e-12
    assert abs(T.inverse()(y) - x) <= 1e-12


def test_flow_chart_adds_times():
    a, b = FlowChart(0.0, 0.5, 0.3), FlowChart(0.0, 0.5, 0.4)
    c = a.then(b)
    for x in (0.05, 0.2, 0.45):
        assert abs(c(x) - b(a(x))) <= 1e-12


def test_flow_chart_with_stretching_affine_is_rejected():
    fc = PacMap((F(1),), (F(1),), (Piece(0, F(0), F(1, 2), 0, FlowChart(0.0, 0.5, 1.0)),
                                     Piece(0, F(1, 2), F(1, 2), 0, Affine(F(1), F(0)))))
    stretch = PacMap.from_affine_pieces([(0, F(1, 4), 2, 0), (F(1, 4), 1, F(2, 3), F(1, 3))])
    with pytest.raises(UnsupportedComposition):
        compose(fc, stretch)
