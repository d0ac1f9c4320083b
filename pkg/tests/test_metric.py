import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circleflow.flows import example31, example41, glued_flow61
from circleflow.geometry import Arc, CirclePoint
from circleflow.metric import (MetricValue, d, d_tilde1, measure_U, measure_U_n, measure_distortion_check,
                               quad_oracle_d_tilde1)
from circleflow.pac import PacMap, compose, invert

from conftest import aiets

ID = PacMap.identity()
R = PacMap.rotation


def test_d_tilde1_examples():
    assert d_tilde1(ID, ID) == MetricValue(0)
    assert d_tilde1(R(F(1, 4)), ID).value == F(1, 4)
    assert abs(quad_oracle_d_tilde1(R(F(1, 4)), ID, 10_000) - 0.25) <= 1e-8
    assert quad_oracle_d_tilde1(R(F(1, 4)), R(F(1, 4)), 1000) == 0


def test_tent_shape_is_integrated_exactly():
    # x -> 2x on [0,1/2) pushes points up to half a turn away
    f = PacMap.from_affine_pieces([(0, F(1, 2), 2, 0), (F(1, 2), 1, F(2, 3), F(1, 3))])
    exact = d_tilde1(f, ID).value
    assert abs(float(exact) - quad_oracle_d_tilde1(f, ID, 200_000)) <= 1e-8


@pytest.mark.parametrize("n", range(2, 9))
def test_example31_bounds(n):
    f = example31(n)
    assert d_tilde1(f, ID).value <= F(1, 2 * n)
    assert d_tilde1(invert(f), ID).value >= F(1, 24)


@pytest.mark.parametrize("n", range(1, 11))
def test_example41_distance(n):
    assert d(example41(n), ID).value == F(1, 2**n)


def test_distance_domain_mismatch():
    with pytest.raises(ValueError):
        d(ID, PacMap.identity(F(1, 2)))
    with pytest.raises(ValueError):
        d(PacMap.identity((F(1, 2), F(1, 2))), PacMap.identity((F(1, 2), F(1, 2))))


@given(aiets(), aiets(), aiets())
def test_d_is_a_metric(f, g, h):
    dfg = d(f, g)
    assert dfg.exact
    assert dfg.value == d(g, f).value
    assert (dfg.value == 0) == (f == g)
    assert d(f, f).value == 0
    assert d(f, h).value <= dfg.value + d(g, h).value


@given(aiets(), aiets())
def test_inversion_is_an_isometry(f, g):
    assert d(invert(f), invert(g)).value == d(f, g).value


@given(aiets(), aiets())
def test_exact_matches_quadrature(f, g):
    assert abs(float(d_tilde1(f, g).value) - quad_oracle_d_tilde1(f, g, 100_000)) <= 1e-8


def test_measure_U_examples():
    f = example41(2)
    assert measure_U(f, f, F(1, 10)) == 0
    assert measure_U(R(F(1, 4)), ID, F(1, 5)) == 1
    assert measure_U(R(F(1, 4)), ID, F(1, 4)) == 0
    with pytest.raises(ValueError):
        measure_U(f, f, 0)


@given(aiets(), aiets(), st.sampled_from([2, 10, 100]))
def test_U_n_measure_bound(f, g, n):
    assert measure_U_n(f, g, n) <= F(1, n)


@given(aiets(), aiets(), st.integers(1, 47))
def test_distance_bounded_by_level_set(f, g, k):
    delta0 = F(k, 96)
    delta = measure_U(f, g, delta0)
    assert d_tilde1(f, g).value <= delta / 2 + delta0 * (1 - delta)


def test_rotations_converge_in_both_senses():
    alpha = F(1, 3)
    target = R(alpha)
    dists, levels = [], {F(1, 10): [], F(1, 100): []}
    for n in (3, 5, 10, 50, 200, 1000):
        fn = R(alpha + F(1, n))
        dists.append(d_tilde1(fn, target).value)
        for delta in levels:
            levels[delta].append(measure_U(fn, target, delta))
    assert dists[-1] < F(1, 999) and dists == sorted(dists, reverse=True)
    assert all(seq[-1] == 0 for seq in levels.values())


def test_group_operations_continuous_at_sampled_sequence():
    h = example41(2)
    prev_left = prev_right = None
    for n in (4, 8, 16, 32, 64):
        fn = R(F(1, n))
        assert d(fn, ID).value == F(2, n)
        left, right = d(compose(h, fn), h).value, d(compose(fn, h), h).value
        assert left <= 8 * d(fn, ID).value and right <= 8 * d(fn, ID).value
        if prev_left is not None:
            assert left <= prev_left and right <= prev_right
        prev_left, prev_right = left, right


def test_measure_distortion_examples():
    assert measure_distortion_check(ID, Arc(CirclePoint(F(1, 3)), F(1, 4)))
    for n in range(2, 9):
        f = example31(n)
        arc = Arc(CirclePoint(1 - F(1, 4 * n)), F(1, 4 * n))
        from circleflow.pac import image_measure
        assert image_measure(f, arc) == F(1, 8)
        assert measure_distortion_check(f, arc)


@given(st.integers(0, 2**32 - 1))
def test_measure_distortion_random(seed):
    from circleflow.generators import random_aiet
    rng = random.Random(seed)
    g = random_aiet(rng)
    arc = Arc(CirclePoint(F(rng.randrange(97), 97)), F(rng.randrange(1, 49), 97))
    assert measure_distortion_check(g, arc)


def test_numeric_distance_has_error_bound():
    val = d(glued_flow61(F(1, 4)), ID)
    assert not val.exact and val.error_bound >= 0 and val.value > 0
    assert d(glued_flow61(F(1, 4)), glued_flow61(F(1, 4))).value <= 1e-9
