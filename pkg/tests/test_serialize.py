import json
from fractions import Fraction as F

import pytest
from hypothesis import given

from circleflow import serialize
from circleflow.flows import glued_flow61, glued_h
from circleflow.pac import PacMap

from conftest import aiets


@given(aiets())
def test_map_round_trip(f):
    assert serialize.map_from_json(json.loads(serialize.dumps_map(f))) == f


def test_domain_and_numeric_maps_round_trip():
    h = glued_h()
    assert serialize.map_from_json(serialize.map_to_json(h)) == h
    g = glued_flow61(F(1, 4))
    back = serialize.map_from_json(json.loads(serialize.dumps_map(g)))
    assert back.numeric and len(back.pieces) == len(g.pieces)
    for k in range(40):
        assert abs(back(F(k, 40)) - g(F(k, 40))) <= 1e-12


def test_rationals_are_strings():
    obj = serialize.map_to_json(PacMap.rotation(F(1, 3)))
    t = obj["pieces"][0]["transform"]
    assert t == {"kind": "affine", "slope": "1", "offset": "1/3"}
    assert obj["pieces"][0]["arc"]["start"] == {"pos": "0", "len": "1"}


@pytest.mark.parametrize("value", ["1/0", "abc", True, None, [1]])
def test_bad_numbers(value):
    with pytest.raises(serialize.FormatError):
        serialize.num_from_json(value)


def test_invalid_maps_are_rejected():
    obj = serialize.map_to_json(PacMap.rotation(F(1, 3)))
    obj["pieces"][0]["arc"]["length"] = "1/2"
    with pytest.raises(serialize.FormatError, match="tiling"):
        serialize.map_from_json(obj)
    with pytest.raises(serialize.FormatError, match="missing"):
        serialize.map_from_json({"source": ["1"]})
    obj = serialize.map_to_json(PacMap.rotation(F(1, 3)))
    obj["pieces"][0]["transform"]["kind"] = "spline"
    with pytest.raises(serialize.FormatError, match="spline"):
        serialize.map_from_json(obj)


def test_bad_json_reports_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "source": [\n}')
    with pytest.raises(serialize.FormatError, match="line 3"):
        serialize.load_map(p)
