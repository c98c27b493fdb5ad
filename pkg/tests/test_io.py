import json
import os
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgemc import io
from hodgemc.errors import ParseError
from hodgemc.katz import hypergeometric

from seeds import random_data

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

MINIMAL = """{
  "points": [
    {"location": "0", "nu": [{"gamma": "1/2", "ell": 0, "p": 0, "mult": 1}]},
    {"location": "inf", "nu": [{"gamma": "1/2", "ell": 0, "p": 0, "mult": 1}]}
  ],
  "h": {"0": 1},
  "delta_valid": false
}
"""


def test_minimal_document():
    d = io.parse(MINIMAL)
    assert d.rank == 1 and not d.delta_valid
    assert d.infinity.mult(F(1, 2), 0, 0) == 1


def test_gauss_fixture():
    with open(os.path.join(FIXTURES, "gauss.json")) as fh:
        text = fh.read()
    d = io.parse(text)
    assert d == hypergeometric([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
    assert io.serialize(d) == text


@pytest.mark.parametrize(
    "old, new, message, line, field",
    [
        ('"gamma": "1/2", "ell": 0, "p": 0, "mult": 1}]},\n    {"location": "inf"',
         '"gamma": "2/4", "ell": 0, "p": 0, "mult": 1}]},\n    {"location": "inf"',
         "unreduced fraction", 3, "gamma"),
        ('"gamma": "1/2", "ell": 0, "p": 0, "mult": 1}]}\n',
         '"gamma": "3/2", "ell": 0, "p": 0, "mult": 1}]}\n', "out of range", 4, "gamma"),
        ('"mult": 1}]}\n', '"mult": -1}]}\n', "negative multiplicity", 4, "mult"),
        ('"mult": 1}]}\n', '"mult": 1}, {"gamma": "1/2", "ell": 0, "p": 0, "mult": 2}]}\n',
         "duplicate entry", 4, "nu"),
        ('"h": {"0": 1}', '"h": {"0": 1, "0": 2}', "duplicate key", 6, "0"),
        ('"h": {"0": 1}', '"h": {"0": 1', "malformed JSON", 9, None),
        ('"location": "0"', '"location": "inf"', "duplicate location", 4, "location"),
    ],
)
def test_parse_errors(old, new, message, line, field):
    text = MINIMAL.replace(old, new, 1)
    assert text != MINIMAL
    with pytest.raises(ParseError) as info:
        io.parse(text)
    assert message in str(info.value)
    assert info.value.line == line
    assert info.value.field == field


def test_structural_errors():
    with pytest.raises(ParseError, match="missing field 'h'"):
        io.parse('{"points": []}')
    with pytest.raises(ParseError, match="unknown field"):
        io.parse(MINIMAL.replace('"delta_valid"', '"extra": 1, "delta_valid"'))
    with pytest.raises(ParseError, match="positive rank"):
        io.parse('{"points": [], "h": {}}')
    with pytest.raises(ParseError, match="integer"):
        io.parse(MINIMAL.replace('"ell": 0', '"ell": "0"', 1))


def test_serializer_sorts():
    doc = json.loads(MINIMAL)
    doc["points"].reverse()
    doc["points"][1]["nu"].insert(0, {"gamma": "1/3", "ell": 0, "p": 0, "mult": 0})
    out = json.loads(io.serialize(io.data_from_json(doc)))
    assert [p["location"] for p in out["points"]] == ["0", "inf"]
    assert list(out) == ["delta_valid", "h", "points"]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000))
def test_round_trip(seed):
    d = random_data(seed)
    text = io.serialize(d)
    assert io.parse(text) == d
    assert io.serialize(io.parse(text)) == text


def test_atomic_write(tmp_path):
    target = tmp_path / "out.json"
    io.write_atomic(str(target), "abc\n")
    assert target.read_text() == "abc\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
