"""Unit tests for the canonical JSON codec."""

import json
from pathlib import Path

import pytest
import pytest_check as check

from leveltrees.parsing.codec import ParseError, codec
from leveltrees.trees.fixtures import fixture
from leveltrees.trees.level2 import Level2Tree
from leveltrees.trees.level3 import Level3Tree

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def test_json_fixtures_match_the_built_in_trees():
    """Every fixtures/<name>.json decodes to the built-in tree of that name."""
    paths = sorted(FIXTURES.glob("*.json"))
    assert paths
    for path in paths:
        check.equal(codec.load(path), fixture(path.stem), path.name)


def test_level1_wire_form():
    assert json.loads(codec.dumps(fixture("W4"))) == [[0], [1], [2], [3]]


def test_shape_decides_the_level():
    assert isinstance(codec.loads('{"t1": [], "t2": []}'), Level2Tree)
    assert isinstance(codec.loads('{"entries": []}'), Level3Tree)


class TestRoundTrip:
    """dumps then loads gives back the tree."""

    @pytest.mark.parametrize("name", ["W21", "Q22", "T22", "X22", "Y23", "R23"])
    def test_round_trip(self, name):
        tree = fixture(name)
        assert codec.loads(codec.dumps(tree)) == tree

    def test_minus_one_travels_as_null(self):
        wire = json.loads(codec.dumps(fixture("Q20")))
        assert any(e["node"] is None for e in wire["t2"])


class TestParseErrors:
    def test_not_json(self):
        with pytest.raises(ParseError, match="malformed tree JSON"):
            codec.loads("{not json")

    def test_wrong_top_level(self):
        with pytest.raises(ParseError, match="expected a JSON list or object"):
            codec.loads("42")

    def test_wrong_shape(self):
        with pytest.raises(ParseError, match="malformed tree JSON"):
            codec.loads('[["a"]]')
        with pytest.raises(ParseError, match="malformed tree JSON"):
            codec.loads('{"entries": [{"r": [[0]]}]}')

    def test_bad_root_entry(self):
        text = '{"t1": [], "t2": [{"q": [], "tree": [[0]], "node": [0]}]}'
        with pytest.raises(ParseError, match="root entry"):
            codec.loads(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read"):
            codec.load(tmp_path / "absent.json")
