"""Tests for map-definition files."""

import pytest

from lowdisc_maps.errors import InputError, MapValidationError
from lowdisc_maps.mapfile import (
    SHIPPED_MAPS,
    beta_transformation,
    load_map,
    map_fingerprint,
    parse_map_text,
)

GOLDEN_TEXT = """
name: golden
branches:
  - {left: 0, right: 1/phi, sign: 1, beta: phi, image_left: 0, image_right: 1}
  - {left: 1/phi, right: 1, sign: 1, beta: phi, image_left: 0, image_right: 1/phi}
"""


class TestLoadMap:
    """Tests for load_map() and parse_map_text()."""

    @pytest.mark.parametrize("name", SHIPPED_MAPS)
    def test_shipped_maps_load(self, name):
        """Every shipped map validates."""
        fmap = load_map(name)
        assert fmap.name == name
        assert fmap.beta > 1

    def test_expressions(self):
        """Expression values are evaluated."""
        fmap = parse_map_text(GOLDEN_TEXT)
        assert fmap.endpoints[1] == pytest.approx(0.6180339887498949)

    def test_path(self, tmp_path):
        """Map files load from a path."""
        path = tmp_path / "golden.yaml"
        path.write_text(GOLDEN_TEXT, encoding="utf-8")
        assert load_map(path).name == "golden"

    def test_json_is_accepted(self):
        """JSON documents parse as YAML."""
        text = (
            '{"name": "d", "branches": ['
            '{"left": 0, "right": 0.5, "sign": 1, "beta": 2, "image_left": 0, "image_right": 1},'
            '{"left": 0.5, "right": 1, "sign": 1, "beta": 2, "image_left": 0, "image_right": 1}'
            "]}"
        )
        assert parse_map_text(text).size == 2

    def test_missing_file(self, tmp_path):
        """A missing file is an input error that lists the shipped maps."""
        with pytest.raises(InputError, match="doubling"):
            load_map(tmp_path / "nope.yaml")

    def test_malformed_yaml(self):
        """Broken YAML is an input error."""
        with pytest.raises(InputError, match="malformed"):
            parse_map_text("branches: [")

    def test_schema_violation(self):
        """Unknown expression names fail schema validation."""
        text = GOLDEN_TEXT.replace("1/phi, sign", "1/tau, sign", 1)
        with pytest.raises(MapValidationError):
            parse_map_text(text)

    def test_bad_sign(self):
        """Signs other than +1 and -1 are refused."""
        with pytest.raises(MapValidationError):
            parse_map_text(GOLDEN_TEXT.replace("sign: 1", "sign: 2", 1))

    def test_not_a_mapping(self):
        """A bare list is not a map file."""
        with pytest.raises(MapValidationError, match="mapping"):
            parse_map_text("- 1\n- 2\n")


class TestFingerprint:
    """Tests for map_fingerprint()."""

    def test_stable(self):
        """Equal maps have equal fingerprints."""
        assert map_fingerprint(load_map("doubling")) == map_fingerprint(load_map("doubling"))

    def test_format(self):
        """Fingerprints are 16 hex digits."""
        digest = map_fingerprint(load_map("tent"))
        assert len(digest) == 16
        int(digest, 16)

    def test_distinguishes_maps(self):
        """Doubling and tent differ."""
        assert map_fingerprint(load_map("doubling")) != map_fingerprint(load_map("tent"))


class TestBetaTransformation:
    """Tests for beta_transformation()."""

    def test_partial_last_branch(self):
        """beta = 1.9 has a full branch and a partial one."""
        fmap = beta_transformation(1.9)
        assert fmap.size == 2
        assert fmap.branches[1].image_right == pytest.approx(0.9)

    def test_integer_beta(self):
        """An integer beta gives full branches."""
        fmap = beta_transformation(3.0)
        assert fmap.size == 3
        assert all(b.image_right == pytest.approx(1.0) for b in fmap.branches)

    def test_matches_shipped_file(self):
        """The shipped beta-1.9 file is the same map."""
        shipped = load_map("beta-1.9")
        built = beta_transformation(1.9)
        for a, b in zip(shipped.branches, built.branches, strict=True):
            assert a.right == pytest.approx(b.right)
            assert a.image_right == pytest.approx(b.image_right)

    def test_not_expanding(self):
        """beta must exceed 1."""
        with pytest.raises(MapValidationError):
            beta_transformation(1.0)
