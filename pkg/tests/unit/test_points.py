"""Tests for point generation and point files."""

import pytest

from lowdisc_maps.config import PointFormat, build_config
from lowdisc_maps.errors import InputError, ResourceGuardError
from lowdisc_maps.points import generate_points, read_points, write_points


class TestGeneratePoints:
    """Tests for generate_points()."""

    def test_one_dimension(self):
        """Levels 0..2 of the doubling map from 1/2."""
        points = generate_points(build_config(levels="0..2"))
        assert points.level_sizes == [1, 2, 4]
        assert [r.coords[0] for r in points.records] == [
            0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875,
        ]
        assert [r.label for r in points.records[:4]] == ["eps", "0", "1", "00"]
        assert points.header["markov"] is True
        assert points.header["points"] == 7
        assert len(points.header["map_hash"]) == 16

    def test_one_dimension_count(self):
        """--n takes a prefix across levels."""
        points = generate_points(build_config(map="golden-mean", n=10))
        assert len(points.records) == 10
        assert [r.index for r in points.records] == list(range(10))

    def test_two_dimensions(self):
        """Level n of the 2D map holds 4^n points."""
        points = generate_points(build_config(dim=2, levels="0..2"))
        assert points.level_sizes == [1, 4, 16]
        assert points.coordinates().shape == (21, 2)
        assert [r.label for r in points.records[:3]] == ["eps", "0", "1"]
        assert points.records[5].label == "00"
        assert points.header["map2d"] == "shuffle"

    def test_two_dimensions_count(self):
        """A count stops partway through a level."""
        points = generate_points(build_config(dim=2, n=7))
        assert points.level_sizes == [1, 4, 2]

    def test_three_dimensions(self):
        """3D output carries its caveat."""
        points = generate_points(build_config(dim=3, levels="0..1"))
        assert points.level_sizes == [1, 8]
        assert "conjectural" in points.header["note"]
        assert points.header["three_d_mode"] == "level"

    def test_budget(self):
        """Levels above the word budget are refused."""
        with pytest.raises(ResourceGuardError):
            generate_points(build_config(dim=2, levels="0..3", word_budget=20))

    def test_header_echoes_config(self):
        """The resolved configuration is part of the header."""
        points = generate_points(build_config(map="tent", levels="0..1", precision=80))
        assert points.header["map"] == "tent"
        assert points.header["precision"] == 80
        assert points.header["levels"] == "0..1"


class TestPointFiles:
    """Tests for write_points() and read_points()."""

    @pytest.fixture
    def points_2d(self):
        return generate_points(build_config(dim=2, levels="0..2"))

    def _write(self, path, points, fmt):
        with path.open("w", encoding="utf-8") as stream:
            write_points(points, stream, fmt)

    def test_decimal(self, tmp_path, points_2d):
        """Decimal rows restore the exact floats."""
        path = tmp_path / "pts.txt"
        self._write(path, points_2d, PointFormat.DECIMAL)
        loaded = read_points(path)
        assert loaded.dim == 2
        assert loaded.coords.tolist() == points_2d.coordinates().tolist()
        assert loaded.level_sizes == [1, 4, 16]

    def test_bits(self, tmp_path, points_2d):
        """Bit strings are written at full precision."""
        path = tmp_path / "pts.txt"
        self._write(path, points_2d, PointFormat.BITS)
        rows = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
        assert all(len(token) == 64 for token in rows[0].split())
        assert read_points(path).coords.tolist() == points_2d.coordinates().tolist()

    def test_csv(self, tmp_path, points_2d):
        """CSV has a column row with index, level and label."""
        path = tmp_path / "pts.csv"
        self._write(path, points_2d, PointFormat.CSV)
        body = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
        assert body[0] == "index,level,label,x,y"
        assert body[1].startswith("0,0,eps,")
        assert read_points(path).coords.shape == (21, 2)

    def test_header_is_sorted(self, tmp_path, points_2d):
        """Header lines are sorted by key."""
        path = tmp_path / "pts.txt"
        self._write(path, points_2d, PointFormat.DECIMAL)
        keys = [ln[2:].split(":")[0] for ln in path.read_text().splitlines() if ln.startswith("#")]
        assert keys == sorted(keys)
        assert "format" in keys

    def test_plain_rows(self, tmp_path):
        """Files without a header are read as decimal rows."""
        path = tmp_path / "plain.txt"
        path.write_text("0.1 0.2\n0.3 0.4\n\n", encoding="utf-8")
        loaded = read_points(path)
        assert loaded.coords.tolist() == [[0.1, 0.2], [0.3, 0.4]]
        assert loaded.level_sizes == []

    def test_missing(self, tmp_path):
        """A missing file is an input error."""
        with pytest.raises(InputError, match="not found"):
            read_points(tmp_path / "nope.txt")

    def test_header_only(self, tmp_path):
        """A file with no points is an input error."""
        path = tmp_path / "empty.txt"
        path.write_text("# dim: 1\n", encoding="utf-8")
        with pytest.raises(InputError, match="no points"):
            read_points(path)

    def test_ragged_rows(self, tmp_path):
        """Rows must agree on the dimension."""
        path = tmp_path / "ragged.txt"
        path.write_text("0.1 0.2\n0.3\n", encoding="utf-8")
        with pytest.raises(InputError, match="same"):
            read_points(path)

    def test_unparsable(self, tmp_path):
        """Errors name the offending line."""
        path = tmp_path / "bad.txt"
        path.write_text("0.1\nabc\n", encoding="utf-8")
        with pytest.raises(InputError, match=":2:"):
            read_points(path)
