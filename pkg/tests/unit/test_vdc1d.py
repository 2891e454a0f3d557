"""Tests for one-dimensional van der Corput sequences."""

import pytest

from lowdisc_maps.errors import DomainError, ResourceGuardError
from lowdisc_maps.interval_maps import expansion
from lowdisc_maps.vdc1d import VdcStream, radical_inverse, vdc_levels, vdc_next, vdc_take


class TestVdcTake:
    """Tests for vdc_take() and the stream."""

    def test_doubling_from_half(self, doubling):
        """Based at 1/2 the doubling map gives the binary radical inverses."""
        values = [p.value for p in vdc_take(doubling, 0.5, 7)]
        assert values == [0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]

    def test_doubling_from_zero_repeats(self, doubling):
        """Repeated points are kept."""
        values = [p.value for p in vdc_take(doubling, 0.0, 7)]
        assert values == [0.0, 0.0, 0.5, 0.0, 0.5, 0.25, 0.75]

    def test_classic_sequence(self, doubling):
        """127 points match radical_inverse(1..127)."""
        values = [p.value for p in vdc_take(doubling, 0.5, 127)]
        assert values == [radical_inverse(k) for k in range(1, 128)]

    def test_golden_mean_stays_in_unit_interval(self, golden_mean):
        """Based at 1/phi no point lands on 1."""
        points = vdc_take(golden_mean, (5.0**0.5 - 1.0) / 2.0, 6)
        assert len(points) == 6
        assert all(0.0 <= p.value < 1.0 for p in points)

    def test_indices_and_words(self, doubling):
        """Points carry running indices and words of their level."""
        points = vdc_take(doubling, 0.5, 4)
        assert [p.index for p in points] == [0, 1, 2, 3]
        assert [str(p.word) for p in points] == ["eps", "0", "1", "00"]

    def test_words_are_expansions(self, golden_mean):
        """Each point's expansion reproduces its word."""
        for p in vdc_take(golden_mean, 0.5, 30):
            assert expansion(golden_mean, p.value, len(p.word)) == p.word

    def test_zero_points(self, doubling):
        """n = 0 gives nothing."""
        assert vdc_take(doubling, 0.5, 0) == []

    def test_negative_count(self, doubling):
        """Negative counts are refused."""
        with pytest.raises(DomainError):
            vdc_take(doubling, 0.5, -1)

    def test_base_outside_interval(self, doubling):
        """The base point must lie in [0, 1)."""
        with pytest.raises(DomainError):
            VdcStream(doubling, 1.0)

    def test_stream_is_iterable(self, doubling):
        """Iteration and vdc_next share the same state."""
        stream = VdcStream(doubling, 0.5)
        first = next(stream)
        second = vdc_next(stream)
        assert (first.value, second.value) == (0.5, 0.25)
        assert stream.emitted == 2

    def test_budget(self, doubling):
        """A level larger than the budget is refused."""
        with pytest.raises(ResourceGuardError):
            vdc_take(doubling, 0.5, 10, budget=2)


class TestVdcLevels:
    """Tests for vdc_levels()."""

    def test_single_level(self, doubling):
        """Level 2 in word order."""
        points = vdc_levels(doubling, 0.5, 2, 2)
        assert [p.value for p in points] == [0.125, 0.625, 0.375, 0.875]
        assert [p.index for p in points] == [0, 1, 2, 3]

    def test_level_sizes(self, three_shift):
        """A full shift on three symbols has 3^n points at level n."""
        assert len(vdc_levels(three_shift, 0.5, 0, 3)) == 1 + 3 + 9 + 27

    def test_agrees_with_take(self, tent):
        """Levels 0..3 are the first 15 points of the stream."""
        by_level = [p.value for p in vdc_levels(tent, 0.3, 0, 3)]
        assert by_level == [p.value for p in vdc_take(tent, 0.3, 15)]

    def test_bad_range(self, doubling):
        """first must not exceed last."""
        with pytest.raises(DomainError):
            vdc_levels(doubling, 0.5, 3, 2)


class TestRadicalInverse:
    """Tests for radical_inverse()."""

    @pytest.mark.parametrize(
        ("k", "base", "expected"),
        [(0, 2, 0.0), (1, 2, 0.5), (6, 2, 0.375), (1, 3, 1 / 3), (3, 3, 1 / 9), (5, 3, 7 / 9)],
    )
    def test_values(self, k, base, expected):
        """Digits of k are mirrored about the radix point."""
        assert radical_inverse(k, base) == pytest.approx(expected)

    def test_bad_base(self):
        """Bases below 2 are refused."""
        with pytest.raises(DomainError):
            radical_inverse(3, 1)
