"""Cross-module identities between the sequence, spectral and discrepancy layers."""

import pytest

from lowdisc_maps.discrepancy import star_discrepancy_1d
from lowdisc_maps.spectral import generating_function, level_hits
from lowdisc_maps.vdc1d import radical_inverse, vdc_levels, vdc_take

MAPS = ["doubling", "tent", "golden_mean", "three_shift"]


class TestHitCounts:
    """Level hit counts against the generated points."""

    @pytest.mark.parametrize("name", MAPS)
    def test_hits_match_levels(self, request, name):
        """Points of level n inside J are exactly the counted hits."""
        fmap = request.getfixturevalue(name)
        interval = (0.2, 0.7)
        points = vdc_levels(fmap, 0.3, 0, 5)
        for n in range(6):
            inside = [p for p in points if len(p.word) == n and 0.2 <= p.value < 0.7]
            assert len(inside) == level_hits(fmap, interval, 0.3, n)

    @pytest.mark.parametrize("name", MAPS)
    def test_generating_function_scaling(self, request, name):
        """Coefficient n of s^J times beta^n is the level-n hit count."""
        fmap = request.getfixturevalue(name)
        s = generating_function(fmap, (0.2, 0.7), 0.3, 5)
        for n in range(6):
            hits = level_hits(fmap, (0.2, 0.7), 0.3, n)
            assert s.coeffs[n] * fmap.beta**n == pytest.approx(hits)


class TestClassicSequence:
    """The doubling map reproduces the binary van der Corput sequence."""

    @pytest.mark.parametrize("k", range(1, 8))
    def test_star_discrepancy_of_full_blocks(self, doubling, k):
        """The first 2^k - 1 points have D* = 2^-k."""
        values = [p.value for p in vdc_take(doubling, 0.5, 2**k - 1)]
        assert values == [radical_inverse(j) for j in range(1, 2**k)]
        assert star_discrepancy_1d(values).value == pytest.approx(2.0**-k)
