"""Discrepancy growth of the 2D and 3D sequences."""

import pytest

from lowdisc_maps.config import build_config
from lowdisc_maps.discrepancy import dyadic_discrepancy, growth_fit, star_discrepancy_2d
from lowdisc_maps.points import generate_points


@pytest.fixture(scope="module")
def points_2d():
    return generate_points(build_config(dim=2, levels="0..5")).coordinates()


@pytest.fixture(scope="module")
def points_3d():
    return generate_points(build_config(dim=3, levels="0..3")).coordinates()


class TestTwoDimensionalGrowth:
    """N D*_N / (log N)^2 along powers of 4."""

    def test_constants_bounded_without_upward_trend(self, points_2d):
        """c_N stays below 1 and does not grow from N = 4 to N = 1024."""
        ns = [4**k for k in range(1, 6)]
        ds = [star_discrepancy_2d(points_2d[:n]).value for n in ns]
        fit = growth_fit(ns, ds, log_power=2.0)
        assert fit.max_constant <= 1.0
        assert fit.slope <= 0.15

    def test_first_prefix(self, points_2d):
        """Four points from the origin leave D* below 1."""
        assert 0.0 < star_discrepancy_2d(points_2d[:4]).value < 1.0


class TestThreeDimensionalGrowth:
    """N D_N / (log N)^3 at level boundaries, on the 2^-3 dyadic grid."""

    def test_constants_bounded(self, points_3d):
        """c_N stays below 1 at N = 9, 73 and 585."""
        ns = [9, 73, 585]
        assert len(points_3d) == 585
        ds = [dyadic_discrepancy(points_3d[:n], 3, 3).value for n in ns]
        fit = growth_fit(ns, ds, log_power=3.0)
        assert fit.max_constant <= 1.0
