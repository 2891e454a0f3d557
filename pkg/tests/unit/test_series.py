"""Tests for truncated power series."""

import numpy as np
import pytest

from lowdisc_maps.errors import DomainError
from lowdisc_maps.series import PowerSeries, det_series, identity_minus


class TestPowerSeries:
    """Tests for PowerSeries arithmetic."""

    def test_geometric_reciprocal(self):
        """1 / (1 - z) is 1 + z + z^2 + ..."""
        one_minus_z = PowerSeries.from_list([1.0, -1.0], 5)
        assert one_minus_z.reciprocal().tolist() == [1.0] * 6

    def test_product_truncates(self):
        """Products keep the smaller degree."""
        z = PowerSeries.variable(3)
        assert (z * z * z * z).tolist() == [0.0, 0.0, 0.0, 0.0]

    def test_scalar_arithmetic(self):
        """Scalars act on the constant term or scale all terms."""
        z = PowerSeries.variable(2)
        assert (1.0 - z).tolist() == [1.0, -1.0, 0.0]
        assert (z * 3).tolist() == [0.0, 3.0, 0.0]
        assert (z / 2).tolist() == [0.0, 0.5, 0.0]

    def test_exp_of_log(self):
        """log then exp returns the series."""
        f = PowerSeries.from_list([1.0, 0.5, -0.25, 0.125], 6)
        assert np.allclose(f.log().exp().coeffs, f.coeffs)

    def test_log_of_geometric(self):
        """log 1/(1-z) = sum z^n / n."""
        f = PowerSeries.from_list([1.0, -1.0], 4).reciprocal()
        assert np.allclose(f.log().coeffs, [0.0, 1.0, 1 / 2, 1 / 3, 1 / 4])

    def test_log_needs_unit_constant(self):
        """log is defined for constant term 1."""
        with pytest.raises(DomainError):
            PowerSeries.constant(2.0, 3).log()

    def test_reciprocal_needs_constant(self):
        """1/z is not a power series."""
        with pytest.raises(DomainError):
            PowerSeries.variable(3).reciprocal()

    def test_evaluate(self):
        """Evaluation works on scalars and arrays."""
        f = PowerSeries.from_list([1.0, 2.0, 3.0])
        assert f(2.0) == 17.0
        assert np.allclose(f(np.array([0.0, 1.0])), [1.0, 6.0])

    def test_derivative(self):
        """d/dz of 1 + 2z + 3z^2 is 2 + 6z."""
        f = PowerSeries.from_list([1.0, 2.0, 3.0])
        assert f.derivative().tolist() == [2.0, 6.0, 0.0]

    def test_getitem_past_degree(self):
        """Coefficients beyond the truncation read as 0."""
        assert PowerSeries.constant(1.0, 2)[5] == 0.0


class TestDetSeries:
    """Tests for det_series()."""

    def test_doubling(self):
        """det(I - (z/2) ones) is 1 - z."""
        half_z = PowerSeries.monomial(1, 0.5, 6)
        det = det_series(identity_minus([[half_z, half_z], [half_z, half_z]]), 6)
        assert np.allclose(det.coeffs, [1.0, -1.0, 0, 0, 0, 0, 0])

    def test_zero_matrix(self):
        """det(I) is 1."""
        zero = PowerSeries.zero(3)
        det = det_series(identity_minus([[zero, zero], [zero, zero]]), 3)
        assert det.tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_cofactor_fallback(self):
        """Singular constant terms fall back to cofactors."""
        z = PowerSeries.variable(4)
        det = det_series([[z, z], [z, z * 2]], 4)
        assert np.allclose(det.coeffs, [0.0, 0.0, 1.0, 0.0, 0.0])

    def test_not_square(self):
        """Ragged input is refused."""
        z = PowerSeries.variable(1)
        with pytest.raises(DomainError):
            det_series([[z, z]], 1)
