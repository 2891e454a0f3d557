"""Tests for characteristic polynomials and polynomial zeros."""

import numpy as np
import pytest

from lowdisc_maps import roots as roots_module
from lowdisc_maps.errors import DomainError, NumericalError, ResourceGuardError
from lowdisc_maps.roots import (
    aberth_roots,
    charpoly,
    cluster_roots,
    polynomial_roots,
    winding_number,
)

PHI = (1 + 5**0.5) / 2


class TestCharpoly:
    """Tests for charpoly()."""

    def test_all_ones(self):
        """det(xI - ones(2)) is x^2 - 2x."""
        assert charpoly([[1, 1], [1, 1]]) == [0, -2, 1]

    def test_golden_mean(self):
        """det(xI - A) is x^2 - x - 1."""
        assert charpoly([[1, 1], [1, 0]]) == [-1, -1, 1]

    def test_three_shift(self):
        """ones(3) has eigenvalues 3, 0, 0."""
        assert charpoly(np.ones((3, 3), dtype=int)) == [0, 0, -3, 1]

    def test_not_square(self):
        """Non-square input is refused."""
        with pytest.raises(DomainError):
            charpoly([[1, 0, 1]])

    def test_non_integer(self):
        """Only integer matrices are supported."""
        with pytest.raises(DomainError):
            charpoly([[0.5]])

    def test_alphabet_guard(self):
        """Matrices above 64 x 64 hit the guard."""
        with pytest.raises(ResourceGuardError):
            charpoly(np.eye(65, dtype=int))


class TestAberth:
    """Tests for aberth_roots() and root clustering."""

    def test_golden_mean(self):
        """x^2 - x - 1 has roots phi and -1/phi."""
        roots = sorted(aberth_roots([-1, -1, 1]), key=lambda z: z.real)
        assert roots[0] == pytest.approx(-1 / PHI)
        assert roots[1] == pytest.approx(PHI)

    def test_complex_roots(self):
        """x^2 + 1 has roots +i and -i."""
        roots = sorted(aberth_roots([1, 0, 1]), key=lambda z: z.imag)
        assert roots[0] == pytest.approx(-1j)
        assert roots[1] == pytest.approx(1j)

    def test_constant(self):
        """A nonzero constant has no roots."""
        assert aberth_roots([3.0]).size == 0

    def test_zero_polynomial(self):
        """The zero polynomial is refused."""
        with pytest.raises(DomainError):
            aberth_roots([0, 0])

    def test_cluster(self):
        """Nearby roots merge with their multiplicity."""
        clusters = cluster_roots([1.0, 1.0 + 1e-9, 2.0])
        assert [m for _, m in clusters] == [2, 1]
        assert clusters[0][0] == pytest.approx(1.0)


class TestPolynomialRoots:
    """Tests for polynomial_roots()."""

    def test_uses_aberth(self):
        """Without a stall the Aberth roots are returned."""
        roots = sorted(polynomial_roots([-1, -1, 1]), key=lambda z: z.real)
        assert roots[0] == pytest.approx(-1 / PHI)
        assert roots[1] == pytest.approx(PHI)

    def test_falls_back_when_aberth_stalls(self, monkeypatch):
        """A non-converging iteration hands over to the companion matrix."""

        def stalled(coeffs, max_sweeps=0):
            raise NumericalError("stalled", residuals=[1.0])

        monkeypatch.setattr(roots_module, "aberth_roots", stalled)
        roots = sorted(polynomial_roots([1, 0, 1]), key=lambda z: z.imag)
        assert roots[0] == pytest.approx(-1j)
        assert roots[1] == pytest.approx(1j)

    def test_zero_polynomial(self):
        """The fallback still refuses the zero polynomial."""
        with pytest.raises(DomainError):
            polynomial_roots([0.0, 0.0])


class TestWindingNumber:
    """Tests for winding_number()."""

    def test_around_origin(self):
        """The unit circle winds once around 0."""
        z = np.exp(2j * np.pi * np.arange(256) / 256)
        assert winding_number(z) == 1
        assert winding_number(z**3) == 3

    def test_not_around_origin(self):
        """A circle shifted away from 0 does not wind."""
        z = np.exp(2j * np.pi * np.arange(256) / 256)
        assert winding_number(z - 2) == 0

    def test_too_few_samples(self):
        """At least three samples are needed."""
        with pytest.raises(DomainError):
            winding_number([1, 1j])
