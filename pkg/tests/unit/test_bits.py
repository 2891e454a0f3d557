"""Tests for binary digit strings and GF(2) linear algebra."""

from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from lowdisc_maps.bits import (
    BitString,
    Gf2Matrix,
    bit_prepend,
    bit_shift,
    bit_xor,
    from_unit,
    gf2_det,
    gf2_matvec,
    gf2_rank,
    gf2_rank_det,
    gf2_submatrix,
)
from lowdisc_maps.errors import DomainError


class TestBitString:
    """Tests for BitString construction and conversion."""

    def test_from_text_and_str(self):
        """Digits survive a text round trip."""
        assert str(BitString.from_text("1010")) == "1010"

    def test_digit_is_one_based(self):
        """Digit 1 is the coefficient of 1/2."""
        b = BitString.from_text("0110")
        assert [b.digit(i) for i in range(1, 5)] == [0, 1, 1, 0]

    def test_to_unit_place_value(self):
        """101 is 0.625."""
        assert BitString.from_text("101").to_unit() == 0.625

    def test_to_unit_stays_below_one(self):
        """64 ones truncate to the largest double below 1."""
        assert BitString((1 << 64) - 1, 64).to_unit() < 1.0

    def test_from_unit_half(self):
        """from_unit(0.5, 4) is 1000."""
        assert str(from_unit(0.5, 4)) == "1000"

    def test_from_unit_truncates(self):
        """1/3 truncates to 0101."""
        b = from_unit(Fraction(1, 3), 4)
        assert str(b) == "0101"
        assert b.to_unit() == 0.3125

    def test_from_unit_rejects_one(self):
        """Values outside [0, 1) are refused."""
        with pytest.raises(DomainError, match="outside"):
            from_unit(1.0, 8)

    def test_invalid_digits(self):
        """Only 0 and 1 are binary digits."""
        with pytest.raises(DomainError):
            BitString.from_digits([0, 2, 1])

    def test_prefix(self):
        """The first n digits pack into an integer."""
        assert BitString.from_text("1101").prefix(3) == 0b110


class TestBitOps:
    """Tests for xor, shift and prepend."""

    def test_xor_example(self):
        """1010 xor 0110 is 1100."""
        a, b = BitString.from_text("1010"), BitString.from_text("0110")
        assert str(bit_xor(a, b)) == "1100"

    def test_xor_group_laws(self):
        """Zero is the identity and every string is its own inverse."""
        rng = np.random.default_rng(7)
        zero = BitString.zero(32)
        for _ in range(20):
            x = BitString(int(rng.integers(0, 1 << 32)), 32)
            y = BitString(int(rng.integers(0, 1 << 32)), 32)
            assert bit_xor(x, zero) == x
            assert bit_xor(x, x).digits == 0
            assert bit_xor(x, y) == bit_xor(y, x)

    def test_xor_precision_mismatch(self):
        """Strings of different precision cannot be combined."""
        with pytest.raises(DomainError, match="precision"):
            bit_xor(BitString.zero(4), BitString.zero(8))

    def test_shift_drops_leading_digit(self):
        """1100 shifts to 1000 with one unknown digit."""
        shifted = bit_shift(BitString.from_text("1100"))
        assert str(shifted) == "1000"
        assert shifted.reliable == 3

    def test_shift_exhaustion(self):
        """P shifts leave nothing reliable."""
        b = BitString.from_text("1011")
        for _ in range(4):
            b = bit_shift(b)
        assert b.digits == 0
        assert b.reliable == 0

    def test_prepend_example(self):
        """prepend(1000, 1) is 1100, i.e. 0.5 becomes 0.75."""
        b = bit_prepend(BitString.from_text("1000"), 1)
        assert str(b) == "1100"
        assert b.to_unit() == 0.75

    def test_prepend_composition(self):
        """Prepending 0 then 1 maps v to (1 + v/2)/2."""
        x = from_unit(0.375, 16)
        assert bit_prepend(bit_prepend(x, 0), 1).to_unit() == (1 + 0.375 / 2) / 2

    def test_prepend_undoes_shift_on_known_digits(self):
        """Prepending the dropped digit restores the string."""
        x = BitString.from_text("1011")
        assert bit_prepend(bit_shift(x), 1).digits == x.digits


class TestGf2:
    """Tests for GF(2) rank, determinant and minors."""

    def test_triangular(self):
        """[[1,0],[1,1]] has rank 2 and determinant 1."""
        assert gf2_rank_det(Gf2Matrix.from_rows([[1, 0], [1, 1]])) == (2, 1)

    def test_equal_rows(self):
        """[[1,1],[1,1]] has rank 1 and determinant 0."""
        assert gf2_rank_det(Gf2Matrix.from_rows([[1, 1], [1, 1]])) == (1, 0)

    def test_identity(self):
        """The identity has full rank."""
        assert gf2_rank_det(Gf2Matrix.identity(6)) == (6, 1)

    def test_rectangular_has_no_det(self):
        """Non-square matrices report a rank only."""
        rank, det = gf2_rank_det(Gf2Matrix.from_rows([[1, 0, 1], [0, 1, 1]]))
        assert rank == 2
        assert det is None
        with pytest.raises(DomainError, match="square"):
            gf2_det(Gf2Matrix.from_rows([[1, 0, 1]]))

    def test_rank_is_mod_two(self):
        """Rows summing to zero mod 2 are dependent."""
        m = Gf2Matrix.from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert gf2_rank(m) == 2

    def test_entries_must_be_binary(self):
        """Entries other than 0 and 1 are refused."""
        with pytest.raises(DomainError):
            Gf2Matrix.from_rows([[1, 2]])

    def test_submatrix_by_labels(self):
        """Minors are selected by label in the given order."""
        m = Gf2Matrix.from_rows([[1, 0], [1, 1]], ("a", "b"), ("p", "q"))
        sub = gf2_submatrix(m, ["b"], ["q", "p"])
        assert sub.to_lists() == [[1, 1]]
        assert gf2_submatrix(m, ["a", "b"], ["p", "q"]).to_lists() == m.to_lists()

    def test_submatrix_unknown_label(self):
        """Unknown labels are named in the error."""
        m = Gf2Matrix.from_rows([[1]], ("a",), ("p",))
        with pytest.raises(DomainError, match="zz"):
            gf2_submatrix(m, ["zz"], ["p"])

    def test_matvec(self):
        """Products are reduced mod 2."""
        m = Gf2Matrix.from_rows([[1, 1], [0, 1]])
        assert gf2_matvec(m, [1, 1]).tolist() == [0, 1]

    def test_with_flipped(self):
        """Flipping an entry leaves the original untouched."""
        m = Gf2Matrix.identity(2)
        flipped = m.with_flipped(0, 1)
        assert flipped.to_lists() == [[1, 1], [0, 1]]
        assert m.to_lists() == [[1, 0], [0, 1]]

    def test_det_matches_permutation_expansion(self):
        """Every 4x4 binary matrix: rank-based det equals the Leibniz sum mod 2."""
        perms = list(permutations(range(4)))
        for code in range(1 << 16):
            rows = [[(code >> (4 * r + c)) & 1 for c in range(4)] for r in range(4)]
            leibniz = sum(all(rows[r][p[r]] for r in range(4)) for p in perms) % 2
            assert gf2_det(Gf2Matrix.from_rows(rows)) == leibniz, rows
