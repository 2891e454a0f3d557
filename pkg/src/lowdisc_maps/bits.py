"""Binary digit strings and GF(2) linear algebra.

A point of [0,1) is identified with its binary expansion x1 x2 x3 ... and
stored as a fixed number P of leading digits. Digits lost to left shifts are
padded with 0 and counted as unknown, so callers can tell how many leading
digits are still reliable.

GF(2) matrices are dense uint8 arrays with optional row/column labels so that
minors can be addressed by name (x1, y-2, ...).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 64
FLOAT_DIGITS = 53


# =============================================================================
# BitString
# =============================================================================


@dataclass(frozen=True, slots=True)
class BitString:
    """Fixed-precision binary expansion of a point in [0, 1).

    Digit i (1-based) is the coefficient of 2^-i. ``digits`` packs all P digits
    into one integer, most significant digit first.

    Attributes:
        digits: Integer in [0, 2^P) whose binary form is the digit string
        precision: Number of stored digits P
        unknown: Trailing digits that are shift padding rather than data
    """

    digits: int
    precision: int = DEFAULT_PRECISION
    unknown: int = 0

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise DomainError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.digits < (1 << self.precision):
            raise DomainError(f"digits do not fit in {self.precision} binary places")
        if not 0 <= self.unknown <= self.precision:
            raise DomainError(f"unknown digit count {self.unknown} out of range")

    @classmethod
    def zero(cls, precision: int = DEFAULT_PRECISION) -> BitString:
        return cls(0, precision)

    @classmethod
    def from_digits(cls, digits: Iterable[int], precision: int | None = None) -> BitString:
        """Build from a digit sequence; missing trailing digits are 0."""
        seq = [int(d) for d in digits]
        if any(d not in (0, 1) for d in seq):
            raise DomainError(f"binary digits must be 0 or 1, got {seq}")
        width = len(seq) if precision is None else precision
        if len(seq) > width:
            raise DomainError(f"{len(seq)} digits exceed precision {width}")
        value = 0
        for d in seq:
            value = (value << 1) | d
        return cls(value << (width - len(seq)), width)

    @classmethod
    def from_text(cls, text: str, precision: int | None = None) -> BitString:
        """Parse a string such as ``"1010"``; underscores are ignored."""
        return cls.from_digits((int(ch) for ch in text if ch != "_"), precision)

    def digit(self, i: int) -> int:
        """Return digit i (1-based, i = 1 is the coefficient of 1/2)."""
        if not 1 <= i <= self.precision:
            raise DomainError(f"digit index {i} outside 1..{self.precision}")
        return (self.digits >> (self.precision - i)) & 1

    def prefix(self, n: int) -> int:
        """First n digits packed as an integer."""
        if not 0 <= n <= self.precision:
            raise DomainError(f"prefix length {n} outside 0..{self.precision}")
        return self.digits >> (self.precision - n)

    @property
    def reliable(self) -> int:
        """Number of leading digits that carry data."""
        return self.precision - self.unknown

    def to_unit(self) -> float:
        """Value as a float, truncated to the 53-bit mantissa so it stays below 1."""
        if self.precision > FLOAT_DIGITS:
            return math.ldexp(self.digits >> (self.precision - FLOAT_DIGITS), -FLOAT_DIGITS)
        return math.ldexp(self.digits, -self.precision)

    def to_fraction(self) -> Fraction:
        return Fraction(self.digits, 1 << self.precision)

    def __len__(self) -> int:
        return self.precision

    def __iter__(self):
        for i in range(1, self.precision + 1):
            yield self.digit(i)

    def __str__(self) -> str:
        return format(self.digits, f"0{self.precision}b")


def from_unit(value: float | Fraction, precision: int = DEFAULT_PRECISION) -> BitString:
    """Truncate a real in [0, 1) to its first ``precision`` binary digits.

    Truncation (never rounding) keeps dyadic rationals exact and preserves
    half-open interval membership.

    Raises:
        DomainError: If value lies outside [0, 1)
    """
    exact = Fraction(value)
    if not 0 <= exact < 1:
        raise DomainError(f"value {value!r} outside [0, 1)")
    return BitString(math.floor(exact * (1 << precision)), precision)


def to_unit(bits: BitString) -> float:
    return bits.to_unit()


def bit_xor(a: BitString, b: BitString) -> BitString:
    """Digitwise sum modulo 2."""
    if a.precision != b.precision:
        raise DomainError(f"precision mismatch: {a.precision} vs {b.precision}")
    return BitString(a.digits ^ b.digits, a.precision, max(a.unknown, b.unknown))


def bit_shift(a: BitString) -> BitString:
    """Left shift (drop the leading digit); the new last digit is unknown padding."""
    mask = (1 << a.precision) - 1
    return BitString((a.digits << 1) & mask, a.precision, min(a.precision, a.unknown + 1))


def bit_prepend(a: BitString, d: int) -> BitString:
    """Insert digit d in front; the last stored digit of a is discarded.

    The value becomes (d + value(a)) / 2 up to the discarded digit.
    """
    if d not in (0, 1):
        raise DomainError(f"binary digit must be 0 or 1, got {d}")
    return BitString(
        (a.digits >> 1) | (d << (a.precision - 1)),
        a.precision,
        max(0, a.unknown - 1),
    )


# =============================================================================
# GF(2) matrices
# =============================================================================


@dataclass(frozen=True)
class Gf2Matrix:
    """Dense binary matrix with optional row and column labels.

    The entry array is stored read-only; operations return new matrices.
    """

    entries: np.ndarray
    row_labels: tuple[str, ...] = field(default=())
    col_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError(f"GF(2) matrix needs positive 2-D shape, got {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise DomainError("GF(2) matrix entries must be 0 or 1")
        frozen = arr.astype(np.uint8)
        frozen.setflags(write=False)
        object.__setattr__(self, "entries", frozen)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if self.row_labels and len(self.row_labels) != frozen.shape[0]:
            raise DomainError("row label count does not match row count")
        if self.col_labels and len(self.col_labels) != frozen.shape[1]:
            raise DomainError("column label count does not match column count")

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[int]],
        row_labels: Sequence[str] = (),
        col_labels: Sequence[str] = (),
    ) -> Gf2Matrix:
        return cls(np.asarray(rows), tuple(row_labels), tuple(col_labels))

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> int:
        return int(self.entries[index])

    def to_lists(self) -> list[list[int]]:
        return self.entries.astype(int).tolist()

    def to_text(self) -> str:
        """Binary grid, one row per line, no separators."""
        return "\n".join("".join(str(v) for v in row) for row in self.to_lists())

    def with_flipped(self, row: int, col: int) -> Gf2Matrix:
        """Copy with one entry complemented."""
        arr = self.entries.copy()
        arr[row, col] ^= 1
        return Gf2Matrix(arr, self.row_labels, self.col_labels)


def _row_bitsets(m: Gf2Matrix) -> list[int]:
    return [sum(int(v) << c for c, v in enumerate(row)) for row in m.entries]


def gf2_rank(m: Gf2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on integer row bitsets."""
    work = _row_bitsets(m)
    rank = 0
    for col in range(m.cols):
        pivot = next((r for r in range(rank, len(work)) if (work[r] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def gf2_det(m: Gf2Matrix) -> int:
    """Determinant over GF(2): 1 iff the square matrix has full rank.

    Raises:
        DomainError: If the matrix is not square
    """
    if not m.is_square:
        raise DomainError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    return 1 if gf2_rank(m) == m.rows else 0


def gf2_rank_det(m: Gf2Matrix) -> tuple[int, int | None]:
    """Rank, and the determinant when the matrix is square (None otherwise)."""
    rank = gf2_rank(m)
    det = (1 if rank == m.rows else 0) if m.is_square else None
    return rank, det


def gf2_submatrix(m: Gf2Matrix, row_labels: Sequence[str], col_labels: Sequence[str]) -> Gf2Matrix:
    """Minor addressed by labels, in the order the labels are given.

    Raises:
        DomainError: If a label is unknown or the matrix carries no labels
    """
    row_index = {label: i for i, label in enumerate(m.row_labels)}
    col_index = {label: j for j, label in enumerate(m.col_labels)}
    missing = [lbl for lbl in row_labels if lbl not in row_index]
    missing += [lbl for lbl in col_labels if lbl not in col_index]
    if missing:
        raise DomainError(f"unknown labels: {', '.join(missing)}")
    rows = [row_index[lbl] for lbl in row_labels]
    cols = [col_index[lbl] for lbl in col_labels]
    return Gf2Matrix(m.entries[np.ix_(rows, cols)], tuple(row_labels), tuple(col_labels))


def gf2_matvec(m: Gf2Matrix, vector: ArrayLike) -> np.ndarray:
    """Matrix-vector product over GF(2)."""
    v = np.asarray(vector, dtype=np.int64)
    if v.shape != (m.cols,):
        raise DomainError(f"vector length {v.shape} does not match {m.cols} columns")
    return (m.entries.astype(np.int64) @ v) % 2
