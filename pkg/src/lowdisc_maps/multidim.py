"""Two- and three-dimensional digit-shuffling maps.

2D: F(x, y) = (theta x XOR s_(y1), theta y XOR s_(x1)), where theta drops the
leading binary digit, s_0 = 000... and s_1 has a 1 exactly at the positions
2^k - 1 (s_1 = 101000100000001...).

3D: for level n, F_n keeps the digits after position n and XORs them with
M v, where v = (x_n, y_n, z_n | ... | x_1, y_1, z_1) collects the first n
digit triples (most recent digit first) and M is a fixed 30 x 12 matrix over
GF(2). Output digit j of coordinate c is p_c[n + j] XOR (M v)[c_j].

Within a level, preimages are ordered by their chosen digit tuples with the
innermost choice (the digit next to the base point) most significant and x
before y before z.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .bits import (
    DEFAULT_PRECISION,
    BitString,
    Gf2Matrix,
    bit_prepend,
    bit_shift,
    bit_xor,
    from_unit,
    gf2_det,
    gf2_matvec,
    gf2_submatrix,
)
from .errors import DomainError, ResourceGuardError, UnsupportedMapError

logger = logging.getLogger(__name__)

DEFAULT_POINT_BUDGET = 1 << 20
COORDS = ("x", "y", "z")


# =============================================================================
# Points and the shift sequence s_1
# =============================================================================


@dataclass(frozen=True, slots=True)
class Point2D:
    x: BitString
    y: BitString

    def __post_init__(self) -> None:
        if self.x.precision != self.y.precision:
            raise DomainError("coordinates must share one precision")

    @classmethod
    def from_unit(cls, x: float, y: float, precision: int = DEFAULT_PRECISION) -> Point2D:
        return cls(from_unit(x, precision), from_unit(y, precision))

    @property
    def precision(self) -> int:
        return self.x.precision

    @property
    def reliable(self) -> int:
        return min(self.x.reliable, self.y.reliable)

    def to_unit(self) -> tuple[float, float]:
        return (self.x.to_unit(), self.y.to_unit())


@dataclass(frozen=True, slots=True)
class Point3D:
    x: BitString
    y: BitString
    z: BitString

    def __post_init__(self) -> None:
        if not self.x.precision == self.y.precision == self.z.precision:
            raise DomainError("coordinates must share one precision")

    @classmethod
    def from_unit(
        cls, x: float, y: float, z: float, precision: int = DEFAULT_PRECISION
    ) -> Point3D:
        return cls(from_unit(x, precision), from_unit(y, precision), from_unit(z, precision))

    @property
    def precision(self) -> int:
        return self.x.precision

    @property
    def coords(self) -> tuple[BitString, BitString, BitString]:
        return (self.x, self.y, self.z)

    @property
    def reliable(self) -> int:
        return min(c.reliable for c in self.coords)

    def to_unit(self) -> tuple[float, float, float]:
        return (self.x.to_unit(), self.y.to_unit(), self.z.to_unit())


def s1_digit(p: int) -> int:
    """Digit p (1-based) of s_1: 1 iff p + 1 is a power of two."""
    if p < 1:
        raise DomainError(f"digit index must be >= 1, got {p}")
    return 1 if (p + 1) & p == 0 else 0


def s1_bits(precision: int = DEFAULT_PRECISION, offset: int = 0) -> BitString:
    """theta^offset s_1 truncated to ``precision`` digits."""
    return BitString.from_digits(
        [s1_digit(offset + i) for i in range(1, precision + 1)], precision
    )


def _shift_word(bit: int, precision: int) -> BitString:
    return s1_bits(precision) if bit else BitString.zero(precision)


# =============================================================================
# 2D map
# =============================================================================


def map2d_forward(p: Point2D) -> Point2D:
    """(theta x XOR s_(y1), theta y XOR s_(x1)); the last digit becomes unknown."""
    if p.precision < 2:
        raise DomainError("2D map needs precision >= 2")
    x1, y1 = p.x.digit(1), p.y.digit(1)
    return Point2D(
        bit_xor(bit_shift(p.x), _shift_word(y1, p.precision)),
        bit_xor(bit_shift(p.y), _shift_word(x1, p.precision)),
    )


def map2d_inverse(p: Point2D, x1: int, y1: int) -> Point2D:
    """The preimage of p whose first digits are (x1, y1)."""
    return Point2D(
        bit_prepend(bit_xor(p.x, _shift_word(y1, p.precision)), x1),
        bit_prepend(bit_xor(p.y, _shift_word(x1, p.precision)), y1),
    )


def _product_inverse(p: Point2D, x1: int, y1: int) -> Point2D:
    return Point2D(bit_prepend(p.x, x1), bit_prepend(p.y, y1))


def _check_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise ResourceGuardError(f"{what} has too many points", requested=count, limit=budget)


def _level_2d(base: Point2D, n: int, budget: int, inverse) -> list[Point2D]:
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    _check_budget(4**n, budget, f"2D level {n}")
    points = [base]
    for _ in range(n):
        points = [inverse(p, c >> 1, c & 1) for p in points for c in range(4)]
    return points


def map2d_level(base: Point2D, n: int, budget: int = DEFAULT_POINT_BUDGET) -> list[Point2D]:
    """All 4^n preimages of ``base`` under F^n, in level order."""
    return _level_2d(base, n, budget, map2d_inverse)


def map2d_product_level(
    base: Point2D, n: int, budget: int = DEFAULT_POINT_BUDGET
) -> list[Point2D]:
    """Preimages under the unshuffled product map (2x, 2y) mod 1."""
    return _level_2d(base, n, budget, _product_inverse)


def _aligned(corner: float | Fraction, exponent: int, what: str) -> int:
    """Index of an aligned dyadic corner: corner = index * 2^-exponent."""
    scaled = Fraction(corner) * (1 << exponent)
    if scaled.denominator != 1 or not 0 <= scaled < (1 << exponent):
        raise DomainError(f"{what} corner {corner} is not an aligned multiple of 2^-{exponent}")
    return int(scaled)


def _representative(cell: int, resolution: int, precision: int) -> BitString:
    # Cell digits, then a 1, then zeros: the midpoint of the grid cell.
    return from_unit(Fraction(2 * cell + 1, 1 << (resolution + 1)), precision)


def _is_bijective(images: Sequence[tuple[int, ...]], resolution: int, dim: int) -> bool:
    expected = 1 << (resolution * dim)
    return len(images) == expected and len(set(images)) == expected


def rect_image_test_2d(
    n: int,
    m: int,
    alpha: float | Fraction,
    beta: float | Fraction,
    grid_k: int,
) -> bool:
    """Does F^n map I = [alpha, alpha + 2^(m-n)) x [beta, beta + 2^(-n-m)) onto [0,1)^2?

    Checked at grid resolution: midpoints of the 2^-grid_k cells inside I
    are mapped by F^n and must hit every cell of the 2^-(grid_k - n) grid once.

    Raises:
        DomainError: If m > n, the corners are not aligned, or grid_k < n + m
    """
    if n < 0 or m < 0 or m > n:
        raise DomainError(f"rectangle needs 0 <= m <= n, got n={n}, m={m}")
    if grid_k < n + max(m, 1):
        raise DomainError(f"grid_k={grid_k} too coarse for n={n}, m={m}")
    ex, ey = n - m, n + m
    ix = _aligned(alpha, ex, "x")
    iy = _aligned(beta, ey, "y")
    resolution = grid_k - n
    precision = max(DEFAULT_PRECISION, grid_k + n + 2)
    sub_x, sub_y = grid_k - ex, grid_k - ey
    images: list[tuple[int, ...]] = []
    for cx in range(1 << sub_x):
        x = _representative((ix << sub_x) | cx, grid_k, precision)
        for cy in range(1 << sub_y):
            y = _representative((iy << sub_y) | cy, grid_k, precision)
            p = Point2D(x, y)
            for _ in range(n):
                p = map2d_forward(p)
            images.append((p.x.prefix(resolution), p.y.prefix(resolution)))
    ok = _is_bijective(images, resolution, 2)
    logger.debug("rect 2d n=%d m=%d at (%s, %s): %s", n, m, alpha, beta, ok)
    return ok


def span_test_2d(n: int) -> bool:
    """Do the length-n prefixes of theta^i s_1 (i < n) span GF(2)^n?"""
    if n < 1:
        raise DomainError(f"span test needs n >= 1, got {n}")
    rows = [[s1_digit(i + j) for j in range(1, n + 1)] for i in range(n)]
    return gf2_det(Gf2Matrix.from_rows(rows)) == 1


# =============================================================================
# 3D map family
# =============================================================================

MIX_ROWS: tuple[str, ...] = (
    "011010010001",
    "101001001100",
    "110100100010",
    "010001010010",
    "001100001001",
    "100010100100",
    "010010001010",
    "001001100001",
    "100100010100",
    "000001010001",
    "000100001100",
    "000010100010",
    "000010010011",
    "000001001101",
    "000100100110",
    "000000010001",
    "000000001100",
    "000000100010",
    "000000010010",
    "000000001001",
    "000000100100",
    "000000000010",
    "000000000001",
    "000000000100",
    "000000000001",
    "000000000100",
    "000000000010",
    "000000000000",
    "000000000000",
    "000000000000",
)
MIX_CHECKSUM = "7ecf3dbd541d2da075bd38689668b60536e785c212f01aeae3558657c48aa8c0"
MIX_DIGITS = 10
MIX_LEVELS = 4

ROW_LABELS = tuple(f"{c}{j}" for j in range(1, MIX_DIGITS + 1) for c in COORDS)
COL_LABELS = tuple(f"{c}-{j}" for j in range(1, MIX_LEVELS + 1) for c in COORDS)


def mix_checksum(m: Gf2Matrix) -> str:
    """SHA-256 of the binary grid, one row per line."""
    return hashlib.sha256(m.to_text().encode("ascii")).hexdigest()


def mix_matrix() -> Gf2Matrix:
    """The stored 30 x 12 mixing matrix with row labels x1..z10, columns x-1..z-4."""
    rows = [[int(ch) for ch in row] for row in MIX_ROWS]
    return Gf2Matrix.from_rows(rows, ROW_LABELS, COL_LABELS)


class ThreeDMode(str, Enum):
    """How level n of the 3D sequence is produced.

    ``level`` uses F_n itself as the n-step map; ``iterate`` applies F_1 n times.
    """

    LEVEL = "level"
    ITERATE = "iterate"


def _digit_vector(triples: Sequence[tuple[int, int, int]]) -> np.ndarray:
    """v from the digit triples of positions 1..n (given in position order)."""
    v = np.zeros(3 * MIX_LEVELS, dtype=np.int64)
    for j, triple in enumerate(reversed(triples)):
        v[3 * j : 3 * j + 3] = triple
    return v


def _mix_words(m: Gf2Matrix, v: np.ndarray, precision: int) -> tuple[BitString, ...]:
    mv = gf2_matvec(m, v)
    words = []
    for c in range(3):
        digits = [int(mv[3 * j + c]) for j in range(min(MIX_DIGITS, precision))]
        words.append(BitString.from_digits(digits, precision))
    return tuple(words)


def _check_level(n: int) -> None:
    if n > MIX_LEVELS:
        raise UnsupportedMapError(
            f"level {n} needs columns beyond the stored {MIX_LEVELS} digit triples"
        )
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")


def map3d_forward(n: int, p: Point3D, m: Gf2Matrix | None = None) -> Point3D:
    """F_n(p): drop n digits per coordinate and XOR with M v.

    Raises:
        UnsupportedMapError: If n > 4
    """
    _check_level(n)
    if n < 1:
        raise DomainError("F_n is defined for n >= 1")
    mm = mix_matrix() if m is None else m
    triples = [tuple(c.digit(i) for c in p.coords) for i in range(1, n + 1)]
    mixed = _mix_words(mm, _digit_vector(triples), p.precision)
    out = []
    for coord, word in zip(p.coords, mixed, strict=True):
        shifted = coord
        for _ in range(n):
            shifted = bit_shift(shifted)
        out.append(bit_xor(shifted, word))
    return Point3D(*out)


def _all_triples(n: int) -> list[tuple[tuple[int, int, int], ...]]:
    """Digit choices for positions 1..n, ordered with position n most significant."""
    choices = list(itertools.product((0, 1), repeat=3))
    ordered = itertools.product(choices, repeat=n)
    # product varies the last slot fastest; slot 0 is position n.
    return [tuple(reversed(combo)) for combo in ordered]


def _level_3d_direct(base: Point3D, n: int, m: Gf2Matrix) -> list[Point3D]:
    points = []
    for triples in _all_triples(n):
        mixed = _mix_words(m, _digit_vector(triples), base.precision)
        coords = []
        for c in range(3):
            tail = bit_xor(base.coords[c], mixed[c])
            for i in range(n, 0, -1):
                tail = bit_prepend(tail, triples[i - 1][c])
            coords.append(tail)
        points.append(Point3D(*coords))
    return points


def _level_3d_iterate(base: Point3D, n: int, m: Gf2Matrix) -> list[Point3D]:
    points = [base]
    for _ in range(n):
        points = [q for p in points for q in _level_3d_direct(p, 1, m)]
    return points


def map3d_level(
    base: Point3D,
    n: int,
    mode: ThreeDMode | str = ThreeDMode.LEVEL,
    budget: int = DEFAULT_POINT_BUDGET,
    m: Gf2Matrix | None = None,
) -> list[Point3D]:
    """All 8^n preimages of ``base`` under F_n (or F_1^n in iterate mode).

    Raises:
        UnsupportedMapError: If n > 4 in level mode
        ResourceGuardError: If 8^n exceeds the point budget
    """
    mode = ThreeDMode(mode)
    if mode is ThreeDMode.LEVEL:
        _check_level(n)
    elif n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    _check_budget(8**n, budget, f"3D level {n}")
    mm = mix_matrix() if m is None else m
    if n == 0:
        return [base]
    if mode is ThreeDMode.ITERATE:
        return _level_3d_iterate(base, n, mm)
    return _level_3d_direct(base, n, mm)


def _shape_exponents(k: int, n: int, m: int, shape: int) -> tuple[int, int, int]:
    if shape == 1:
        return (k + n + m, k - n, k - m)
    if shape == 2:
        return (k + n, k + m, k - n - m)
    raise DomainError(f"shape must be 1 or 2, got {shape}")


def rect_image_test_3d(
    k: int,
    n: int,
    m: int,
    corners: Sequence[float | Fraction],
    grid_res: int,
    shape: int = 1,
    mix: Gf2Matrix | None = None,
) -> bool:
    """Does F_k map the box I onto [0,1)^3 at grid resolution?

    Shape 1 has sides (2^(-k-n-m), 2^(-k+n), 2^(-k+m)), shape 2 has sides
    (2^(-k-n), 2^(-k-m), 2^(-k+n+m)).

    Raises:
        DomainError: If k < n + m, the corners are not aligned, or the grid is too coarse
        UnsupportedMapError: If k > 4
    """
    if n < 0 or m < 0 or k < n + m or k < 1:
        raise DomainError(f"box needs k >= n + m and k >= 1, got k={k}, n={n}, m={m}")
    _check_level(k)
    exps = _shape_exponents(k, n, m, shape)
    if grid_res < max(exps) or grid_res <= k:
        raise DomainError(f"grid_res={grid_res} too coarse for box exponents {exps}")
    if len(corners) != 3:
        raise DomainError("a 3D box needs three corner coordinates")
    index = [_aligned(c, e, coord) for c, e, coord in zip(corners, exps, COORDS, strict=True)]
    mm = mix_matrix() if mix is None else mix
    resolution = grid_res - k
    precision = max(DEFAULT_PRECISION, grid_res + k + 2)
    subs = [grid_res - e for e in exps]
    axes = [
        [
            _representative((index[c] << subs[c]) | i, grid_res, precision)
            for i in range(1 << subs[c])
        ]
        for c in range(3)
    ]
    images: list[tuple[int, ...]] = []
    for x, y, z in itertools.product(*axes):
        q = map3d_forward(k, Point3D(x, y, z), mm)
        images.append(tuple(c.prefix(resolution) for c in q.coords))
    return _is_bijective(images, resolution, 3)


def _role_labels(perm: Sequence[str]) -> tuple[str, str, str]:
    if sorted(perm) != sorted(COORDS):
        raise DomainError(f"role permutation must rearrange x, y, z, got {perm}")
    return perm[0], perm[1], perm[2]


def minor_labels(n: int, m: int, perm: Sequence[str], family: int) -> tuple[list[str], list[str]]:
    """Row and column labels of a structural minor.

    Family 1: {X1..X(n+m)} x {Y-1..Y-n, Z-1..Z-m}.
    Family 2: {X1..Xn, Y1..Ym} x {Z-1..Z-(n+m)}.
    """
    if n < 0 or m < 0 or not 1 <= n + m <= MIX_LEVELS:
        raise DomainError(f"minor needs 1 <= n + m <= {MIX_LEVELS}, got n={n}, m={m}")
    x, y, z = _role_labels(perm)
    if family == 1:
        rows = [f"{x}{j}" for j in range(1, n + m + 1)]
        cols = [f"{y}-{j}" for j in range(1, n + 1)] + [f"{z}-{j}" for j in range(1, m + 1)]
    elif family == 2:
        rows = [f"{x}{j}" for j in range(1, n + 1)] + [f"{y}{j}" for j in range(1, m + 1)]
        cols = [f"{z}-{j}" for j in range(1, n + m + 1)]
    else:
        raise DomainError(f"family must be 1 or 2, got {family}")
    return rows, cols


def minor_test_3d(
    n: int,
    m: int,
    perm: Sequence[str] = COORDS,
    family: int = 1,
    mix: Gf2Matrix | None = None,
) -> bool:
    """Is the selected minor of M nonsingular over GF(2)?"""
    rows, cols = minor_labels(n, m, perm, family)
    mm = mix_matrix() if mix is None else mix
    return gf2_det(gf2_submatrix(mm, rows, cols)) == 1


@dataclass(frozen=True, slots=True)
class MinorResult:
    n: int
    m: int
    perm: tuple[str, ...]
    family: int
    ok: bool


def minor_battery(mix: Gf2Matrix | None = None) -> list[MinorResult]:
    """Both minor families for every 1 <= n + m <= 4 and every role permutation."""
    mm = mix_matrix() if mix is None else mix
    results = []
    for total in range(1, MIX_LEVELS + 1):
        for n in range(total + 1):
            for perm in itertools.permutations(COORDS):
                for family in (1, 2):
                    ok = minor_test_3d(n, total - n, perm, family, mm)
                    results.append(MinorResult(n, total - n, perm, family, ok))
    return results
