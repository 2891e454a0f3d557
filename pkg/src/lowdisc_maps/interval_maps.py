"""Piecewise-linear expanding maps of [0, 1] and their symbolic dynamics.

A map is a list of branches. Branch a maps its cell <a> = [left, right)
affinely, with slope sign * beta, onto [image_left, image_right). Cells are
half-open; the right endpoint 1 belongs to the last cell.

Words over the branch alphabet carry a sign (product of branch signs) and a
cylinder <w>, the set of points whose itinerary starts with w. Words of equal
length are ordered suffix-first with a sign twist:

    compare the last differing symbol; keep the symbol order if the common
    suffix after it has sign +1, reverse it otherwise.

Shorter words always precede longer ones.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from .errors import MapValidationError, NumericalError, ResourceGuardError

logger = logging.getLogger(__name__)

TOL = 1e-9
DEFAULT_ORBIT_DEPTH = 50
DEFAULT_WORD_BUDGET = 1 << 22


# =============================================================================
# Branches and maps
# =============================================================================


@dataclass(frozen=True, slots=True)
class Branch:
    """One affine branch: [left, right) -> [image_left, image_right)."""

    left: float
    right: float
    sign: int
    beta: float
    image_left: float
    image_right: float

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def increasing(self) -> bool:
        return self.sign > 0

    def apply(self, y: float) -> float:
        if self.increasing:
            return self.image_left + self.beta * (y - self.left)
        return self.image_right - self.beta * (y - self.left)

    def pull_back(self, x: float) -> float:
        """Affine inverse, without any membership check."""
        if self.increasing:
            return self.left + (x - self.image_left) / self.beta
        return self.left + (self.image_right - x) / self.beta

    def to_dict(self) -> dict[str, float | int]:
        return {
            "left": self.left,
            "right": self.right,
            "sign": self.sign,
            "beta": self.beta,
            "image_left": self.image_left,
            "image_right": self.image_right,
        }


@dataclass(frozen=True)
class PLMap:
    """Validated constant-slope piecewise-linear expanding map.

    Build instances with :func:`validate_map`; the constructor assumes the
    branch list already satisfies every invariant.
    """

    branches: tuple[Branch, ...]
    name: str = "map"

    @property
    def size(self) -> int:
        return len(self.branches)

    @property
    def alphabet(self) -> range:
        return range(len(self.branches))

    @property
    def beta(self) -> float:
        return self.branches[0].beta

    @property
    def xi(self) -> float:
        """Expansion constant log(beta)."""
        return math.log(self.beta)

    @property
    def endpoints(self) -> tuple[float, ...]:
        """Partition points 0 = e_0 < e_1 < ... < e_n = 1."""
        return tuple(b.left for b in self.branches) + (self.branches[-1].right,)

    def snap(self, x: float) -> float:
        """Replace x by a partition point when it lies within TOL of one."""
        for e in self.endpoints:
            if abs(x - e) <= TOL:
                return e
        return x

    def cell_of(self, x: float) -> int | None:
        """Index of the half-open cell containing x; the last cell includes 1."""
        x = self.snap(x)
        if x < 0.0 or x > 1.0:
            return None
        for a, branch in enumerate(self.branches):
            if branch.left <= x < branch.right:
                return a
        return self.size - 1

    def apply(self, x: float) -> float:
        a = self.cell_of(x)
        if a is None:
            raise NumericalError(f"point {x!r} left [0, 1]", residuals=[x])
        return self.snap(self.branches[a].apply(self.snap(x)))

    def sign(self, a: int) -> int:
        return self.branches[a].sign

    def to_dicts(self) -> list[dict[str, float | int]]:
        return [b.to_dict() for b in self.branches]


def _coerce_branch(raw: Branch | Mapping[str, Any]) -> Branch:
    if isinstance(raw, Branch):
        return raw
    try:
        return Branch(
            left=float(raw["left"]),
            right=float(raw["right"]),
            sign=int(raw["sign"]),
            beta=float(raw["beta"]),
            image_left=float(raw["image_left"]),
            image_right=float(raw["image_right"]),
        )
    except KeyError as e:
        raise MapValidationError(f"branch is missing field {e.args[0]!r}") from e
    except (TypeError, ValueError) as e:
        raise MapValidationError(f"branch has a non-numeric field: {e}") from e


def validate_map(raw: Iterable[Branch | Mapping[str, Any]], name: str = "map") -> PLMap:
    """Check a branch list and build a :class:`PLMap`.

    Args:
        raw: Branches, either :class:`Branch` objects or mappings with the keys
            left, right, sign, beta, image_left, image_right
        name: Label carried into reports

    Returns:
        The validated map

    Raises:
        MapValidationError: On an empty list, a gap or overlap in the partition,
            mixed or non-expanding slopes, images escaping [0, 1], or an image
            width that is not beta times the cell width
    """
    branches = sorted((_coerce_branch(b) for b in raw), key=lambda b: b.left)
    if not branches:
        raise MapValidationError("map has no branches")

    beta = branches[0].beta
    for a, b in enumerate(branches):
        if b.sign not in (1, -1):
            raise MapValidationError(f"branch {a}: sign must be +1 or -1, got {b.sign}")
        if not b.beta > 1.0:
            raise MapValidationError(f"branch {a}: slope magnitude {b.beta} is not expanding")
        if abs(b.beta - beta) > TOL * beta:
            raise MapValidationError(
                f"branch {a}: slope magnitude {b.beta} differs from {beta} "
                "(constant slope required)"
            )
        if not b.right - b.left > TOL:
            raise MapValidationError(f"branch {a}: empty cell [{b.left}, {b.right})")
        if b.image_left < -TOL or b.image_right > 1.0 + TOL or b.image_left >= b.image_right:
            raise MapValidationError(
                f"branch {a}: image [{b.image_left}, {b.image_right}) escapes [0, 1]"
            )
        if abs((b.image_right - b.image_left) - b.beta * b.width) > TOL * max(1.0, b.beta):
            raise MapValidationError(
                f"branch {a}: image width {b.image_right - b.image_left} != beta * cell width "
                f"{b.beta * b.width}"
            )

    if abs(branches[0].left) > TOL:
        raise MapValidationError(f"partition starts at {branches[0].left}, not 0")
    if abs(branches[-1].right - 1.0) > TOL:
        raise MapValidationError(f"partition ends at {branches[-1].right}, not 1")
    for a in range(1, len(branches)):
        gap = branches[a].left - branches[a - 1].right
        if abs(gap) > TOL:
            kind = "gap" if gap > 0 else "overlap"
            raise MapValidationError(
                f"{kind} between cells {a - 1} and {a} at {branches[a - 1].right}"
            )

    # Share endpoints exactly so half-open membership is unambiguous.
    fixed: list[Branch] = []
    for a, b in enumerate(branches):
        left = 0.0 if a == 0 else fixed[-1].right
        right = 1.0 if a == len(branches) - 1 else b.right
        fixed.append(
            Branch(
                left,
                right,
                b.sign,
                beta,
                max(0.0, b.image_left),
                min(1.0, b.image_right),
            )
        )
    logger.debug("validated map %s: %d branches, beta=%.12g", name, len(fixed), beta)
    return PLMap(tuple(fixed), name)


# =============================================================================
# One-sided points
# =============================================================================


class Side(str, Enum):
    """Direction of a one-sided limit.

    ``PLUS`` is the limit from below (x+ = lim y -> x, y < x), ``MINUS`` the
    limit from above.
    """

    PLUS = "+"
    MINUS = "-"

    def flipped(self) -> Side:
        return Side.MINUS if self is Side.PLUS else Side.PLUS


@dataclass(frozen=True, slots=True)
class SidedPoint:
    value: float
    side: Side

    def __str__(self) -> str:
        return f"{self.value:.12g}{self.side.value}"


def sided_compare(p: SidedPoint, q: SidedPoint) -> int:
    """Order one-sided points by value, then (v, +) before (v, -).

    Returns -1, 0 or 1.
    """
    if abs(p.value - q.value) > TOL:
        return -1 if p.value < q.value else 1
    if p.side == q.side:
        return 0
    return -1 if p.side is Side.PLUS else 1


def sided_cell(fmap: PLMap, p: SidedPoint) -> int | None:
    """Cell containing points just beside p on its side."""
    v = fmap.snap(p.value)
    for a, b in enumerate(fmap.branches):
        if p.side is Side.MINUS and b.left <= v < b.right:
            return a
        if p.side is Side.PLUS and b.left < v <= b.right:
            return a
    return None


def sided_image(fmap: PLMap, p: SidedPoint) -> SidedPoint:
    """Image of a one-sided point; the side flips on decreasing branches.

    Raises:
        NumericalError: If p has no neighbouring cell (e.g. the left limit at 0)
            or its image leaves [0, 1]
    """
    a = sided_cell(fmap, p)
    if a is None:
        raise NumericalError(f"one-sided point {p} has no cell", residuals=[p.value])
    branch = fmap.branches[a]
    value = fmap.snap(branch.apply(fmap.snap(p.value)))
    if value < -TOL or value > 1.0 + TOL:
        raise NumericalError(f"image of {p} left [0, 1]: {value!r}", residuals=[value])
    side = p.side if branch.increasing else p.side.flipped()
    return SidedPoint(min(1.0, max(0.0, value)), side)


def signed_endpoints(fmap: PLMap) -> tuple[SidedPoint, ...]:
    """The 2|A| one-sided cell endpoints: (left_a, -) and (right_a, +) per cell."""
    points: list[SidedPoint] = []
    for b in fmap.branches:
        points.append(SidedPoint(b.left, Side.MINUS))
        points.append(SidedPoint(b.right, Side.PLUS))
    return tuple(points)


def is_partition_point(fmap: PLMap, x: float) -> bool:
    return any(abs(x - e) <= TOL for e in fmap.endpoints)


@dataclass(frozen=True, slots=True)
class EndpointOrbit:
    """Classification of one signed endpoint by its forward orbit.

    Attributes:
        point: The signed endpoint
        markov: True if some forward image is a partition point
        landing: First iterate (>= 1) that lands on a partition point
        orbit: Iterates theta^1 .. theta^landing (or up to the depth limit)
    """

    point: SidedPoint
    markov: bool
    landing: int | None
    orbit: tuple[SidedPoint, ...]


def endpoint_orbits(fmap: PLMap, depth: int = DEFAULT_ORBIT_DEPTH) -> tuple[EndpointOrbit, ...]:
    """Follow every signed endpoint until it lands on a partition point."""
    results: list[EndpointOrbit] = []
    for p in signed_endpoints(fmap):
        orbit: list[SidedPoint] = []
        current = p
        landing: int | None = None
        for k in range(1, depth + 1):
            current = sided_image(fmap, current)
            orbit.append(current)
            if is_partition_point(fmap, current.value):
                landing = k
                break
        if landing is None:
            logger.warning(
                "endpoint %s: orbit depth %d exhausted without landing on a partition point",
                p,
                depth,
            )
        results.append(EndpointOrbit(p, landing is not None, landing, tuple(orbit)))
    return tuple(results)


# =============================================================================
# Markov structure
# =============================================================================


@dataclass(frozen=True)
class TransitionMatrix:
    """0/1 matrix with A[a, b] = 1 iff F(<a>) covers the interior of <b>."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def allows(self, a: int, b: int) -> bool:
        return bool(self.matrix[a, b])

    def is_irreducible(self) -> bool:
        n = self.size
        reach = (np.eye(n, dtype=np.int64) + self.matrix) > 0
        closure = reach.astype(np.int64)
        for _ in range(max(1, n - 1)):
            closure = ((closure @ reach.astype(np.int64)) > 0).astype(np.int64)
        return bool(closure.all())

    def to_lists(self) -> list[list[int]]:
        return self.matrix.tolist()


@dataclass(frozen=True)
class MarkovStructure:
    """Result of the Markov test.

    Attributes:
        transition: Transition matrix, or None when the map is not Markov
        orbits: Classification of every signed endpoint
    """

    transition: TransitionMatrix | None
    orbits: tuple[EndpointOrbit, ...]

    @property
    def is_markov(self) -> bool:
        return self.transition is not None

    @property
    def non_markov_endpoints(self) -> tuple[SidedPoint, ...]:
        return tuple(o.point for o in self.orbits if not o.markov)


def markov_structure(fmap: PLMap, depth: int = DEFAULT_ORBIT_DEPTH) -> MarkovStructure:
    """Transition matrix when every branch image is a union of cells.

    Non-Markov maps are a result, not an error: ``transition`` is None and
    ``non_markov_endpoints`` lists the signed endpoints whose orbits never land
    on a partition point within ``depth`` steps.
    """
    orbits = endpoint_orbits(fmap, depth)
    images_on_grid = all(
        is_partition_point(fmap, b.image_left) and is_partition_point(fmap, b.image_right)
        for b in fmap.branches
    )
    if not images_on_grid:
        logger.debug(
            "map %s is not Markov: %d non-Markov endpoints",
            fmap.name,
            sum(not o.markov for o in orbits),
        )
        return MarkovStructure(None, orbits)

    n = fmap.size
    matrix = np.zeros((n, n), dtype=np.int64)
    for a, src in enumerate(fmap.branches):
        for b, dst in enumerate(fmap.branches):
            if dst.left >= src.image_left - TOL and dst.right <= src.image_right + TOL:
                matrix[a, b] = 1
    return MarkovStructure(TransitionMatrix(matrix), orbits)


# =============================================================================
# Words
# =============================================================================


@dataclass(frozen=True, slots=True)
class Word:
    """Finite symbol string; the empty word is the identity of concatenation."""

    symbols: tuple[int, ...] = ()

    @classmethod
    def parse(cls, text: str) -> Word:
        """Parse ``"0110"`` (single-digit symbols) or ``"10.11.3"`` (dotted)."""
        text = text.strip()
        if text in ("", "eps"):
            return cls(())
        parts = text.split(".") if "." in text else list(text)
        return cls(tuple(int(p) for p in parts))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        if not self.symbols:
            return "eps"
        if all(s < 10 for s in self.symbols):
            return "".join(str(s) for s in self.symbols)
        return ".".join(str(s) for s in self.symbols)


def word_sign(fmap: PLMap, w: Word) -> int:
    sign = 1
    for a in w.symbols:
        sign *= fmap.sign(a)
    return sign


def cylinder(fmap: PLMap, w: Word) -> tuple[float, float] | None:
    """Closure of the cylinder <w> as (lo, hi), or None if <w> has empty interior.

    Computed backwards: I_n = <a_n>, I_k = <a_k> intersected with the branch-a_k
    preimage of I_(k+1).
    """
    if not w.symbols:
        return (0.0, 1.0)
    lo, hi = 0.0, 1.0
    for depth, a in enumerate(reversed(w.symbols)):
        branch = fmap.branches[a]
        if depth == 0:
            lo, hi = branch.left, branch.right
            continue
        u, v = branch.pull_back(lo), branch.pull_back(hi)
        lo, hi = max(branch.left, min(u, v)), min(branch.right, max(u, v))
        if (hi - lo) * fmap.beta ** (depth + 1) <= TOL:
            return None
    return (lo, hi)


def is_admissible(fmap: PLMap, w: Word) -> bool:
    return cylinder(fmap, w) is not None


def _order_key(fmap: PLMap, w: Word) -> tuple[int, ...]:
    # Symbols read from the end; a symbol is mirrored when the suffix after it is reversing.
    top = fmap.size - 1
    key: list[int] = []
    suffix_sign = 1
    for a in reversed(w.symbols):
        key.append(a if suffix_sign > 0 else top - a)
        suffix_sign *= fmap.sign(a)
    return (len(w.symbols), *key)


def word_compare(fmap: PLMap, w: Word, v: Word) -> int:
    """Three-way comparison in the sign-twisted word order (-1, 0 or 1)."""
    kw, kv = _order_key(fmap, w), _order_key(fmap, v)
    return (kw > kv) - (kw < kv)


def words_of_length(fmap: PLMap, n: int, budget: int = DEFAULT_WORD_BUDGET) -> list[Word]:
    """All admissible words of length n in word order.

    Enumeration extends prefixes while tracking the image interval
    F^k(<a_1 ... a_k>); a prefix is pruned once that image is empty.

    Raises:
        ResourceGuardError: If more than ``budget`` words would be produced
    """
    if n < 0:
        raise MapValidationError(f"word length must be >= 0, got {n}")
    found: list[tuple[int, ...]] = []
    stack: list[tuple[tuple[int, ...], float, float]] = [((), 0.0, 1.0)]
    while stack:
        prefix, lo, hi = stack.pop()
        if len(prefix) == n:
            found.append(prefix)
            if len(found) > budget:
                raise ResourceGuardError(
                    f"too many words of length {n}", requested=len(found), limit=budget
                )
            continue
        for a in reversed(fmap.alphabet):
            branch = fmap.branches[a]
            c, d = max(lo, branch.left), min(hi, branch.right)
            if d - c <= TOL / fmap.beta:
                continue
            u, v = branch.apply(c), branch.apply(d)
            stack.append(((*prefix, a), min(u, v), max(u, v)))
    words = [Word(s) for s in found]
    words.sort(key=functools.partial(_order_key, fmap))
    logger.debug("level %d of %s: %d admissible words", n, fmap.name, len(words))
    return words


# =============================================================================
# Expansions and inverse branches
# =============================================================================


def iterate(fmap: PLMap, x: float, n: int) -> float:
    for _ in range(n):
        x = fmap.apply(x)
    return x


def expansion(fmap: PLMap, x: float, n: int) -> Word:
    """Itinerary a_1 ... a_n with F^(i-1)(x) in <a_i>."""
    symbols: list[int] = []
    for _ in range(n):
        a = fmap.cell_of(x)
        if a is None:
            raise NumericalError(f"orbit point {x!r} left [0, 1]", residuals=[x])
        symbols.append(a)
        x = fmap.snap(fmap.branches[a].apply(fmap.snap(x)))
    return Word(tuple(symbols))


def branch_inverse(fmap: PLMap, a: int, x: float) -> float | None:
    """The y in <a> with F(y) = x, or None if x is not in branch a's image.

    Cells are half-open, so a pull-back landing on 1 has no preimage.
    """
    y = fmap.snap(fmap.branches[a].pull_back(x))
    if y >= 1.0 or fmap.cell_of(y) != a:
        return None
    return y


def point_of_wx(fmap: PLMap, w: Word, x: float) -> float | None:
    """The point whose expansion is w followed by the expansion of x.

    Returns None ("does not exist") when w is not admissible, an inverse branch is
    undefined or the expansion of the candidate does not reproduce w.
    """
    if not is_admissible(fmap, w):
        return None
    y: float | None = x
    for a in reversed(w.symbols):
        y = branch_inverse(fmap, a, y)
        if y is None:
            return None
    if expansion(fmap, y, len(w)) != w:
        return None
    return y


def transition_word_ok(transition: TransitionMatrix, w: Word | Sequence[int]) -> bool:
    """Admissibility by consecutive transitions (Markov maps only)."""
    symbols = w.symbols if isinstance(w, Word) else tuple(w)
    return all(transition.allows(a, b) for a, b in zip(symbols, symbols[1:], strict=False))
