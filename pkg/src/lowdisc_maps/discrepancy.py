"""Exact and oracle discrepancy of point sets in [0,1)^d.

Boxes are half-open. Suprema over closed boxes are reached combinatorially:
over-density is measured with closed counts, under-density with open counts.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, ResourceGuardError

logger = logging.getLogger(__name__)

STAR_2D_LIMIT = 20_000
DYADIC_BOX_LIMIT = 200_000_000
BRUTE_FORCE_LIMIT = 1_000_000_000


@dataclass(frozen=True, slots=True)
class Box:
    """Witness box ``lower`` to ``upper``; ``closed`` marks a closed box."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    closed: bool = False

    @property
    def volume(self) -> float:
        return math.prod(hi - lo for lo, hi in zip(self.lower, self.upper, strict=True))

    def __str__(self) -> str:
        left, right = ("[", "]") if self.closed else ("[", ")")
        return " x ".join(
            f"{left}{lo:.17g}, {hi:.17g}{right}"
            for lo, hi in zip(self.lower, self.upper, strict=True)
        )


@dataclass(frozen=True, slots=True)
class Discrepancy:
    value: float
    witness: Box


@dataclass
class DiscrepancyReport:
    """Discrepancy of one prefix of a point sequence.

    Attributes:
        n: Number of points measured
        star: Anchored-box value D*_N, if computed
        extreme: All-interval value D_N (1D only)
        dyadic: Sup over boxes with corners on the 2^-k grid
        dyadic_k: Grid resolution used for ``dyadic``
        witnesses: Box reaching each reported maximum, by kind
    """

    n: int
    star: float | None = None
    extreme: float | None = None
    dyadic: float | None = None
    dyadic_k: int | None = None
    witnesses: dict[str, Box] = field(default_factory=dict)


def _as_points(points: ArrayLike, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DomainError("discrepancy needs a nonempty list of points")
    if dim is not None and arr.shape[1] != dim:
        raise DomainError(f"expected {dim}-dimensional points, got {arr.shape[1]}")
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("points must lie in [0, 1)")
    return arr


# =============================================================================
# One dimension
# =============================================================================


def star_discrepancy_1d(points: ArrayLike) -> Discrepancy:
    """max over i of max(i/N - x_(i), x_(i) - (i-1)/N) for sorted x."""
    xs = np.sort(_as_points(points, 1)[:, 0])
    n = len(xs)
    i = np.arange(1, n + 1)
    over = i / n - xs
    under = xs - (i - 1) / n
    j_over, j_under = int(np.argmax(over)), int(np.argmax(under))
    if over[j_over] >= under[j_under]:
        return Discrepancy(float(over[j_over]), Box((0.0,), (float(xs[j_over]),), closed=True))
    return Discrepancy(float(under[j_under]), Box((0.0,), (float(xs[j_under]),)))


def extreme_discrepancy_1d(points: ArrayLike) -> Discrepancy:
    """Sup over all subintervals of [0,1), by exhaustive O(N^2) scan.

    Over-density is maximized over closed intervals [x_(i), x_(j)],
    under-density over open intervals whose ends are 0, a point or 1.
    """
    xs = np.sort(_as_points(points, 1)[:, 0])
    n = len(xs)
    best = Discrepancy(0.0, Box((0.0,), (0.0,)))
    for i in range(n):
        counts = np.arange(1, n - i + 1)
        over = counts / n - (xs[i:] - xs[i])
        j = int(np.argmax(over))
        if over[j] > best.value:
            best = Discrepancy(float(over[j]), Box((float(xs[i]),), (float(xs[i + j]),), True))
    ends = np.concatenate(([0.0], xs, [1.0]))
    for a in np.unique(ends[:-1]):
        right = ends[ends > a]
        inside = np.searchsorted(xs, right, side="left") - np.searchsorted(xs, a, side="right")
        under = (right - a) - inside / n
        j = int(np.argmax(under))
        if under[j] > best.value:
            best = Discrepancy(float(under[j]), Box((float(a),), (float(right[j]),)))
    return best


def extreme_discrepancy_1d_closed_form(points: ArrayLike) -> float:
    """1/N + max(i/N - x_(i)) - min(i/N - x_(i)); used as a cross-check."""
    xs = np.sort(_as_points(points, 1)[:, 0])
    n = len(xs)
    d = np.arange(1, n + 1) / n - xs
    return float(1.0 / n + d.max() - d.min())


# =============================================================================
# Two dimensions
# =============================================================================


def star_discrepancy_2d(points: ArrayLike, limit: int = STAR_2D_LIMIT) -> Discrepancy:
    """Exact sup over anchored boxes [0,a) x [0,b).

    Corners range over point coordinates and 1. Over-density uses the closed
    box [0,a] x [0,b], under-density the open one.

    Raises:
        ResourceGuardError: If N exceeds ``limit`` (use dyadic mode instead)
    """
    pts = _as_points(points, 2)
    n = len(pts)
    if n > limit:
        raise ResourceGuardError(
            "exact 2D star discrepancy is quadratic; use --dyadic-k", requested=n, limit=limit
        )
    x, y = pts[:, 0], pts[:, 1]
    a_cand = np.unique(np.concatenate((x, [1.0])))
    b_cand = np.unique(np.concatenate((y, [1.0])))
    best = Discrepancy(0.0, Box((0.0, 0.0), (0.0, 0.0)))
    for a in a_cand:
        closed_ys = np.sort(y[x <= a])
        over = np.searchsorted(closed_ys, b_cand, side="right") / n - a * b_cand
        j = int(np.argmax(over))
        if over[j] > best.value:
            best = Discrepancy(float(over[j]), Box((0.0, 0.0), (float(a), float(b_cand[j])), True))
        open_ys = np.sort(y[x < a])
        under = a * b_cand - np.searchsorted(open_ys, b_cand, side="left") / n
        j = int(np.argmax(under))
        if under[j] > best.value:
            best = Discrepancy(float(under[j]), Box((0.0, 0.0), (float(a), float(b_cand[j]))))
    logger.debug("2D star discrepancy of %d points: %.6g", n, best.value)
    return best


# =============================================================================
# Dyadic boxes
# =============================================================================


def _box_sums(prefix: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Inclusion-exclusion over every (lo, hi) pair on every axis of ``prefix``."""
    total = np.zeros((len(lo),) * prefix.ndim)
    for choice in itertools.product((0, 1), repeat=prefix.ndim):
        sign = -1 if (prefix.ndim - sum(choice)) % 2 else 1
        total += sign * prefix[np.ix_(*[hi if c else lo for c in choice])]
    return total


def dyadic_discrepancy(
    points: ArrayLike, dim: int, k: int, limit: int = DYADIC_BOX_LIMIT
) -> Discrepancy:
    """Exact sup over all boxes whose corners are multiples of 2^-k.

    Cell counts go into a dim-dimensional prefix-sum array; the first axis is
    swept in a loop and the others are vectorized.

    Raises:
        DomainError: If dim is not 1, 2 or 3, or k < 0
        ResourceGuardError: If the number of boxes exceeds ``limit``
    """
    if dim not in (1, 2, 3) or k < 0:
        raise DomainError(f"dyadic discrepancy needs dim in 1..3 and k >= 0, got {dim}, {k}")
    pts = _as_points(points, dim)
    n = len(pts)
    g = 1 << k
    boxes = (g * (g + 1) // 2) ** dim
    if boxes > limit:
        raise ResourceGuardError(
            f"dyadic k={k} in {dim}D has too many boxes", requested=boxes, limit=limit
        )
    lo, hi = np.triu_indices(g + 1, k=1)
    cells = np.minimum((pts * g).astype(np.int64), g - 1)
    counts = np.zeros((g,) * dim)
    np.add.at(counts, tuple(cells.T), 1.0)
    prefix = np.pad(counts, [(1, 0)] * dim)
    for axis in range(dim):
        prefix = np.cumsum(prefix, axis=axis)
    lengths = (hi - lo) / g

    best = Discrepancy(0.0, Box((0.0,) * dim, (0.0,) * dim))

    def consider(dev: np.ndarray, head: tuple[int, ...]) -> None:
        nonlocal best
        flat = int(np.argmax(dev))
        if dev.flat[flat] <= best.value:
            return
        idx = head + np.unravel_index(flat, dev.shape)
        lower = tuple(float(lo[i]) / g for i in idx)
        upper = tuple(float(hi[i]) / g for i in idx)
        best = Discrepancy(float(dev.flat[flat]), Box(lower, upper))

    if dim == 1:
        consider(np.abs((prefix[hi] - prefix[lo]) / n - lengths), ())
        return best
    rest_volume = functools.reduce(np.multiply.outer, [lengths] * (dim - 1))
    for p in range(len(lo)):
        slab = prefix[hi[p]] - prefix[lo[p]]
        dev = np.abs(_box_sums(slab, lo, hi) / n - lengths[p] * rest_volume)
        consider(dev, (p,))
    logger.debug("dyadic discrepancy dim=%d k=%d over %d boxes: %.6g", dim, k, boxes, best.value)
    return best


# =============================================================================
# Brute-force oracle
# =============================================================================


def brute_force_discrepancy(
    points: ArrayLike,
    dim: int,
    grid: int,
    anchored: bool = False,
    limit: int = BRUTE_FORCE_LIMIT,
) -> Discrepancy:
    """Max deviation over half-open boxes with corners on the 1/grid lattice.

    Every box is counted directly from point membership, independently of the
    fast algorithms. ``anchored`` restricts to boxes with lower corner 0.

    Raises:
        ResourceGuardError: If boxes x points exceeds ``limit``
    """
    if grid < 1:
        raise DomainError(f"grid must be >= 1, got {grid}")
    pts = _as_points(points, dim)
    n = len(pts)
    pairs = grid if anchored else grid * (grid + 1) // 2
    work = pairs**dim * n
    if work > limit:
        raise ResourceGuardError("brute-force oracle too large", requested=work, limit=limit)
    if anchored:
        lo = np.zeros(grid, dtype=np.int64)
        hi = np.arange(1, grid + 1)
    else:
        lo, hi = np.triu_indices(grid + 1, k=1)
    members = [
        (pts[:, c][None, :] >= lo[:, None] / grid) & (pts[:, c][None, :] < hi[:, None] / grid)
        for c in range(dim)
    ]
    lengths = (hi - lo) / grid
    best = Discrepancy(0.0, Box((0.0,) * dim, (0.0,) * dim))
    for head in itertools.product(range(len(lo)), repeat=dim - 1):
        mask = np.ones(n, dtype=bool)
        volume = 1.0
        for c, i in enumerate(head):
            mask &= members[c][i]
            volume *= lengths[i]
        counts = (members[-1] & mask).sum(axis=1)
        dev = np.abs(counts / n - volume * lengths)
        j = int(np.argmax(dev))
        if dev[j] > best.value:
            idx = head + (j,)
            best = Discrepancy(
                float(dev[j]),
                Box(
                    tuple(float(lo[i]) / grid for i in idx),
                    tuple(float(hi[i]) / grid for i in idx),
                ),
            )
    return best


# =============================================================================
# Reports and growth fitting
# =============================================================================


def discrepancy_report(
    points: ArrayLike,
    dim: int,
    dyadic_k: int | None = None,
    extreme: bool = True,
) -> DiscrepancyReport:
    """Everything computable for one prefix: star and extreme in 1D, star in 2D,
    dyadic in any dimension when ``dyadic_k`` is given."""
    pts = _as_points(points, dim)
    report = DiscrepancyReport(n=len(pts))
    if dim == 1:
        star = star_discrepancy_1d(pts)
        report.star = star.value
        report.witnesses["star"] = star.witness
        if extreme:
            ext = extreme_discrepancy_1d(pts)
            report.extreme = ext.value
            report.witnesses["extreme"] = ext.witness
    elif dim == 2:
        star = star_discrepancy_2d(pts)
        report.star = star.value
        report.witnesses["star"] = star.witness
    if dyadic_k is not None:
        dy = dyadic_discrepancy(pts, dim, dyadic_k)
        report.dyadic = dy.value
        report.dyadic_k = dyadic_k
        report.witnesses["dyadic"] = dy.witness
    return report


@dataclass(frozen=True)
class GrowthFit:
    """Normalized constants c_N = N D_N / (log_b N)^p and their log-log trend."""

    ns: tuple[int, ...]
    constants: tuple[float, ...]
    log_power: float
    log_base: float
    slope: float

    @property
    def max_constant(self) -> float:
        return max(self.constants)


def growth_fit(
    ns: Sequence[int],
    ds: Sequence[float],
    log_power: float = 1.0,
    log_base: float = 2.0,
) -> GrowthFit:
    """Fit log c_N against log log N by least squares.

    A slope near 0 is consistent with D_N = O((log N)^p / N).

    Raises:
        DomainError: If Ns are not strictly increasing integers >= 2, or a D_N <= 0
    """
    if len(ns) != len(ds) or len(ns) < 2:
        raise DomainError("growth fit needs at least two (N, D_N) pairs of equal length")
    n_arr = np.asarray(ns, dtype=float)
    d_arr = np.asarray(ds, dtype=float)
    if np.any(n_arr < 2) or np.any(np.diff(n_arr) <= 0):
        raise DomainError("Ns must be strictly increasing and >= 2")
    if np.any(d_arr <= 0):
        raise DomainError("discrepancy values must be positive")
    if log_base <= 1:
        raise DomainError(f"log base must exceed 1, got {log_base}")
    logs = np.log(n_arr) / math.log(log_base)
    constants = n_arr * d_arr / logs**log_power
    slope, _ = np.polyfit(np.log(np.log(n_arr)), np.log(constants), 1)
    return GrowthFit(
        tuple(int(v) for v in ns),
        tuple(float(c) for c in constants),
        log_power,
        log_base,
        float(slope),
    )
