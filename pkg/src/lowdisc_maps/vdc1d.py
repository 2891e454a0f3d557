"""One-dimensional van der Corput sequences of an interval map.

The sequence lists the points wx over all admissible words w, shortest
words first and equal lengths in word order. Words for which wx does not
exist are skipped; repeated points are kept.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass, field

from .errors import DomainError
from .interval_maps import DEFAULT_WORD_BUDGET, PLMap, Word, point_of_wx, words_of_length

logger = logging.getLogger(__name__)

MAX_EMPTY_LEVELS = 64


@dataclass(frozen=True, slots=True)
class VdcPoint:
    index: int
    value: float
    word: Word


@dataclass
class VdcStream:
    """Lazily generated van der Corput sequence of ``fmap`` based at ``x``.

    Contract:
        - points come out level by level, each level in word order
        - every point's |w|-step expansion equals its word
        - a stream has a single consumer
    """

    fmap: PLMap
    x: float
    budget: int = DEFAULT_WORD_BUDGET
    level: int = 0
    emitted: int = 0
    _buffer: deque[tuple[float, Word]] = field(default_factory=deque, repr=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.x < 1.0:
            raise DomainError(f"base point {self.x!r} outside [0, 1)")

    def _fill(self) -> None:
        empty = 0
        while not self._buffer:
            words = words_of_length(self.fmap, self.level, self.budget)
            for w in words:
                y = point_of_wx(self.fmap, w, self.x)
                if y is not None:
                    self._buffer.append((y, w))
            logger.debug(
                "level %d: %d of %d words give points", self.level, len(self._buffer), len(words)
            )
            self.level += 1
            if self._buffer:
                return
            empty += 1
            if empty > MAX_EMPTY_LEVELS:
                raise DomainError(f"{self.x!r} has no preimages in {MAX_EMPTY_LEVELS} levels")

    def __iter__(self) -> Iterator[VdcPoint]:
        return self

    def __next__(self) -> VdcPoint:
        return vdc_next(self)


def vdc_next(stream: VdcStream) -> VdcPoint:
    """Next point of the stream with its generating word.

    Raises:
        ResourceGuardError: If a level exceeds the word budget
    """
    if not stream._buffer:
        stream._fill()
    value, word = stream._buffer.popleft()
    point = VdcPoint(stream.emitted, value, word)
    stream.emitted += 1
    return point


def vdc_take(fmap: PLMap, x: float, n: int, budget: int = DEFAULT_WORD_BUDGET) -> list[VdcPoint]:
    """First n points of the sequence."""
    if n < 0:
        raise DomainError(f"point count must be >= 0, got {n}")
    stream = VdcStream(fmap, x, budget)
    return [vdc_next(stream) for _ in range(n)]


def vdc_levels(
    fmap: PLMap,
    x: float,
    first: int,
    last: int,
    budget: int = DEFAULT_WORD_BUDGET,
) -> list[VdcPoint]:
    """All points of levels first..last (inclusive), indexed from 0."""
    if not 0 <= first <= last:
        raise DomainError(f"invalid level range {first}..{last}")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"base point {x!r} outside [0, 1)")
    points: list[VdcPoint] = []
    for n in range(first, last + 1):
        for w in words_of_length(fmap, n, budget):
            y = point_of_wx(fmap, w, x)
            if y is not None:
                points.append(VdcPoint(len(points), y, w))
    return points


def radical_inverse(k: int, base: int = 2) -> float:
    """Digit-reversed value of k in the given base (classic van der Corput)."""
    if k < 0 or base < 2:
        raise DomainError(f"radical inverse needs k >= 0 and base >= 2, got {k}, {base}")
    value, scale = 0.0, 1.0 / base
    while k:
        k, digit = divmod(k, base)
        value += digit * scale
        scale /= base
    return value
