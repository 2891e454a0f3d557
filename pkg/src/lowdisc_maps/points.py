"""Point generation for the CLI and self-describing point files.

A point file starts with ``# key: value`` header lines (resolved config, map
fingerprint, order convention, level sizes), followed by one point per line:

    decimal  x [y [z]] as 17 significant digits
    bits     one binary string per coordinate
    csv      index,level,label,x[,y[,z]] with a column header row
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .bits import BitString, from_unit
from .config import Map2DKind, PointFormat, RunConfig
from .errors import InputError
from .interval_maps import markov_structure
from .mapfile import load_map, map_fingerprint
from .multidim import (
    COORDS,
    Point2D,
    Point3D,
    map2d_level,
    map2d_product_level,
    map3d_level,
)
from .vdc1d import vdc_levels, vdc_take

logger = logging.getLogger(__name__)

ORDER_1D = "length-major, then signed word order"
ORDER_ND = "level-major; within a level by step choices, innermost step first, x before y before z"


@dataclass(frozen=True, slots=True)
class PointRecord:
    index: int
    level: int
    label: str
    coords: tuple[float, ...]
    bits: tuple[str, ...]


@dataclass
class PointSet:
    dim: int
    records: list[PointRecord]
    level_sizes: list[int]
    header: dict[str, Any] = field(default_factory=dict)

    def coordinates(self) -> np.ndarray:
        return np.array([r.coords for r in self.records], dtype=float).reshape(-1, self.dim)


def _label(index: int, radix: int, length: int) -> str:
    digits = []
    for _ in range(length):
        index, d = divmod(index, radix)
        digits.append(str(d))
    return "".join(reversed(digits)) if digits else "eps"


def _generate_1d(config: RunConfig) -> tuple[list[PointRecord], dict[str, Any]]:
    fmap = load_map(config.map)
    x = config.resolved_base[0]
    if config.n is not None:
        points = vdc_take(fmap, x, config.n, config.word_budget)
    else:
        first, last = config.resolved_levels
        points = vdc_levels(fmap, x, first, last, config.word_budget)
    records = [
        PointRecord(
            p.index,
            len(p.word),
            str(p.word),
            (p.value,),
            (str(from_unit(p.value, config.precision)),),
        )
        for p in points
    ]
    structure = markov_structure(fmap, config.orbit_depth)
    extra = {
        "map_name": fmap.name,
        "map_hash": map_fingerprint(fmap),
        "markov": structure.is_markov,
        "order": ORDER_1D,
    }
    return records, extra


def _nd_levels(config: RunConfig) -> Iterator[tuple[int, list[tuple[BitString, ...]]]]:
    base = config.resolved_base
    if config.n is not None:
        level_range: range | Iterator[int] = _count_from(0)
    else:
        first, last = config.resolved_levels
        level_range = range(first, last + 1)
    for n in level_range:
        if config.dim == 2:
            start = Point2D.from_unit(*base, precision=config.precision)
            level_fn = map2d_level if config.map2d is Map2DKind.SHUFFLE else map2d_product_level
            pts = level_fn(start, n, config.word_budget)
            yield n, [(p.x, p.y) for p in pts]
        else:
            start3 = Point3D.from_unit(*base, precision=config.precision)
            pts3 = map3d_level(start3, n, config.three_d_mode, config.word_budget)
            yield n, [p.coords for p in pts3]


def _count_from(n: int) -> Iterator[int]:
    while True:
        yield n
        n += 1


def _generate_nd(config: RunConfig) -> tuple[list[PointRecord], dict[str, Any]]:
    radix = 1 << config.dim
    records: list[PointRecord] = []
    for n, level in _nd_levels(config):
        for i, coords in enumerate(level):
            if config.n is not None and len(records) >= config.n:
                break
            records.append(
                PointRecord(
                    len(records),
                    n,
                    _label(i, radix, n),
                    tuple(c.to_unit() for c in coords),
                    tuple(str(c) for c in coords),
                )
            )
        if config.n is not None and len(records) >= config.n:
            break
    extra: dict[str, Any] = {"order": ORDER_ND}
    if config.dim == 2:
        extra["map2d"] = config.map2d.value
    else:
        extra["three_d_mode"] = config.three_d_mode.value
        extra["note"] = "3D low discrepancy is conjectural; measurements show consistency only"
    return records, extra


def generate_points(config: RunConfig) -> PointSet:
    """Generate the point sequence a ``generate`` run describes.

    Raises:
        ResourceGuardError: If a level exceeds the point budget
        InputError: On a bad map or parameters
    """
    if config.dim == 1:
        records, extra = _generate_1d(config)
    else:
        records, extra = _generate_nd(config)
    sizes: dict[int, int] = {}
    for r in records:
        sizes[r.level] = sizes.get(r.level, 0) + 1
    level_sizes = [sizes[k] for k in sorted(sizes)]
    header = {**config.header(), **extra, "points": len(records), "level_sizes": level_sizes}
    logger.debug("generated %d points in %d levels", len(records), len(level_sizes))
    return PointSet(config.dim, records, level_sizes, header)


# =============================================================================
# Point files
# =============================================================================


def _header_value(value: Any) -> str:
    if isinstance(value, list | tuple):
        return " ".join(str(v) for v in value)
    return "" if value is None else str(value)


def write_points(points: PointSet, stream: TextIO, fmt: PointFormat) -> None:
    """Write a point set with its header; output is deterministic."""
    header = {**points.header, "format": fmt.value, "dim": points.dim}
    for key in sorted(header):
        stream.write(f"# {key}: {_header_value(header[key])}\n")
    names = COORDS[: points.dim]
    if fmt is PointFormat.CSV:
        stream.write(",".join(("index", "level", "label", *names)) + "\n")
    for r in points.records:
        if fmt is PointFormat.DECIMAL:
            stream.write(" ".join(f"{v:.17g}" for v in r.coords) + "\n")
        elif fmt is PointFormat.BITS:
            stream.write(" ".join(r.bits) + "\n")
        else:
            values = ",".join(f"{v:.17g}" for v in r.coords)
            stream.write(f"{r.index},{r.level},{r.label},{values}\n")


@dataclass
class LoadedPoints:
    coords: np.ndarray
    header: dict[str, str]

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    @property
    def level_sizes(self) -> list[int]:
        raw = self.header.get("level_sizes", "")
        return [int(v) for v in raw.split()] if raw else []


def _parse_row(line: str, fmt: str, columns: list[str] | None) -> list[float]:
    if fmt == PointFormat.CSV.value:
        values = line.split(",")
        if columns is None or len(values) != len(columns):
            raise ValueError("column count does not match the header row")
        return [float(values[columns.index(c)]) for c in COORDS if c in columns]
    tokens = line.split()
    if fmt == PointFormat.BITS.value:
        return [BitString.from_text(t).to_unit() for t in tokens]
    return [float(t) for t in tokens]


def read_points(path: str | Path) -> LoadedPoints:
    """Read a point file written by :func:`write_points` (or plain decimal rows).

    Raises:
        InputError: If the file is missing, empty or malformed
    """
    p = Path(path)
    if not p.is_file():
        raise InputError(f"point file not found: {p}")
    header: dict[str, str] = {}
    rows: list[list[float]] = []
    columns: list[str] | None = None
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            header[key.strip()] = value.strip()
            continue
        fmt = header.get("format") or (PointFormat.CSV.value if "," in line else "decimal")
        if fmt == PointFormat.CSV.value and columns is None:
            columns = [c.strip() for c in line.split(",")]
            continue
        try:
            rows.append(_parse_row(line, fmt, columns))
        except ValueError as e:
            raise InputError(f"{p}:{lineno}: cannot parse point: {e}") from e
    if not rows:
        raise InputError(f"{p}: no points found")
    if len({len(r) for r in rows}) != 1 or not 1 <= len(rows[0]) <= 3:
        raise InputError(f"{p}: rows must all have the same 1 to 3 coordinates")
    return LoadedPoints(np.array(rows, dtype=float), header)
