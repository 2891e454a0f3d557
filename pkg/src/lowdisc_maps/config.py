"""Run configuration.

Every CLI parameter lives on :class:`RunConfig`. Values come from defaults,
then an optional YAML file (``--config``), then explicit flags. The model is
validated before any computation and echoed into every output header.
"""

from __future__ import annotations

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from .bits import DEFAULT_PRECISION
from .errors import ExpressionError, InputError
from .expr import evaluate
from .interval_maps import DEFAULT_ORBIT_DEPTH, DEFAULT_WORD_BUDGET
from .multidim import MIX_LEVELS, ThreeDMode
from .spectral import DEFAULT_DEGREE

logger = logging.getLogger(__name__)


class Command(str, Enum):
    SPECTRUM = "spectrum"
    GENERATE = "generate"
    DISCREPANCY = "discrepancy"
    VERIFY = "verify"
    FIT = "fit"


class PointFormat(str, Enum):
    """Layout of generated point files."""

    DECIMAL = "decimal"
    BITS = "bits"
    CSV = "csv"


class ReportFormat(str, Enum):
    TABLE = "table"
    JSON = "json"


class Map2DKind(str, Enum):
    """Digit-shuffling map, or the plain product map as a baseline."""

    SHUFFLE = "shuffle"
    PRODUCT = "product"


class Schedule(str, Enum):
    """Which prefix lengths N the discrepancy command measures."""

    LEVELS = "levels"
    POW2 = "pow2"
    POW4 = "pow4"


DEFAULT_LEVELS = {1: (0, 10), 2: (0, 4), 3: (0, 3)}


def parse_levels(value: str) -> tuple[int, int]:
    """Parse ``"A..B"`` (or a single level ``"A"``)."""
    first, sep, last = value.partition("..")
    try:
        a = int(first)
        b = int(last) if sep else a
    except ValueError as e:
        raise ValueError(f"levels must look like A..B, got {value!r}") from e
    return a, b


def _coordinate(value: Any) -> float:
    try:
        return evaluate(value)
    except ExpressionError as e:
        raise ValueError(str(e)) from e


def parse_base(value: str) -> tuple[float, ...]:
    """Parse ``"x[,y[,z]]"``; each coordinate may be a constant expression."""
    return tuple(_coordinate(part) for part in value.split(","))


class RunConfig(BaseModel):
    """Fully resolved parameters of one command run."""

    model_config = ConfigDict(extra="forbid")

    command: Command | None = None
    map: str = "doubling"
    dim: Literal[1, 2, 3] = 1
    base: tuple[float, ...] | None = None
    levels: tuple[int, int] | None = None
    n: int | None = Field(default=None, ge=0)
    precision: int = Field(default=DEFAULT_PRECISION, ge=8, le=4096)
    degree: int = Field(default=DEFAULT_DEGREE, ge=1, le=400)
    orbit_depth: int = Field(default=DEFAULT_ORBIT_DEPTH, ge=1)
    word_budget: int = Field(default=DEFAULT_WORD_BUDGET, ge=1)
    dyadic_k: int | None = Field(default=5, ge=0, le=14)
    log_power: float = 1.0
    log_base: float = Field(default=2.0, gt=1.0)
    schedule: Schedule = Schedule.LEVELS
    extreme_cap: int = Field(default=4096, ge=0)
    rect_n: int = Field(default=3, ge=1, le=4)
    out: Path | None = None
    point_format: PointFormat = PointFormat.DECIMAL
    report_format: ReportFormat = ReportFormat.TABLE
    three_d_mode: ThreeDMode = ThreeDMode.LEVEL
    map2d: Map2DKind = Map2DKind.SHUFFLE

    @field_validator("base", mode="before")
    @classmethod
    def _coerce_base(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_base(value)
        if isinstance(value, int | float):
            return (value,)
        if isinstance(value, list | tuple):
            return tuple(_coordinate(v) for v in value)
        return value

    @field_validator("levels", mode="before")
    @classmethod
    def _coerce_levels(cls, value: Any) -> Any:
        if isinstance(value, str):
            return parse_levels(value)
        if isinstance(value, int):
            return (value, value)
        return value

    @field_validator("base")
    @classmethod
    def _check_base(cls, value: tuple[float, ...] | None) -> tuple[float, ...] | None:
        if value is not None and not all(0.0 <= v < 1.0 for v in value):
            raise ValueError(f"base coordinates must lie in [0, 1), got {value}")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> RunConfig:
        if self.base is not None and len(self.base) != self.dim:
            raise ValueError(f"--base has {len(self.base)} coordinates but --dim is {self.dim}")
        if self.levels is not None:
            first, last = self.levels
            if not 0 <= first <= last:
                raise ValueError(f"invalid level range {first}..{last}")
            if self.n is not None:
                raise ValueError("give either --levels or --n, not both")
            if self.dim == 3 and self.three_d_mode is ThreeDMode.LEVEL and last > MIX_LEVELS:
                raise ValueError(f"3D levels stop at {MIX_LEVELS} (mixing matrix block)")
        return self

    @property
    def resolved_base(self) -> tuple[float, ...]:
        if self.base is not None:
            return self.base
        return (0.5,) if self.dim == 1 else (0.0,) * self.dim

    @property
    def resolved_levels(self) -> tuple[int, int]:
        return self.levels if self.levels is not None else DEFAULT_LEVELS[self.dim]

    def header(self) -> dict[str, Any]:
        """The resolved configuration as plain values for output headers."""
        data = self.model_dump(mode="json")
        data["base"] = list(self.resolved_base)
        if self.n is None:
            data["levels"] = "{}..{}".format(*self.resolved_levels)
        return data


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a YAML run-config file; keys use the RunConfig field names.

    Raises:
        InputError: If the file is missing or not a YAML mapping
    """
    p = Path(path)
    if not p.is_file():
        raise InputError(f"config file not found: {p}")
    try:
        data = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise InputError(f"{p}: malformed config file: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"{p}: config file must be a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def build_config(file_values: dict[str, Any] | None = None, **flags: Any) -> RunConfig:
    """Merge file values with explicit flags (flags win; ``None`` means unset).

    Raises:
        InputError: If the merged values fail validation
    """
    merged = dict(file_values or {})
    merged.update({k: v for k, v in flags.items() if v is not None})
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise InputError(f"invalid configuration: {problems}") from e
    logger.debug("resolved config: %s", config.header())
    return config
