"""Map-definition files.

A map file is a YAML (or JSON) document::

    name: golden-mean
    description: beta-transformation with beta = phi
    branches:
      - {left: 0, right: 1/phi, sign: 1, beta: phi, image_left: 0, image_right: 1}
      - {left: 1/phi, right: 1, sign: 1, beta: phi, image_left: 0, image_right: 1/phi}

Numeric fields accept numbers or constant expressions (see :mod:`.expr`).
Shipped maps are addressable by bare name.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from importlib import resources
from pathlib import Path
from typing import Annotated, Any, Literal

import yaml
from pydantic import BaseModel, BeforeValidator, Field, ValidationError

from .errors import ExpressionError, InputError, MapValidationError
from .expr import evaluate
from .interval_maps import Branch, PLMap, validate_map

logger = logging.getLogger(__name__)

SHIPPED_MAPS = ("doubling", "tent", "golden-mean", "beta-1.9", "three-shift", "two-block")


def _numeric(value: Any) -> float:
    if isinstance(value, str | int | float) and not isinstance(value, bool):
        try:
            return evaluate(value)
        except ExpressionError as e:
            raise ValueError(str(e)) from e
    raise ValueError(f"expected a number or expression, got {value!r}")


Numeric = Annotated[float, BeforeValidator(_numeric)]


class BranchSpec(BaseModel):
    """One branch as written in a map file."""

    left: Numeric
    right: Numeric
    sign: Literal[1, -1]
    beta: Numeric
    image_left: Numeric
    image_right: Numeric


class MapDefinition(BaseModel):
    """Schema of a map file."""

    name: str
    description: str = ""
    branches: list[BranchSpec] = Field(min_length=1)

    def build(self) -> PLMap:
        return validate_map((b.model_dump() for b in self.branches), name=self.name)


def _shipped_text(name: str) -> str:
    return resources.files("lowdisc_maps").joinpath("maps", f"{name}.yaml").read_text("utf-8")


def parse_map_text(text: str, source: str = "<text>") -> PLMap:
    """Parse and validate map-file content.

    Raises:
        InputError: If the document is not valid YAML
        MapValidationError: If it violates the schema or the map invariants
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise InputError(f"{source}: malformed map file: {e}") from e
    if not isinstance(data, dict):
        raise MapValidationError(f"{source}: map file must be a mapping with a 'branches' list")
    try:
        definition = MapDefinition.model_validate(data)
    except ValidationError as e:
        raise MapValidationError(f"{source}: {e}") from e
    return definition.build()


def load_map(name_or_path: str | Path) -> PLMap:
    """Load a shipped map by name, or a map file by path.

    Raises:
        InputError: If the file does not exist or cannot be parsed
        MapValidationError: If the definition is invalid
    """
    key = str(name_or_path)
    if key in SHIPPED_MAPS:
        logger.debug("loading shipped map %s", key)
        return parse_map_text(_shipped_text(key), source=key)
    path = Path(name_or_path)
    if not path.is_file():
        raise InputError(
            f"map file not found: {path} (shipped maps: {', '.join(SHIPPED_MAPS)})"
        )
    return parse_map_text(path.read_text(encoding="utf-8"), source=str(path))


def map_fingerprint(fmap: PLMap) -> str:
    """First 16 hex digits of the SHA-256 of the canonical branch list."""
    canonical = json.dumps(fmap.to_dicts(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def beta_transformation(beta: float) -> PLMap:
    """The map x -> beta * x mod 1 for beta > 1.

    There are ceil(beta) increasing branches; the last one is partial unless
    beta is an integer.
    """
    if not beta > 1.0:
        raise MapValidationError(f"beta must exceed 1, got {beta}")
    count = math.ceil(beta - 1e-12)
    branches = []
    for k in range(count):
        left = k / beta
        right = min(1.0, (k + 1) / beta)
        branches.append(Branch(left, right, 1, beta, 0.0, min(1.0, beta * (right - left))))
    return validate_map(branches, name=f"beta-{beta:g}")
