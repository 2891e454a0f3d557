"""Command reports: spectrum and verify payloads, discrepancy CSV, growth fits.

Payload builders return plain dicts so the same data feeds the rich tables
and ``--format json``. The discrepancy CSV is self-describing: ``# key: value``
header lines, one row per measured prefix, and trailing ``# growth_fit.*``
lines with the fitted constants.
"""

from __future__ import annotations

import csv
import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import numpy as np
from rich.console import Console
from rich.table import Table

from .config import RunConfig, Schedule
from .discrepancy import (
    STAR_2D_LIMIT,
    Box,
    GrowthFit,
    dyadic_discrepancy,
    extreme_discrepancy_1d,
    growth_fit,
    star_discrepancy_1d,
    star_discrepancy_2d,
)
from .errors import ErgodicDecompositionError, InputError
from .interval_maps import PLMap, markov_structure
from .mapfile import map_fingerprint
from .spectral import (
    MinorCertificate,
    Verdict,
    invariant_density,
    markov_minor_certificate,
    signed_markov_agreement,
    spectrum,
    truncation_bound,
    zeta_coefficient_bound,
    zeta_identity_check,
)
from .verify import CheckResult

logger = logging.getLogger(__name__)

console = Console()

ZETA_BOUND_TERMS = 30
CSV_COLUMNS = ("N", "D_star", "D_extreme", "D_dyadic", "c_N", "witness")
EXTREME_NOTE = (
    "extreme discrepancy is exact in 1D only; in 2D and 3D the dyadic value "
    "stands in for it (extreme <= 2^d star)"
)


def _number(value: float | None, digits: int = 6) -> str:
    return "-" if value is None else f"{value:.{digits}g}"


def _complex(z: complex) -> dict[str, float]:
    return {"re": float(z.real), "im": float(z.imag), "abs": float(abs(z))}


def _header_value(value: Any) -> str:
    if isinstance(value, list | tuple):
        return " ".join(str(v) for v in value)
    return "" if value is None else str(value)


# =============================================================================
# Spectrum
# =============================================================================


def _certificate_payload(cert: MinorCertificate) -> dict[str, Any]:
    return {
        "verdict": cert.verdict.value,
        "markov_states": list(cert.markov_states),
        "non_markov": cert.non_markov,
        "minor_zeros": cert.minor_zeros,
        "zeta_zeros": cert.zeta_zeros,
        "radius": cert.radius,
        "contour_min": cert.contour_min,
        "contour_noise": cert.contour_noise,
        "truncation_bound": cert.truncation_bound,
        "zero_locations": [_complex(z) for z in cert.zero_locations],
    }


def spectrum_payload(fmap: PLMap, degree: int, orbit_depth: int) -> dict[str, Any]:
    """Markov structure, zeros, certificates and invariant density of one map.

    Markov-only quantities are ``None`` for a non-Markov map; the endpoint
    minor certificate and the zeta coefficient bound are always present.
    """
    structure = markov_structure(fmap, orbit_depth)
    payload: dict[str, Any] = {
        "map": fmap.name,
        "map_hash": map_fingerprint(fmap),
        "beta": fmap.beta,
        "xi": fmap.xi,
        "degree": degree,
        "truncation_bound": truncation_bound(fmap.beta, degree),
        "markov": structure.is_markov,
        "non_markov_endpoints": [str(p) for p in structure.non_markov_endpoints],
        "transition": structure.transition.to_lists() if structure.transition else None,
        "spectrum": None,
        "zeta_residual": None,
        "signed_agreement": None,
        "invariant_density": None,
        "density_note": None,
    }
    if structure.is_markov:
        report = spectrum(fmap)
        payload["spectrum"] = {
            "zeros": [
                {**_complex(z.value), "multiplicity": z.multiplicity, "inside": z.inside}
                for z in report.zeros
            ],
            "multiplicity_at_one": report.multiplicity_at_one,
            "second_eigenvalue": report.second_eigenvalue,
            "certificate": report.certificate,
            "mixing": report.mixing,
            "ergodic_components": report.ergodic_components,
        }
        payload["zeta_residual"] = zeta_identity_check(fmap, degree)
        payload["signed_agreement"] = signed_markov_agreement(fmap, degree)
        try:
            density = invariant_density(fmap)
            payload["invariant_density"] = {
                "cells": [list(c) for c in density.cells],
                "values": list(density.coeffs),
            }
        except ErgodicDecompositionError as e:
            payload["density_note"] = str(e)

    certificate = markov_minor_certificate(fmap, degree, orbit_depth=orbit_depth)
    payload["minor_certificate"] = _certificate_payload(certificate)
    bound = zeta_coefficient_bound(fmap, min(degree, ZETA_BOUND_TERMS))
    payload["zeta_bound"] = {
        "sup": bound.sup,
        "trend": bound.trend,
        "coefficients": list(bound.coefficients),
    }
    return payload


def spectrum_verdict(payload: dict[str, Any]) -> Verdict:
    return Verdict(payload["minor_certificate"]["verdict"])


def render_spectrum(payload: dict[str, Any]) -> None:
    summary = Table(title=f"Map {payload['map']}", show_header=False)
    summary.add_column("field", style="bold")
    summary.add_column("value")
    summary.add_row("hash", payload["map_hash"])
    summary.add_row("beta", _number(payload["beta"], 12))
    summary.add_row("xi", _number(payload["xi"], 12))
    summary.add_row("markov", str(payload["markov"]).lower())
    if payload["non_markov_endpoints"]:
        summary.add_row("non-Markov endpoints", " ".join(payload["non_markov_endpoints"]))
    summary.add_row("degree K", str(payload["degree"]))
    summary.add_row("truncation bound", _number(payload["truncation_bound"]))
    summary.add_row("zeta residual", _number(payload["zeta_residual"], 3))
    summary.add_row("signed vs Markov det", _number(payload["signed_agreement"], 3))
    console.print(summary)

    found = payload["spectrum"]
    if found is not None:
        zeros = Table(title="Zeros of det(I - Phi(z))")
        zeros.add_column("z")
        zeros.add_column("|z|", justify="right")
        zeros.add_column("mult", justify="right")
        zeros.add_column("inside |z| < beta")
        for z in found["zeros"]:
            zeros.add_row(
                f"{z['re']:.6g}{z['im']:+.6g}i",
                _number(z["abs"]),
                str(z["multiplicity"]),
                "yes" if z["inside"] else "no",
            )
        console.print(zeros)
        console.print(
            f"multiplicity at z=1: {found['multiplicity_at_one']}  "
            f"ergodic components: {found['ergodic_components']}  "
            f"second eigenvalue: {_number(found['second_eigenvalue'])}"
        )
        console.print(f"spectral certificate: [bold]{str(found['certificate']).lower()}[/bold]")
        console.print(f"mixing: {str(found['mixing']).lower()}")
    else:
        console.print("[dim]not Markov: spectrum and density use the endpoint route[/dim]")

    density = payload["invariant_density"]
    if density is not None:
        values = ", ".join(_number(v) for v in density["values"])
        console.print(f"invariant density per cell: {values}")
    elif payload["density_note"]:
        console.print(f"[yellow]{payload['density_note']}[/yellow]")

    cert = payload["minor_certificate"]
    console.print(
        f"endpoint minor certificate: [bold]{cert['verdict']}[/bold] "
        f"({cert['non_markov']} non-Markov endpoints, minor zeros {cert['minor_zeros']}, "
        f"zeta zeros {cert['zeta_zeros']}, contour min {_number(cert['contour_min'], 3)})"
    )
    bound = payload["zeta_bound"]
    console.print(
        f"zeta_n bound: sup {_number(bound['sup'])}, trend {_number(bound['trend'], 3)}"
    )


# =============================================================================
# Verify
# =============================================================================


def verify_payload(results: Sequence[CheckResult]) -> dict[str, Any]:
    return {
        "passed": all(r.passed for r in results),
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }


def render_verify(results: Sequence[CheckResult]) -> None:
    table = Table(title="Structural checks")
    table.add_column("check")
    table.add_column("result")
    table.add_column("detail")
    for r in results:
        table.add_row(r.name, "[green]ok[/green]" if r.passed else "[red]FAILED[/red]", r.detail)
    console.print(table)
    failed = sum(not r.passed for r in results)
    console.print(f"{len(results) - failed}/{len(results)} checks passed")


# =============================================================================
# Discrepancy measurement
# =============================================================================


@dataclass(frozen=True, slots=True)
class DiscrepancyRow:
    n: int
    star: float | None
    extreme: float | None
    dyadic: float | None
    constant: float | None
    witness: Box | None

    def to_csv(self) -> list[str]:
        def cell(v: float | None) -> str:
            return "" if v is None else f"{v:.17g}"

        return [
            str(self.n),
            cell(self.star),
            cell(self.extreme),
            cell(self.dyadic),
            cell(self.constant),
            "" if self.witness is None else str(self.witness),
        ]


def n_schedule(total: int, schedule: Schedule, level_sizes: Sequence[int] = ()) -> list[int]:
    """Prefix lengths to measure: whole levels, or powers of 2 or 4.

    Raises:
        InputError: If there are no points
    """
    if total < 1:
        raise InputError("no points to measure")
    if schedule is Schedule.LEVELS and level_sizes:
        ns = list(itertools.accumulate(level_sizes))
    else:
        if schedule is Schedule.LEVELS:
            logger.info("point file has no level sizes; measuring powers of 2")
        radix = 4 if schedule is Schedule.POW4 else 2
        ns = [radix**j for j in range(int(math.log(total, radix)) + 2)]
    return [n for n in ns if n <= total]


def basis_column(dim: int, ns: Sequence[int], dyadic_k: int | None) -> str:
    """Column c_N is computed from: D_star where it is exact, else D_dyadic.

    Raises:
        InputError: If a 3D point set is measured without a dyadic resolution
    """
    if dim == 1:
        return "D_star"
    if dim == 2 and (dyadic_k is None or max(ns, default=0) <= STAR_2D_LIMIT):
        return "D_star"
    if dyadic_k is None:
        raise InputError("3D point sets need --dyadic-k (no exact star discrepancy in 3D)")
    return "D_dyadic"


def _constant(n: int, value: float | None, log_power: float, log_base: float) -> float | None:
    if value is None or n < 2:
        return None
    return n * value / (math.log(n) / math.log(log_base)) ** log_power


def measure_prefixes(
    coords: np.ndarray,
    config: RunConfig,
    ns: Sequence[int],
) -> list[DiscrepancyRow]:
    """Discrepancy of each prefix ``coords[:n]``.

    Raises:
        InputError: If a 3D point set is measured without a dyadic resolution
        ResourceGuardError: If a star sweep or dyadic grid would be too large
    """
    dim = int(coords.shape[1])
    basis = basis_column(dim, ns, config.dyadic_k)
    rows: list[DiscrepancyRow] = []
    for n in ns:
        prefix = coords[:n]
        star = extreme = dyadic = None
        witness: Box | None = None
        if dim == 1:
            s = star_discrepancy_1d(prefix)
            star, witness = s.value, s.witness
            if n <= config.extreme_cap:
                extreme = extreme_discrepancy_1d(prefix).value
        elif dim == 2 and (n <= STAR_2D_LIMIT or config.dyadic_k is None):
            s = star_discrepancy_2d(prefix)
            star, witness = s.value, s.witness
        if config.dyadic_k is not None:
            d = dyadic_discrepancy(prefix, dim, config.dyadic_k)
            dyadic = d.value
            if basis == "D_dyadic":
                witness = d.witness
        value = star if basis == "D_star" else dyadic
        constant = _constant(n, value, config.log_power, config.log_base)
        rows.append(DiscrepancyRow(n, star, extreme, dyadic, constant, witness))
        logger.debug("N=%d star=%s dyadic=%s", n, star, dyadic)
    return rows


def fit_rows(rows: Sequence[DiscrepancyRow], basis: str, config: RunConfig) -> GrowthFit | None:
    """Growth fit of the basis column over the rows with N >= 2."""
    pairs = [(r.n, r.star if basis == "D_star" else r.dyadic) for r in rows if r.n >= 2]
    pairs = [(n, d) for n, d in pairs if d is not None and d > 0]
    if len(pairs) < 2:
        logger.warning("fewer than two prefixes to fit; skipping growth fit")
        return None
    ns, ds = zip(*pairs, strict=True)
    return growth_fit(ns, ds, config.log_power, config.log_base)


def _fit_lines(fit: GrowthFit, basis: str) -> dict[str, Any]:
    return {
        "growth_fit.basis": basis,
        "growth_fit.log_power": fit.log_power,
        "growth_fit.log_base": fit.log_base,
        "growth_fit.max_c": f"{fit.max_constant:.17g}",
        "growth_fit.slope": f"{fit.slope:.17g}",
    }


def write_discrepancy_csv(
    stream: TextIO,
    header: dict[str, Any],
    rows: Sequence[DiscrepancyRow],
    fit: GrowthFit | None,
    basis: str = "D_star",
) -> None:
    """Header lines, the CSV table, then the growth fit as trailing comments."""
    for key in sorted(header):
        stream.write(f"# {key}: {_header_value(header[key])}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.to_csv())
    if fit is not None:
        for key, value in _fit_lines(fit, basis).items():
            stream.write(f"# {key}: {value}\n")


@dataclass
class DiscrepancyTable:
    """A discrepancy CSV read back for ``fit``."""

    header: dict[str, str] = field(default_factory=dict)
    rows: list[dict[str, str]] = field(default_factory=list)

    def column(self, name: str) -> tuple[list[int], list[float]]:
        """(N, value) pairs where ``name`` has a value.

        Raises:
            InputError: If the column is unknown or empty
        """
        if name not in CSV_COLUMNS or name in ("N", "witness"):
            raise InputError(f"cannot fit column {name!r}")
        pairs = [(int(r["N"]), float(r[name])) for r in self.rows if r.get(name)]
        if not pairs:
            raise InputError(f"column {name} has no values")
        return [n for n, _ in pairs], [d for _, d in pairs]

    @property
    def default_column(self) -> str:
        return self.header.get("growth_fit.basis") or self.header.get("basis") or "D_star"


def read_discrepancy_csv(path: str | Path) -> DiscrepancyTable:
    """Read a CSV written by :func:`write_discrepancy_csv`.

    Raises:
        InputError: If the file is missing or has no table
    """
    p = Path(path)
    if not p.is_file():
        raise InputError(f"discrepancy file not found: {p}")
    table = DiscrepancyTable()
    body: list[str] = []
    for line in p.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            table.header[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    reader = csv.DictReader(body)
    if reader.fieldnames is None or "N" not in reader.fieldnames:
        raise InputError(f"{p}: no discrepancy table found")
    try:
        table.rows = [dict(r) for r in reader]
        for r in table.rows:
            int(r["N"])
    except (ValueError, TypeError) as e:
        raise InputError(f"{p}: malformed row: {e}") from e
    if not table.rows:
        raise InputError(f"{p}: discrepancy table is empty")
    return table


def fit_payload(fit: GrowthFit, column: str) -> dict[str, Any]:
    return {
        "column": column,
        "log_power": fit.log_power,
        "log_base": fit.log_base,
        "ns": list(fit.ns),
        "constants": list(fit.constants),
        "max_constant": fit.max_constant,
        "slope": fit.slope,
    }


def render_fit(fit: GrowthFit, column: str) -> None:
    table = Table(title=f"c_N = N {column} / (log_{fit.log_base:g} N)^{fit.log_power:g}")
    table.add_column("N", justify="right")
    table.add_column("c_N", justify="right")
    for n, c in zip(fit.ns, fit.constants, strict=True):
        table.add_row(str(n), _number(c))
    console.print(table)
    console.print(f"max c_N {_number(fit.max_constant)}, log-log slope {_number(fit.slope, 3)}")


def render_rows(rows: Sequence[DiscrepancyRow], fit: GrowthFit | None) -> None:
    table = Table(title="Discrepancy by prefix")
    for name in CSV_COLUMNS[:-1]:
        table.add_column(name, justify="right")
    for r in rows:
        table.add_row(
            str(r.n), _number(r.star), _number(r.extreme), _number(r.dyadic), _number(r.constant)
        )
    console.print(table)
    if fit is not None:
        console.print(f"max c_N {_number(fit.max_constant)}, log-log slope {_number(fit.slope, 3)}")
