"""lowdisc command line.

Usage:
    lowdisc spectrum --map doubling          # Zeros, certificates, density
    lowdisc generate --dim 2 --levels 0..4   # Write a point file
    lowdisc discrepancy points.txt           # Discrepancy CSV with growth fit
    lowdisc verify                           # Structural invariant battery
    lowdisc fit report.csv --log-power 2     # Refit a discrepancy CSV

Exit codes: 0 ok, 1 numerical failure, 2 usage or input error,
3 inconclusive certificate, 4 resource guard.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from collections.abc import Callable
from contextlib import contextmanager
from pathlib import Path
from typing import Any, TextIO, TypeVar

import click

from .config import (
    Command,
    Map2DKind,
    PointFormat,
    ReportFormat,
    RunConfig,
    Schedule,
    build_config,
    load_config_file,
)
from .discrepancy import growth_fit
from .errors import EXIT_INCONCLUSIVE, InputError, LowDiscError
from .mapfile import load_map
from .multidim import ThreeDMode, mix_matrix
from .points import generate_points, read_points, write_points
from .report import (
    EXTREME_NOTE,
    basis_column,
    fit_payload,
    fit_rows,
    measure_prefixes,
    n_schedule,
    read_discrepancy_csv,
    render_fit,
    render_rows,
    render_spectrum,
    render_verify,
    spectrum_payload,
    spectrum_verdict,
    verify_payload,
    write_discrepancy_csv,
)
from .spectral import Verdict
from .verify import run_battery

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

FORMAT_TABLE = ReportFormat.TABLE.value
FORMAT_JSON = ReportFormat.JSON.value


def handle_errors(func: F) -> F:
    """Print library errors as ``Error: ...`` and exit with their code."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except LowDiscError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper  # type: ignore[return-value]


def _resolve(ctx: click.Context, command: Command, **flags: Any) -> RunConfig:
    config_path = ctx.obj.get("config_path") if ctx.obj else None
    file_values = load_config_file(config_path) if config_path else None
    return build_config(file_values, command=command, **flags)


@contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
        return
    try:
        stream: TextIO = path.open("w", encoding="utf-8", newline="\n")
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}") from e
    with stream:
        yield stream


def _echo_json(payload: dict[str, Any]) -> None:
    click.echo(json.dumps(payload, indent=2, default=str))


# =============================================================================
# Main group
# =============================================================================


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="YAML file with run parameters (flags override it)",
)
@click.pass_context
def main(ctx: click.Context, verbose: bool, config_path: Path | None) -> None:
    """Low-discrepancy sequences from piecewise-linear expanding maps.

    Generates van der Corput type point sets in one to three dimensions,
    checks the spectral conditions behind their low discrepancy, and
    measures discrepancy exactly.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


# =============================================================================
# spectrum
# =============================================================================


@main.command()
@click.option("--map", "map_name", default=None, help="Shipped map name or map file path")
@click.option("--degree", "-K", type=int, default=None, help="Truncation degree K (default 60)")
@click.option("--orbit-depth", type=int, default=None, help="Endpoint orbit search depth")
@click.option(
    "--format",
    "-f",
    "output_format",
    type=click.Choice([FORMAT_TABLE, FORMAT_JSON]),
    default=None,
    help="Output format",
)
@click.pass_context
@handle_errors
def spectrum(
    ctx: click.Context,
    map_name: str | None,
    degree: int | None,
    orbit_depth: int | None,
    output_format: str | None,
) -> None:
    """Zeros of the Fredholm determinant and the low-discrepancy certificates.

    Exits 3 when the endpoint minor certificate is inconclusive.

    Examples:

        # Doubling map: a single simple zero at z = 1
        lowdisc spectrum --map doubling

        # A beta-transformation with non-Markov endpoints
        lowdisc spectrum --map beta-1.9 --degree 80

        # Your own map file, JSON output
        lowdisc spectrum --map mymap.yaml --format json
    """
    config = _resolve(
        ctx,
        Command.SPECTRUM,
        map=map_name,
        degree=degree,
        orbit_depth=orbit_depth,
        report_format=output_format,
    )
    fmap = load_map(config.map)
    payload = spectrum_payload(fmap, config.degree, config.orbit_depth)
    if config.report_format is ReportFormat.JSON:
        _echo_json({"config": config.header(), **payload})
    else:
        render_spectrum(payload)
    if spectrum_verdict(payload) is Verdict.INCONCLUSIVE:
        sys.exit(EXIT_INCONCLUSIVE)


# =============================================================================
# generate
# =============================================================================


@main.command()
@click.option("--map", "map_name", default=None, help="Map for 1D sequences")
@click.option("--dim", type=click.IntRange(1, 3), default=None, help="Dimension 1, 2 or 3")
@click.option("--base", default=None, help='Base point "x[,y[,z]]"; expressions allowed')
@click.option("--levels", default=None, help="Word levels A..B")
@click.option("--n", "count", type=int, default=None, help="First N points instead of levels")
@click.option("--precision", "-P", type=int, default=None, help="Binary digits per coordinate")
@click.option(
    "--format",
    "-f",
    "point_format",
    type=click.Choice([f.value for f in PointFormat]),
    default=None,
    help="Point layout",
)
@click.option("--out", "-o", type=click.Path(path_type=Path), default=None, help="Output file")
@click.option(
    "--three-d-mode",
    type=click.Choice([m.value for m in ThreeDMode]),
    default=None,
    help="3D level maps directly, or the first map iterated",
)
@click.option(
    "--map2d",
    type=click.Choice([k.value for k in Map2DKind]),
    default=None,
    help="2D digit-shuffling map or the plain product map",
)
@click.option("--word-budget", type=int, default=None, help="Most points one level may hold")
@click.pass_context
@handle_errors
def generate(
    ctx: click.Context,
    map_name: str | None,
    dim: int | None,
    base: str | None,
    levels: str | None,
    count: int | None,
    precision: int | None,
    point_format: str | None,
    out: Path | None,
    three_d_mode: str | None,
    map2d: str | None,
    word_budget: int | None,
) -> None:
    """Generate a point sequence and write it with a self-describing header.

    Examples:

        # Classic van der Corput sequence, first 7 points
        lowdisc generate --map doubling --base 1/2 --n 7

        # 2D levels 0..4 (341 points) as CSV
        lowdisc generate --dim 2 --levels 0..4 --format csv --out pts2d.csv

        # 3D levels 0..3 (585 points), raw binary digits
        lowdisc generate --dim 3 --levels 0..3 --format bits
    """
    config = _resolve(
        ctx,
        Command.GENERATE,
        map=map_name,
        dim=dim,
        base=base,
        levels=levels,
        n=count,
        precision=precision,
        point_format=point_format,
        out=out,
        three_d_mode=three_d_mode,
        map2d=map2d,
        word_budget=word_budget,
    )
    points = generate_points(config)
    with _output(config.out) as stream:
        write_points(points, stream, config.point_format)
    if config.out is not None:
        logger.info("wrote %d points to %s", len(points.records), config.out)


# =============================================================================
# discrepancy
# =============================================================================


@main.command()
@click.argument("points_file", type=click.Path(path_type=Path))
@click.option("--dyadic-k", type=int, default=None, help="Dyadic grid resolution 2^-k")
@click.option("--no-dyadic", is_flag=True, help="Skip the dyadic-box discrepancy")
@click.option("--log-power", type=float, default=None, help="Power p in (log N)^p / N")
@click.option("--log-base", type=float, default=None, help="Logarithm base for c_N")
@click.option(
    "--schedule",
    type=click.Choice([s.value for s in Schedule]),
    default=None,
    help="Prefix lengths: whole levels, powers of 2 or powers of 4",
)
@click.option("--extreme-cap", type=int, default=None, help="Largest N for 1D extreme D_N")
@click.option("--out", "-o", type=click.Path(path_type=Path), default=None, help="CSV file")
@click.pass_context
@handle_errors
def discrepancy(
    ctx: click.Context,
    points_file: Path,
    dyadic_k: int | None,
    no_dyadic: bool,
    log_power: float | None,
    log_base: float | None,
    schedule: str | None,
    extreme_cap: int | None,
    out: Path | None,
) -> None:
    """Measure discrepancy of prefixes of a point file and fit the growth.

    Writes CSV rows N, D_star, D_extreme, D_dyadic, c_N, witness with
    c_N = N D_N / (log N)^p, followed by the growth fit as comment lines.

    Examples:

        # Classic van der Corput, N = 2^k
        lowdisc discrepancy vdc.txt --schedule pow2 --log-power 1

        # 2D construction at full levels, p = 2
        lowdisc discrepancy pts2d.csv --log-power 2 --out d2.csv
    """
    loaded = read_points(points_file)
    config = _resolve(
        ctx,
        Command.DISCREPANCY,
        dim=loaded.dim,
        dyadic_k=dyadic_k,
        log_power=log_power,
        log_base=log_base,
        schedule=schedule,
        extreme_cap=extreme_cap,
        out=out,
    )
    if no_dyadic:
        config = config.model_copy(update={"dyadic_k": None})
    ns = n_schedule(len(loaded.coords), config.schedule, loaded.level_sizes)
    basis = basis_column(loaded.dim, ns, config.dyadic_k)
    rows = measure_prefixes(loaded.coords, config, ns)
    fit = fit_rows(rows, basis, config)

    header: dict[str, Any] = {f"points.{k}": v for k, v in loaded.header.items()}
    header.update(config.header())
    header["points_file"] = points_file.name
    header["basis"] = basis
    if loaded.dim > 1:
        header["note"] = EXTREME_NOTE
    with _output(config.out) as stream:
        write_discrepancy_csv(stream, header, rows, fit, basis)
    if config.out is not None:
        render_rows(rows, fit)


# =============================================================================
# verify
# =============================================================================


def _parse_cell(value: str | None) -> tuple[int, int] | None:
    if value is None:
        return None
    try:
        row, col = (int(v) for v in value.split(","))
    except ValueError as e:
        raise InputError(f"expected ROW,COL, got {value!r}") from e
    return row, col


@main.command()
@click.option("--degree", "-K", type=int, default=None, help="Degree for the zeta identity")
@click.option("--rect-n", type=int, default=None, help="Largest n for 2D rectangle tests")
@click.option(
    "--format",
    "-f",
    "output_format",
    type=click.Choice([FORMAT_TABLE, FORMAT_JSON]),
    default=None,
    help="Output format",
)
@click.option("--flip-mix-bit", default=None, hidden=True, help="ROW,COL of M to complement")
@click.pass_context
@handle_errors
def verify(
    ctx: click.Context,
    degree: int | None,
    rect_n: int | None,
    output_format: str | None,
    flip_mix_bit: str | None,
) -> None:
    """Run the structural invariant battery; exits 0 only if every check passes.

    Examples:

        # Full battery
        lowdisc verify

        # Zeta identity at a low truncation degree
        lowdisc verify --degree 2

        # Machine-readable results
        lowdisc verify --format json
    """
    config = _resolve(
        ctx,
        Command.VERIFY,
        degree=degree,
        rect_n=rect_n,
        report_format=output_format,
    )
    mix = mix_matrix()
    cell = _parse_cell(flip_mix_bit)
    if cell is not None:
        mix = mix.with_flipped(*cell)
    results = run_battery(config.degree, config.rect_n, mix)
    if config.report_format is ReportFormat.JSON:
        _echo_json(verify_payload(results))
    else:
        render_verify(results)
    if not all(r.passed for r in results):
        sys.exit(1)


# =============================================================================
# fit
# =============================================================================


@main.command()
@click.argument("csv_file", type=click.Path(path_type=Path))
@click.option("--column", default=None, help="Column to fit (default: the file's basis)")
@click.option("--log-power", type=float, default=None, help="Power p in (log N)^p / N")
@click.option("--log-base", type=float, default=None, help="Logarithm base for c_N")
@click.option(
    "--format",
    "-f",
    "output_format",
    type=click.Choice([FORMAT_TABLE, FORMAT_JSON]),
    default=None,
    help="Output format",
)
@click.pass_context
@handle_errors
def fit(
    ctx: click.Context,
    csv_file: Path,
    column: str | None,
    log_power: float | None,
    log_base: float | None,
    output_format: str | None,
) -> None:
    """Refit the growth of a discrepancy CSV with another log power.

    Examples:

        # Is the 2D star discrepancy O((log N)^2 / N)?
        lowdisc fit d2.csv --log-power 2

        # Fit the dyadic column instead
        lowdisc fit d2.csv --column D_dyadic --format json
    """
    table = read_discrepancy_csv(csv_file)
    config = _resolve(
        ctx,
        Command.FIT,
        log_power=log_power if log_power is not None else table.header.get("log_power"),
        log_base=log_base if log_base is not None else table.header.get("log_base"),
        report_format=output_format,
    )
    name = column or table.default_column
    ns, ds = table.column(name)
    pairs = [(n, d) for n, d in zip(ns, ds, strict=True) if n >= 2 and d > 0]
    if len(pairs) < 2:
        raise InputError(f"column {name} needs at least two rows with N >= 2 and D > 0")
    result = growth_fit(
        [n for n, _ in pairs], [d for _, d in pairs], config.log_power, config.log_base
    )
    if config.report_format is ReportFormat.JSON:
        _echo_json(fit_payload(result, name))
    else:
        render_fit(result, name)


if __name__ == "__main__":
    main()
