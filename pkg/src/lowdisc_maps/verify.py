"""Structural invariant battery behind ``lowdisc verify``.

Each check returns a :class:`CheckResult`; the run passes only if all do.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .bits import Gf2Matrix
from .mapfile import load_map
from .multidim import (
    MIX_CHECKSUM,
    Point2D,
    map2d_forward,
    map2d_level,
    minor_battery,
    mix_checksum,
    mix_matrix,
    rect_image_test_2d,
    rect_image_test_3d,
    span_test_2d,
)
from .spectral import signed_markov_agreement, zeta_identity_check

logger = logging.getLogger(__name__)

IDENTITY_MAPS = ("doubling", "tent", "golden-mean", "three-shift")
IDENTITY_TOL = 1e-9
SPAN_MAX = 64
RECT_3D_MAX_K = 2


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def check_mix_checksum(mix: Gf2Matrix) -> CheckResult:
    digest = mix_checksum(mix)
    return CheckResult("mixing matrix checksum", digest == MIX_CHECKSUM, digest[:16])


def check_minors(mix: Gf2Matrix) -> CheckResult:
    results = minor_battery(mix)
    failed = [r for r in results if not r.ok]
    detail = f"{len(results) - len(failed)}/{len(results)} nonsingular"
    if failed:
        first = failed[0]
        detail += f"; first failure n={first.n} m={first.m} {''.join(first.perm)} f{first.family}"
    return CheckResult("3D minor determinants", not failed, detail)


def check_span() -> CheckResult:
    bad = [n for n in range(1, SPAN_MAX + 1) if not span_test_2d(n)]
    detail = f"n=1..{SPAN_MAX}" + (f", fails {bad}" if bad else "")
    return CheckResult("2D shift span", not bad, detail)


def check_rect_2d(max_n: int) -> CheckResult:
    total, failed = 0, []
    for n in range(1, max_n + 1):
        for m in range(n + 1):
            grid_k = n + max(2, m)
            for ix in range(1 << (n - m)):
                for iy in range(1 << (n + m)):
                    total += 1
                    alpha, beta = Fraction(ix, 1 << (n - m)), Fraction(iy, 1 << (n + m))
                    if not rect_image_test_2d(n, m, alpha, beta, grid_k):
                        failed.append((n, m, ix, iy))
    detail = f"{total - len(failed)}/{total} rectangles, n<={max_n}"
    return CheckResult("2D rectangle images", not failed, detail)


def check_rect_3d(mix: Gf2Matrix, max_k: int = RECT_3D_MAX_K) -> CheckResult:
    total, failed = 0, 0
    for k in range(1, max_k + 1):
        for n, m in itertools.product(range(k + 1), repeat=2):
            if n + m > k:
                continue
            for shape in (1, 2):
                exps = (k + n + m, k - n, k - m) if shape == 1 else (k + n, k + m, k - n - m)
                grid_res = max(max(exps), k + 1)
                for corner in itertools.product(*(range(1 << e) for e in exps)):
                    total += 1
                    corners = [Fraction(c, 1 << e) for c, e in zip(corner, exps, strict=True)]
                    if not rect_image_test_3d(k, n, m, corners, grid_res, shape, mix):
                        failed += 1
    return CheckResult("3D box images", failed == 0, f"{total - failed}/{total} boxes, k<={max_k}")


def check_level_round_trip(max_n: int = 3) -> CheckResult:
    base = Point2D.from_unit(0.0, 0.0)
    for n in range(max_n + 1):
        level = map2d_level(base, n)
        if len({(p.x.digits, p.y.digits) for p in level}) != len(level):
            return CheckResult("2D level round trip", False, f"duplicate points at level {n}")
        for p in level:
            q = p
            for _ in range(n):
                q = map2d_forward(q)
            keep = q.reliable
            if q.x.prefix(keep) != base.x.prefix(keep) or q.y.prefix(keep) != base.y.prefix(keep):
                return CheckResult("2D level round trip", False, f"level {n} misses the base")
    return CheckResult("2D level round trip", True, f"levels 0..{max_n}")


def check_zeta_identity(degree: int) -> list[CheckResult]:
    k = min(degree, 12)
    results = []
    for name in IDENTITY_MAPS:
        fmap = load_map(name)
        residual = zeta_identity_check(fmap, k)
        agreement = signed_markov_agreement(fmap, k)
        results.append(
            CheckResult(
                f"zeta identity ({name})",
                residual < IDENTITY_TOL and agreement < IDENTITY_TOL,
                f"K={k} residual {residual:.1e}, signed/Markov {agreement:.1e}",
            )
        )
    return results


def run_battery(
    degree: int = 12,
    rect_n: int = 3,
    mix: Gf2Matrix | None = None,
) -> list[CheckResult]:
    """Run every structural check; ``mix`` substitutes the stored matrix."""
    mm = mix_matrix() if mix is None else mix
    checks: list[Callable[[], CheckResult | list[CheckResult]]] = [
        lambda: check_mix_checksum(mm),
        lambda: check_minors(mm),
        check_span,
        lambda: check_rect_2d(rect_n),
        lambda: check_rect_3d(mm),
        check_level_round_trip,
        lambda: check_zeta_identity(degree),
    ]
    results: list[CheckResult] = []
    for check in checks:
        outcome = check()
        results.extend(outcome if isinstance(outcome, list) else [outcome])
    for r in results:
        logger.debug("%s: %s (%s)", r.name, "ok" if r.passed else "FAILED", r.detail)
    return results
