"""Characteristic polynomials and polynomial zeros.

Coefficient arrays are in ascending order: ``coeffs[j]`` multiplies x^j.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, NumericalError, ResourceGuardError

logger = logging.getLogger(__name__)

MAX_ALPHABET = 64
MAX_SWEEPS = 500
RESIDUAL_TOL = 1e-9


def charpoly(matrix: ArrayLike) -> list[int]:
    """Characteristic polynomial det(x I - A) of an integer matrix.

    Faddeev-LeVerrier in exact integer arithmetic:
    M_k = A M_(k-1) + c_(n-k+1) I and c_(n-k) = -tr(A M_k) / k.

    Returns:
        Integer coefficients c_0 .. c_n with c_n = 1

    Raises:
        ResourceGuardError: If A is larger than 64x64
        DomainError: If A is not square or has non-integer entries
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"characteristic polynomial needs a square matrix, got {a.shape}")
    n = int(a.shape[0])
    if n > MAX_ALPHABET:
        raise ResourceGuardError("alphabet too large for charpoly", requested=n, limit=MAX_ALPHABET)
    if not np.all(np.equal(np.mod(a, 1), 0)):
        raise DomainError("characteristic polynomial needs integer entries")
    exact = np.array([[int(v) for v in row] for row in a], dtype=object)
    identity = np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)

    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        m = exact.dot(m) + coeffs[n - k + 1] * identity
        trace = int(np.trace(exact.dot(m)))
        if trace % k:
            raise NumericalError(f"non-integral Faddeev-LeVerrier step {k}")
        coeffs[n - k] = -trace // k
    return coeffs


def _trim(coeffs: Sequence[complex]) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.complex128)
    nonzero = np.nonzero(c)[0]
    if nonzero.size == 0:
        raise DomainError("the zero polynomial has no isolated roots")
    return c[: nonzero[-1] + 1]


def _residual_scale(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    powers = np.abs(z)[:, None] ** np.arange(c.size)[None, :]
    return powers @ np.abs(c)


def aberth_roots(coeffs: Sequence[complex], max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """All complex roots by simultaneous Aberth-Ehrlich iteration.

    Start points lie on the Cauchy-bound circle. Iteration stops once every
    correction is below 1e-14 relative; the result is accepted if each root's
    residual is below 1e-9 relative to the polynomial's scale at that point.

    Raises:
        NumericalError: If some residual stays above tolerance; ``residuals``
            holds the relative residuals
    """
    c = _trim(coeffs)
    degree = c.size - 1
    if degree == 0:
        return np.zeros(0, dtype=np.complex128)
    lead = c[-1]
    radius = 1.0 + float(np.max(np.abs(c[:-1] / lead)))
    angles = 2.0 * np.pi * np.arange(degree) / degree + 0.4
    z = radius * np.exp(1j * angles)
    dc = c[1:] * np.arange(1, c.size)

    for sweep in range(max_sweeps):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            p = np.polynomial.polynomial.polyval(z, c)
            dp = np.polynomial.polynomial.polyval(z, dc)
            ratio = np.where(dp != 0, p / dp, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulsion = (1.0 / diff).sum(axis=1) - 1.0
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= 1e-14 * np.maximum(1.0, np.abs(z))):
            logger.debug("aberth converged after %d sweeps (degree %d)", sweep + 1, degree)
            break

    with np.errstate(over="ignore", invalid="ignore"):
        value = np.abs(np.polynomial.polynomial.polyval(z, c))
        scale = _residual_scale(c, z)
        residual = np.where(scale > 0, value / np.where(scale > 0, scale, 1.0), value)
    if not np.all(residual <= RESIDUAL_TOL):
        raise NumericalError(
            f"root iteration did not converge in {max_sweeps} sweeps",
            residuals=residual.tolist(),
        )
    return z


def polynomial_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All complex roots; Aberth first, the companion-matrix eigenvalues if it stalls.

    Raises:
        DomainError: For the zero polynomial
    """
    try:
        return aberth_roots(coeffs)
    except NumericalError as e:
        logger.debug("aberth stalled (%s); using companion-matrix roots", e)
    c = _trim(coeffs)
    return np.roots(c[::-1]).astype(np.complex128)


def cluster_roots(roots: ArrayLike, tol: float = 1e-6) -> list[tuple[complex, int]]:
    """Group roots closer than ``tol`` into (mean value, multiplicity)."""
    values = np.asarray(roots, dtype=np.complex128).tolist()
    remaining = sorted(values, key=lambda r: (r.real, r.imag))
    clusters: list[tuple[complex, int]] = []
    while remaining:
        head = remaining.pop(0)
        group = [head] + [r for r in remaining if abs(r - head) <= tol]
        remaining = [r for r in remaining if abs(r - head) > tol]
        clusters.append((complex(np.mean(group)), len(group)))
    return clusters


def winding_number(values: ArrayLike) -> int:
    """Turns of a closed sampled curve around 0 (argument principle)."""
    v = np.asarray(values, dtype=np.complex128)
    if v.size < 3:
        raise DomainError("winding number needs at least 3 samples")
    increments = np.angle(np.roll(v, -1) / v)
    return int(round(float(increments.sum()) / (2.0 * math.pi)))
