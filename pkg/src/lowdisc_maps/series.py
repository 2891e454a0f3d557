"""Truncated power series in one variable z.

All arithmetic is carried out modulo z^(K+1), where K is the truncation
degree of the series. Mixing degrees truncates to the smaller one.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-12
COFACTOR_LIMIT = 8


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients c_0 .. c_K of a series truncated at degree K."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise DomainError("a power series needs at least the constant coefficient")
        if not np.isfinite(arr).all():
            raise NumericalError("power series has non-finite coefficients")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, degree: int) -> PowerSeries:
        return cls(np.zeros(degree + 1))

    @classmethod
    def constant(cls, value: float, degree: int) -> PowerSeries:
        c = np.zeros(degree + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def monomial(cls, power: int, coeff: float, degree: int) -> PowerSeries:
        c = np.zeros(degree + 1)
        if power <= degree:
            c[power] = coeff
        return cls(c)

    @classmethod
    def variable(cls, degree: int) -> PowerSeries:
        """The series z."""
        return cls.monomial(1, 1.0, degree)

    @classmethod
    def from_list(cls, values: Sequence[float], degree: int | None = None) -> PowerSeries:
        k = len(values) - 1 if degree is None else degree
        c = np.zeros(k + 1)
        n = min(len(values), k + 1)
        c[:n] = np.asarray(values, dtype=np.float64)[:n]
        return cls(c)

    # -- inspection -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return int(self.coeffs.size - 1)

    def __getitem__(self, n: int) -> float:
        return float(self.coeffs[n]) if 0 <= n <= self.degree else 0.0

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def truncate(self, degree: int) -> PowerSeries:
        if degree >= self.degree:
            return PowerSeries(np.concatenate([self.coeffs, np.zeros(degree - self.degree)]))
        return PowerSeries(self.coeffs[: degree + 1])

    def __call__(self, z: complex | ArrayLike) -> np.ndarray | complex:
        """Evaluate the truncated polynomial at z (scalar or array)."""
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def tolist(self) -> list[float]:
        return [float(v) for v in self.coeffs]

    # -- arithmetic -----------------------------------------------------------

    def _align(self, other: PowerSeries) -> tuple[np.ndarray, np.ndarray, int]:
        k = min(self.degree, other.degree)
        return self.coeffs[: k + 1], other.coeffs[: k + 1], k

    def __add__(self, other: PowerSeries | float) -> PowerSeries:
        if isinstance(other, PowerSeries):
            a, b, _ = self._align(other)
            return PowerSeries(a + b)
        c = self.coeffs.copy()
        c[0] += other
        return PowerSeries(c)

    __radd__ = __add__

    def __neg__(self) -> PowerSeries:
        return PowerSeries(-self.coeffs)

    def __sub__(self, other: PowerSeries | float) -> PowerSeries:
        return self + (-other)

    def __rsub__(self, other: float) -> PowerSeries:
        return (-self) + other

    def __mul__(self, other: PowerSeries | float) -> PowerSeries:
        if isinstance(other, PowerSeries):
            a, b, k = self._align(other)
            return PowerSeries(np.convolve(a, b)[: k + 1])
        return PowerSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other: PowerSeries | float) -> PowerSeries:
        if isinstance(other, PowerSeries):
            return self * other.reciprocal()
        if other == 0:
            raise DomainError("division of a power series by zero")
        return PowerSeries(self.coeffs / float(other))

    def reciprocal(self) -> PowerSeries:
        """1/f for f with nonzero constant term."""
        f = self.coeffs
        if abs(f[0]) <= PIVOT_TOL:
            raise DomainError("reciprocal needs a nonzero constant term")
        g = np.zeros_like(f)
        g[0] = 1.0 / f[0]
        for n in range(1, f.size):
            g[n] = -np.dot(f[1 : n + 1], g[n - 1 :: -1][:n]) / f[0]
        return PowerSeries(g)

    def derivative(self) -> PowerSeries:
        """f' at the same truncation degree (top coefficient is 0)."""
        d = np.zeros_like(self.coeffs)
        n = np.arange(1, self.coeffs.size)
        d[:-1] = self.coeffs[1:] * n
        return PowerSeries(d)

    def exp(self) -> PowerSeries:
        """exp(f) via n g_n = sum_k k f_k g_(n-k)."""
        f = self.coeffs
        g = np.zeros_like(f)
        g[0] = math.exp(f[0])
        k = np.arange(f.size, dtype=np.float64)
        for n in range(1, f.size):
            g[n] = np.dot(k[1 : n + 1] * f[1 : n + 1], g[n - 1 :: -1][:n]) / n
        return PowerSeries(g)

    def log(self) -> PowerSeries:
        """log(f) for f with constant term 1."""
        f = self.coeffs
        if abs(f[0] - 1.0) > 1e-12:
            raise DomainError(f"log needs constant term 1, got {f[0]}")
        h = np.zeros_like(f)
        k = np.arange(f.size, dtype=np.float64)
        for n in range(1, f.size):
            acc = np.dot(k[1:n] * h[1:n], f[n - 1 : 0 : -1]) if n > 1 else 0.0
            h[n] = f[n] - acc / n
        return PowerSeries(h)

    def __repr__(self) -> str:
        shown = ", ".join(f"{v:.6g}" for v in self.coeffs[:6])
        more = ", ..." if self.degree > 5 else ""
        return f"PowerSeries([{shown}{more}], K={self.degree})"


SeriesMatrix = list[list[PowerSeries]]


def identity_minus(matrix: Sequence[Sequence[PowerSeries]]) -> SeriesMatrix:
    """I - Phi for a square matrix of series."""
    return [
        [(1.0 if i == j else 0.0) - entry for j, entry in enumerate(row)]
        for i, row in enumerate(matrix)
    ]


def _cofactor_det(m: SeriesMatrix, degree: int) -> PowerSeries:
    n = len(m)
    if n == 0:
        return PowerSeries.constant(1.0, degree)
    if n == 1:
        return m[0][0].truncate(degree)
    total = PowerSeries.zero(degree)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor, degree)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_series(matrix: Sequence[Sequence[PowerSeries]], degree: int) -> PowerSeries:
    """Determinant of a square matrix of series, modulo z^(degree+1).

    Gaussian elimination divides by pivots with a nonzero constant term. When
    no such pivot remains, the leftover block (at most 8x8) is expanded by
    cofactors.

    Raises:
        DomainError: If the matrix is not square
        NumericalError: If elimination stalls on a block larger than 8x8
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DomainError("determinant needs a square matrix of series")
    m: SeriesMatrix = [[entry.truncate(degree) for entry in row] for row in matrix]
    det = PowerSeries.constant(1.0, degree)
    for j in range(n):
        candidates = [(abs(m[i][j][0]), i) for i in range(j, n)]
        best, pivot = max(candidates)
        if best <= PIVOT_TOL:
            rest = [row[j:] for row in m[j:]]
            if len(rest) > COFACTOR_LIMIT:
                raise NumericalError(
                    f"no invertible pivot in column {j} and {len(rest)}x{len(rest)} block "
                    f"exceeds cofactor limit {COFACTOR_LIMIT}"
                )
            logger.debug("det_series: cofactor fallback on %dx%d block", len(rest), len(rest))
            return det * _cofactor_det(rest, degree)
        if pivot != j:
            m[j], m[pivot] = m[pivot], m[j]
            det = -det
        inv = m[j][j].reciprocal()
        det = det * m[j][j]
        for i in range(j + 1, n):
            factor = m[i][j] * inv
            if factor.max_abs() == 0.0:
                continue
            for k in range(j + 1, n):
                m[i][k] = m[i][k] - factor * m[j][k]
    return det
