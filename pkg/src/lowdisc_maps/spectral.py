"""Transfer-operator spectrum, Fredholm matrices and zeta functions.

For a Markov map with transition matrix A the transfer operator acts on
cell-wise constant densities as c -> A^T c / beta, the Fredholm matrix is
z A / beta, and det(I - Phi(z)) = 1 / zeta(z).

For arbitrary constant-slope maps the Fredholm matrix is built on one-sided
cell endpoints. Write f_p for the step function of a one-sided point p:

    f_(v,+)(x) = +1/2 if x < v else -1/2
    f_(v,-)(x) = +1/2 if x >= v else -1/2

so that 1_[l, r) = f_(r,+) + f_(l,-). One transfer step sends f_p to
(f_theta(p) + sum_e f_p(e) f_theta(e)) / beta, summed over signed endpoints e.
Following the orbit of each endpoint image until it returns to an endpoint
image gives a finite renewal system whose matrix is the signed Fredholm
matrix. A one-sided point that coincides with the point it is evaluated at
counts as -1/2.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DomainError,
    ErgodicDecompositionError,
    NumericalError,
    UnsupportedMapError,
)
from .interval_maps import (
    DEFAULT_ORBIT_DEPTH,
    PLMap,
    Side,
    SidedPoint,
    TransitionMatrix,
    endpoint_orbits,
    expansion,
    markov_structure,
    point_of_wx,
    sided_compare,
    sided_image,
    signed_endpoints,
    words_of_length,
)
from .roots import charpoly, cluster_roots, polynomial_roots, winding_number
from .series import PowerSeries, identity_minus
from .series import det_series as _series_det

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = 60
ROOT_TOL = 1e-9
SIMPLE_TOL = 1e-6
CLUSTER_TOL = 1e-6
CONTOUR_SAMPLES = 4096
CONTOUR_FRACTION = 0.95
NOISE_EPS = float(np.finfo(np.float64).eps)


def _require_markov(fmap: PLMap) -> TransitionMatrix:
    structure = markov_structure(fmap)
    if structure.transition is None:
        raise UnsupportedMapError(
            f"map {fmap.name} is not Markov ({len(structure.non_markov_endpoints)} "
            "non-Markov endpoints); use the signed Fredholm route"
        )
    return structure.transition


# =============================================================================
# Transfer operator on cell-wise constant functions
# =============================================================================


@dataclass(frozen=True)
class DensityFn:
    """Cell-wise constant function: value ``coeffs[a]`` on cell a."""

    coeffs: tuple[float, ...]
    cells: tuple[tuple[float, float], ...]

    def __call__(self, x: float) -> float:
        for (lo, hi), c in zip(self.cells, self.coeffs, strict=True):
            if lo <= x < hi:
                return c
        return self.coeffs[-1] if x == 1.0 else 0.0

    def integral(self) -> float:
        pairs = zip(self.cells, self.coeffs, strict=True)
        return float(sum(c * (hi - lo) for (lo, hi), c in pairs))


def _cells(fmap: PLMap) -> tuple[tuple[float, float], ...]:
    return tuple((b.left, b.right) for b in fmap.branches)


def pf_apply(fmap: PLMap, coeffs: Sequence[float], n: int = 1) -> np.ndarray:
    """Apply the transfer operator n times to a cell-wise constant function.

    Raises:
        UnsupportedMapError: If the map is not Markov
        DomainError: If the coefficient vector has the wrong length or n < 0
    """
    transition = _require_markov(fmap)
    c = np.asarray(coeffs, dtype=np.float64)
    if c.shape != (fmap.size,):
        raise DomainError(f"expected {fmap.size} cell coefficients, got {c.shape}")
    if n < 0:
        raise DomainError(f"iteration count must be >= 0, got {n}")
    step = transition.matrix.T.astype(np.float64) / fmap.beta
    for _ in range(n):
        c = step @ c
    return c


def _eigenspace_one(fmap: PLMap, transition: TransitionMatrix) -> np.ndarray:
    op = transition.matrix.T.astype(np.float64) / fmap.beta - np.eye(fmap.size)
    _, s, vh = np.linalg.svd(op)
    return vh[s <= ROOT_TOL]


def ergodic_components(fmap: PLMap) -> int:
    """Dimension of the eigenvalue-1 eigenspace of the transfer operator."""
    return int(_eigenspace_one(fmap, _require_markov(fmap)).shape[0])


def invariant_density(fmap: PLMap) -> DensityFn:
    """Normalized invariant density of a Markov map.

    Raises:
        ErgodicDecompositionError: If the eigenvalue-1 eigenspace is not
            one-dimensional; ``components`` holds its dimension
    """
    transition = _require_markov(fmap)
    basis = _eigenspace_one(fmap, transition)
    if basis.shape[0] != 1:
        raise ErgodicDecompositionError(int(basis.shape[0]))
    v = basis[0]
    if v.sum() < 0:
        v = -v
    v = np.where(np.abs(v) < 1e-14, 0.0, v)
    cells = _cells(fmap)
    widths = np.array([hi - lo for lo, hi in cells])
    v = v / float(v @ widths)
    return DensityFn(tuple(float(c) for c in v), cells)


# =============================================================================
# Fredholm matrices
# =============================================================================


class FredholmKind(str, Enum):
    MARKOV = "markov"
    SIGNED = "signed"


@dataclass(frozen=True)
class SignedOrbit:
    """Orbit of a one-sided point until it meets an endpoint image.

    Attributes:
        points: p_0, p_1, ... (truncated at the series degree when no landing)
        landing: First index k (>= ``first``) with p_k an endpoint image, or None
        target: Index of the canonical endpoint whose image is p_landing
    """

    points: tuple[SidedPoint, ...]
    landing: int | None
    target: int | None


@dataclass(frozen=True)
class FredholmSeries:
    """Square matrix of power series Phi(z).

    Attributes:
        entries: Row-major series entries
        beta: Slope magnitude of the map
        kind: ``markov`` (cell-indexed) or ``signed`` (endpoint-indexed)
        labels: Row/column labels
        degree: Truncation degree K
        states: Signed endpoints (signed kind only)
        orbits: Row orbits (signed kind only)
        ties: Number of one-sided coincidences resolved as -1/2
    """

    entries: tuple[tuple[PowerSeries, ...], ...]
    beta: float
    kind: FredholmKind
    labels: tuple[str, ...]
    degree: int
    states: tuple[SidedPoint, ...] = ()
    orbits: tuple[SignedOrbit, ...] = ()
    ties: int = 0
    fmap: PLMap | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    def det(self) -> PowerSeries:
        return det_series(self, self.degree)

    def minor(self, indices: Sequence[int]) -> FredholmSeries:
        idx = list(indices)
        return FredholmSeries(
            tuple(tuple(self.entries[i][j] for j in idx) for i in idx),
            self.beta,
            self.kind,
            tuple(self.labels[i] for i in idx),
            self.degree,
            tuple(self.states[i] for i in idx) if self.states else (),
            tuple(self.orbits[i] for i in idx) if self.orbits else (),
            self.ties,
            self.fmap,
        )

    def coefficient_matrix(self, n: int) -> np.ndarray:
        return np.array([[e[n] for e in row] for row in self.entries])

    def chi(self, x: float) -> list[PowerSeries]:
        """chi_e(z, x) = sum over n < landing of (z/beta)^n f_(p_n)(x)."""
        if self.kind is not FredholmKind.SIGNED:
            raise DomainError("chi is defined for signed Fredholm matrices only")
        return [_chi_series(orbit, x, self.beta, self.degree, 0) for orbit in self.orbits]


def fredholm_markov(fmap: PLMap, degree: int = DEFAULT_DEGREE) -> FredholmSeries:
    """Phi(z)[a, b] = z A[a, b] / beta."""
    transition = _require_markov(fmap)
    entries = tuple(
        tuple(
            PowerSeries.monomial(1, transition.matrix[a, b] / fmap.beta, degree)
            for b in fmap.alphabet
        )
        for a in fmap.alphabet
    )
    labels = tuple(str(a) for a in fmap.alphabet)
    return FredholmSeries(entries, fmap.beta, FredholmKind.MARKOV, labels, degree, fmap=fmap)


def det_series(phi: FredholmSeries, degree: int | None = None) -> PowerSeries:
    """det(I - Phi(z)) modulo z^(degree+1)."""
    k = phi.degree if degree is None else degree
    return _series_det(identity_minus([list(row) for row in phi.entries]), k)


def step_value(p: SidedPoint, q: SidedPoint) -> float:
    """f_p evaluated at the one-sided point q; a coincidence counts as -1/2."""
    order = sided_compare(q, p)
    if p.side is Side.PLUS:
        return 0.5 if order < 0 else -0.5
    return 0.5 if order > 0 else -0.5


def step_at(p: SidedPoint, x: float) -> float:
    """f_p evaluated at an ordinary point x."""
    if p.side is Side.PLUS:
        return 0.5 if x < p.value else -0.5
    return 0.5 if x >= p.value else -0.5


def _landing_index(point: SidedPoint, images: Sequence[SidedPoint]) -> int | None:
    for i, q in enumerate(images):
        if sided_compare(point, q) == 0:
            return i
    return None


def _follow(
    fmap: PLMap,
    start: SidedPoint,
    images: Sequence[SidedPoint],
    degree: int,
    first: int,
) -> SignedOrbit:
    points = [start]
    k = 0
    while True:
        if k >= first:
            target = _landing_index(points[k], images)
            if target is not None:
                return SignedOrbit(tuple(points), k, target)
        if k >= degree:
            return SignedOrbit(tuple(points), None, None)
        points.append(sided_image(fmap, points[k]))
        k += 1


def _chi_series(orbit: SignedOrbit, x: float, beta: float, degree: int, offset: int) -> PowerSeries:
    stop = orbit.landing if orbit.landing is not None else degree + 1
    c = np.zeros(degree + 1)
    for n in range(offset, min(stop, degree + 1)):
        c[n] = beta ** (-n) * step_at(orbit.points[n], x)
    return PowerSeries(c)


def _row_series(
    orbit: SignedOrbit,
    states: Sequence[SidedPoint],
    beta: float,
    degree: int,
) -> tuple[list[np.ndarray], int]:
    """Coefficients of sum_k (z/beta)^k f_(p_(k-1))(e') plus the landing delta."""
    rows = [np.zeros(degree + 1) for _ in states]
    ties = 0
    last = orbit.landing if orbit.landing is not None else degree
    for k in range(1, min(last, degree) + 1):
        p = orbit.points[k - 1]
        weight = beta ** (-k)
        for j, e in enumerate(states):
            if sided_compare(p, e) == 0:
                ties += 1
            rows[j][k] += weight * step_value(p, e)
    if orbit.landing is not None and orbit.target is not None and orbit.landing <= degree:
        rows[orbit.target][orbit.landing] += beta ** (-orbit.landing)
    return rows, ties


def signed_fredholm(fmap: PLMap, degree: int = DEFAULT_DEGREE) -> FredholmSeries:
    """Fredholm matrix on the 2|A| one-sided cell endpoints.

    Row e follows p_0 = theta(e), p_1, ... until the first k >= 1 with p_k equal
    to some endpoint image theta(e'); the earliest such e' in state order is the
    renewal target. Orbits that never return are truncated at ``degree``.

    Raises:
        NumericalError: If an orbit leaves [0, 1]
    """
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    states = signed_endpoints(fmap)
    images = [sided_image(fmap, e) for e in states]
    orbits: list[SignedOrbit] = []
    entries: list[tuple[PowerSeries, ...]] = []
    ties = 0
    for image in images:
        orbit = _follow(fmap, image, images, degree, first=1)
        rows, row_ties = _row_series(orbit, states, fmap.beta, degree)
        ties += row_ties
        orbits.append(orbit)
        entries.append(tuple(PowerSeries(r) for r in rows))
    if ties:
        logger.debug("signed Fredholm for %s: %d one-sided coincidences", fmap.name, ties)
    labels = tuple(f"{i // 2}{e.side.value}" for i, e in enumerate(states))
    return FredholmSeries(
        tuple(entries),
        fmap.beta,
        FredholmKind.SIGNED,
        labels,
        degree,
        states=states,
        orbits=tuple(orbits),
        ties=ties,
        fmap=fmap,
    )


def truncation_bound(beta: float, degree: int) -> float:
    """sum_(n > K) beta^-n = beta^-K / (beta - 1)."""
    return beta ** (-degree) / (beta - 1.0)


# =============================================================================
# Zeta functions
# =============================================================================


class Counting(str, Enum):
    SYMBOLIC = "symbolic"
    GEOMETRIC = "geometric"


def _symbolic_log_coeffs(transition: TransitionMatrix, beta: float, degree: int) -> np.ndarray:
    scaled = transition.matrix.astype(np.float64) / beta
    power = np.eye(transition.size)
    c = np.zeros(degree + 1)
    for n in range(1, degree + 1):
        power = power @ scaled
        c[n] = np.trace(power) / n
    return c


def _affine_fixed_point(fmap: PLMap, symbols: Sequence[int]) -> float | None:
    slope, offset = 1.0, 0.0
    for a in symbols:
        b = fmap.branches[a]
        s = b.sign * b.beta
        shift = b.image_left - b.beta * b.left if b.increasing else b.image_right + b.beta * b.left
        slope, offset = s * slope, s * offset + shift
    if slope == 1.0:
        return None
    return offset / (1.0 - slope)


def periodic_point_count(fmap: PLMap, n: int) -> int:
    """Number of points y in [0, 1) with F^n(y) = y."""
    count = 0
    for w in words_of_length(fmap, n):
        y = _affine_fixed_point(fmap, w.symbols)
        if y is None:
            continue
        y = fmap.snap(y)
        if 0.0 <= y < 1.0 and expansion(fmap, y, n) == w:
            count += 1
    return count


def _geometric_log_coeffs(fmap: PLMap, degree: int) -> np.ndarray:
    c = np.zeros(degree + 1)
    for n in range(1, degree + 1):
        c[n] = periodic_point_count(fmap, n) * fmap.beta ** (-n) / n
    return c


def _zeta(fmap: PLMap, degree: int, counting: Counting) -> PowerSeries:
    if counting is Counting.GEOMETRIC:
        return PowerSeries(_geometric_log_coeffs(fmap, degree)).exp()
    transition = _require_markov(fmap)
    return PowerSeries(_symbolic_log_coeffs(transition, fmap.beta, degree)).exp()


def zeta_series(
    fmap: PLMap,
    degree: int = DEFAULT_DEGREE,
    counting: Counting | str = Counting.SYMBOLIC,
) -> PowerSeries:
    """zeta(z) = exp(sum_n z^n / n * sum_(F^n p = p) |(F^n)'(p)|^-1).

    ``symbolic`` counting uses trace(A^n) periodic words (Markov maps only);
    ``geometric`` counts actual fixed points of F^n in [0, 1).

    Raises:
        DomainError: If degree < 1
    """
    if degree < 1:
        raise DomainError(f"zeta series needs degree >= 1, got {degree}")
    return _zeta(fmap, degree, Counting(counting))


def zeta_identity_check(fmap: PLMap, degree: int = 12) -> float:
    """Max |coefficient| of det(I - Phi(z)) * zeta(z) - 1 up to ``degree``."""
    if degree == 0:
        return 0.0
    det = det_series(fredholm_markov(fmap, degree))
    product = det * _zeta(fmap, degree, Counting.SYMBOLIC) - 1.0
    return product.max_abs()


def signed_markov_agreement(fmap: PLMap, degree: int = 12) -> float:
    """Max coefficient difference between the signed and Markov determinants."""
    signed = PowerSeries(det_coefficients(signed_fredholm(fmap, degree))[0])
    markov = det_series(fredholm_markov(fmap, degree))
    return (signed - markov).max_abs()


@dataclass(frozen=True)
class ZetaBound:
    coefficients: tuple[float, ...]
    sup: float
    trend: float


def zeta_of_map(fmap: PLMap, degree: int) -> PowerSeries:
    """zeta by the Markov route when available, else 1 / det(I - Psi)."""
    if markov_structure(fmap).is_markov:
        return _zeta(fmap, max(degree, 1), Counting.SYMBOLIC).truncate(degree)
    return PowerSeries(det_coefficients(signed_fredholm(fmap, degree))[0]).reciprocal()


def zeta_coefficient_bound(fmap: PLMap, n_max: int = 30) -> ZetaBound:
    """zeta_n = beta^n * coefficient n of (1 - z) zeta(z), for n = 0 .. n_max.

    ``sup`` is the largest |zeta_n| for n >= 1 and ``trend`` the least-squares
    slope of |zeta_n| against n (0 when fewer than two terms).
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    zeta = zeta_of_map(fmap, n_max)
    damped = zeta * PowerSeries.from_list([1.0, -1.0], n_max)
    values = tuple(float(fmap.beta**n * damped[n]) for n in range(n_max + 1))
    tail = np.abs(np.array(values[1:]))
    sup = float(tail.max()) if tail.size else 0.0
    trend = float(np.polyfit(np.arange(1, tail.size + 1), tail, 1)[0]) if tail.size >= 2 else 0.0
    return ZetaBound(values, sup, trend)


# =============================================================================
# Spectrum and certificates
# =============================================================================


@dataclass(frozen=True)
class SpectralZero:
    value: complex
    multiplicity: int
    inside: bool


@dataclass(frozen=True)
class SpectrumReport:
    """Zeros of det(I - Phi(z)) and the spectral-gap certificate.

    Attributes:
        zeros: Every zero with its multiplicity; ``inside`` marks |z| < beta
        beta: Slope magnitude
        multiplicity_at_one: Order of the zero at z = 1
        second_eigenvalue: 1/|z_2| for the smallest-modulus zero other than 1
        certificate: Only z = 1 lies inside |z| < beta and it is simple
        mixing: z = 1 simple and no other zero on or inside the unit circle
        ergodic_components: Dimension of the eigenvalue-1 eigenspace
        det_coefficients: Polynomial det(I - Phi(z)), ascending
    """

    zeros: tuple[SpectralZero, ...]
    beta: float
    multiplicity_at_one: int
    second_eigenvalue: float | None
    certificate: bool
    mixing: bool
    ergodic_components: int
    det_coefficients: tuple[float, ...]

    @property
    def eigenvalues(self) -> tuple[complex, ...]:
        """Transfer-operator eigenvalues 1/z, one per distinct zero."""
        return tuple(1.0 / z.value for z in self.zeros)


def _multiplicity_at_one(coeffs: np.ndarray) -> int:
    poly = np.polynomial.Polynomial(coeffs)
    if abs(poly(1.0)) >= ROOT_TOL:
        return 0
    order = 1
    deriv = poly.deriv()
    while order < len(coeffs) - 1 and abs(deriv(1.0)) <= SIMPLE_TOL:
        order += 1
        deriv = deriv.deriv()
    return order


def spectrum(fmap: PLMap) -> SpectrumReport:
    """Zeros of det(I - z A / beta) = beta/lambda over nonzero eigenvalues of A.

    Raises:
        UnsupportedMapError: If the map is not Markov
        NumericalError: If the root iteration does not converge
    """
    transition = _require_markov(fmap)
    beta = fmap.beta
    p = charpoly(transition.matrix)
    n = len(p) - 1
    det = np.array([p[n - i] * beta ** (-i) for i in range(n + 1)], dtype=np.float64)

    nonzero = list(p)
    while nonzero and nonzero[0] == 0:
        nonzero.pop(0)
    lambdas = polynomial_roots(nonzero) if len(nonzero) > 1 else np.zeros(0, dtype=np.complex128)
    zs = beta / lambdas

    multiplicity = _multiplicity_at_one(det)
    order = np.argsort(np.abs(zs - 1.0))
    rest = zs[order[multiplicity:]]
    zeros: list[SpectralZero] = []
    inside_radius = beta * (1.0 - ROOT_TOL)
    if multiplicity:
        zeros.append(SpectralZero(1.0 + 0j, multiplicity, True))
    for value, mult in cluster_roots(rest, CLUSTER_TOL):
        zeros.append(SpectralZero(value, mult, abs(value) < inside_radius))
    zeros.sort(key=lambda z: (abs(z.value), z.value.imag))

    others = [z for z in zeros if abs(z.value - 1.0) > ROOT_TOL]
    second = 1.0 / min(abs(z.value) for z in others) if others else None
    certificate = multiplicity == 1 and all(not z.inside for z in others)
    mixing = multiplicity == 1 and all(abs(z.value) > 1.0 + ROOT_TOL for z in others)

    residual = np.abs(np.polynomial.polynomial.polyval([z.value for z in zeros], det))
    if residual.size and residual.max() > 1e-6:
        logger.warning("spectrum of %s: zero residual %.3g", fmap.name, residual.max())
    components = int(_eigenspace_one(fmap, transition).shape[0])
    logger.debug("spectrum of %s: %d distinct zeros", fmap.name, len(zeros))
    return SpectrumReport(
        tuple(zeros),
        beta,
        multiplicity,
        second,
        certificate,
        mixing,
        components,
        tuple(float(c) for c in det),
    )


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MinorCertificate:
    """Contour-count certificate on the Markov-endpoint minor.

    Attributes:
        verdict: TRUE, FALSE or INCONCLUSIVE
        markov_states: Labels of the rows kept in the minor
        non_markov: Number of non-Markov signed endpoints
        minor_zeros: Zeros of det(I - Phi_11) in |z| <= r other than z = 1
        zeta_zeros: Zeros of the truncated 1/zeta in |z| <= r other than z = 1
        radius: Contour radius r = 0.95 beta
        contour_min: Smallest |det| sampled on the contour
        truncation_bound: beta^-K / (beta - 1)
        zero_locations: Zeros of the truncated 1/zeta inside the contour
        contour_noise: Round-off bound on |det| along the contour
    """

    verdict: Verdict
    markov_states: tuple[str, ...]
    non_markov: int
    minor_zeros: int
    zeta_zeros: int
    radius: float
    contour_min: float
    truncation_bound: float
    zero_locations: tuple[complex, ...]
    contour_noise: float = 0.0


def det_values(phi: FredholmSeries, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """det(I - Phi(z)) at each sample by LU, with a round-off bound per sample.

    The bound is eps * size times the product of the row norms of I - Phi(z).
    """
    coeffs = np.array([phi.coefficient_matrix(n) for n in range(phi.degree + 1)])
    psi = np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), coeffs)
    system = np.eye(phi.size) - np.moveaxis(psi, -1, 0)
    values = np.linalg.det(system)
    hadamard = np.prod(np.linalg.norm(system, axis=-1), axis=-1)
    return values, NOISE_EPS * phi.size * hadamard


def det_coefficients(phi: FredholmSeries) -> tuple[np.ndarray, float]:
    """Coefficients of det(I - Phi(z)) up to z^K, by FFT of values on |z| = 1.

    Coefficients below the round-off level are set to zero; the level is returned.
    """
    samples = 1 << max(6, math.ceil(math.log2((phi.degree + 1) * phi.size)))
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    values, noise = det_values(phi, z)
    coeffs = (np.fft.fft(values) / samples)[: phi.degree + 1].real.copy()
    floor = float(noise.max()) * math.log2(samples)
    coeffs[np.abs(coeffs) < floor] = 0.0
    return coeffs, floor


def _locate_zeros(coeffs: np.ndarray, radius: float) -> tuple[complex, ...]:
    if not np.any(coeffs[1:]):
        return ()
    inside = sorted((complex(r) for r in polynomial_roots(coeffs) if abs(r) <= radius), key=abs)
    return tuple(inside)


@dataclass(frozen=True)
class ZeroCount:
    """Zeros of one determinant inside the contour.

    ``settled`` holds when |det| on the contour exceeds its round-off bound,
    or when root location finds as many zeros as the contour.
    """

    zeros: int
    minimum: float
    noise: float
    settled: bool
    located: tuple[complex, ...]


def count_zeros(phi: FredholmSeries, radius: float, samples: int, one_tol: float) -> ZeroCount:
    """Zeros of det(I - Phi(z)) in |z| < radius other than z = 1."""
    z = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    values, bounds = det_values(phi, z)
    winding = winding_number(values)
    minimum = float(np.min(np.abs(values)))
    noise = float(bounds.max())
    at_one = 0
    if radius > 1.0:
        at_one = 1 if abs(det_values(phi, np.array([1.0]))[0][0]) <= one_tol else 0
    coeffs, _ = det_coefficients(phi)
    located = _locate_zeros(coeffs, radius)
    zeros = winding - at_one
    settled = minimum > noise or len(located) - at_one == zeros
    return ZeroCount(zeros, minimum, noise, settled, located)


def markov_minor_certificate(
    fmap: PLMap,
    degree: int = DEFAULT_DEGREE,
    samples: int = CONTOUR_SAMPLES,
    orbit_depth: int = DEFAULT_ORBIT_DEPTH,
) -> MinorCertificate:
    """Check the Markov-endpoint minor and 1/zeta for zeros in |z| < beta.

    Zeros are counted by the argument principle on |z| = 0.95 beta; the zero
    of 1/zeta at z = 1 is expected and not counted. A settled count above zero
    gives FALSE and two settled zero counts give TRUE. The verdict is
    INCONCLUSIVE when |det| on the contour gets within 10x the truncation
    bound of zero, or when no nonzero count is settled and some count is not.
    """
    phi = signed_fredholm(fmap, degree)
    orbits = endpoint_orbits(fmap, orbit_depth)
    keep = [i for i, o in enumerate(orbits) if o.markov]
    non_markov = len(orbits) - len(keep)
    radius = CONTOUR_FRACTION * fmap.beta
    bound = truncation_bound(fmap.beta, degree)
    guard = 10.0 * bound
    one_tol = max(ROOT_TOL, guard)

    zeta = count_zeros(phi, radius, samples, one_tol)
    if keep:
        minor = count_zeros(phi.minor(keep), radius, samples, one_tol)
    else:
        minor = ZeroCount(0, math.inf, 0.0, True, ())

    contour_min = min(zeta.minimum, minor.minimum)
    found = any(c.settled and c.zeros > 0 for c in (zeta, minor))
    if contour_min < guard:
        verdict = Verdict.INCONCLUSIVE
        logger.warning(
            "certificate for %s inconclusive: contour minimum %.3g below %.3g",
            fmap.name,
            contour_min,
            guard,
        )
    elif found:
        verdict = Verdict.FALSE
    elif zeta.settled and minor.settled and zeta.zeros == 0 and minor.zeros == 0:
        verdict = Verdict.TRUE
    else:
        verdict = Verdict.INCONCLUSIVE
        logger.warning(
            "certificate for %s inconclusive: contour counts (%d, %d) within round-off",
            fmap.name,
            zeta.zeros,
            minor.zeros,
        )
    return MinorCertificate(
        verdict,
        tuple(phi.labels[i] for i in keep),
        non_markov,
        minor.zeros,
        zeta.zeros,
        radius,
        contour_min,
        bound,
        zeta.located,
        max(zeta.noise, minor.noise),
    )


# =============================================================================
# Generating functions
# =============================================================================


def _indicator(interval: tuple[float, float], x: float) -> bool:
    lo, hi = interval
    return lo <= x < hi or (hi >= 1.0 and x == 1.0)


def _check_interval(interval: tuple[float, float]) -> None:
    lo, hi = interval
    if not 0.0 <= lo < hi <= 1.0:
        raise DomainError(f"interval [{lo}, {hi}) is not a nonempty subinterval of [0, 1]")


def level_hits(fmap: PLMap, interval: tuple[float, float], x: float, n: int) -> int:
    """Number of words w of length n with wx existing and lying in the interval."""
    hits = 0
    for w in words_of_length(fmap, n):
        y = point_of_wx(fmap, w, x)
        if y is not None and _indicator(interval, y):
            hits += 1
    return hits


def generating_function(
    fmap: PLMap,
    interval: tuple[float, float],
    x: float,
    degree: int,
) -> PowerSeries:
    """s^J(z, x) = sum_n z^n P^n 1_J(x), with P^n 1_J(x) = beta^-n #{|w| = n : wx in J}."""
    _check_interval(interval)
    c = [fmap.beta ** (-n) * level_hits(fmap, interval, x, n) for n in range(degree + 1)]
    return PowerSeries.from_list(c, degree)


def renewal_series(
    fmap: PLMap,
    interval: tuple[float, float],
    x: float,
    degree: int,
) -> PowerSeries:
    """s^J(z, x) from the renewal system (I - Psi) T = chi.

    1_J = f_(hi,+) + f_(lo,-); each of the two points is followed until it meets
    an endpoint image, then continued through the solved renewal vector T.
    """
    _check_interval(interval)
    phi = signed_fredholm(fmap, degree)
    images = [o.points[0] for o in phi.orbits]
    chi = phi.chi(x)

    # Neumann iteration; Psi has no constant term, so degree + 1 rounds are exact.
    t = list(chi)
    for _ in range(degree + 1):
        previous = t
        t = []
        for i in range(phi.size):
            row = chi[i]
            for j in range(phi.size):
                row = row + phi.entries[i][j] * previous[j]
            t.append(row)

    total = PowerSeries.zero(degree)
    lo, hi = interval
    for start in (SidedPoint(hi, Side.PLUS), SidedPoint(lo, Side.MINUS)):
        orbit = _follow(fmap, start, images, degree, first=0)
        total = total + _chi_series(orbit, x, fmap.beta, degree, 0)
        rows, _ = _row_series(orbit, phi.states, fmap.beta, degree)
        for j in range(phi.size):
            total = total + PowerSeries(rows[j]) * t[j]
    return total


def renewal_check(
    fmap: PLMap,
    interval: tuple[float, float],
    x: float,
    degree: int = 8,
) -> float:
    """Max coefficient gap between the renewal solution and direct enumeration."""
    direct = generating_function(fmap, interval, x, degree)
    return (renewal_series(fmap, interval, x, degree) - direct).max_abs()


@dataclass(frozen=True)
class HitCountRow:
    level: int
    hits: int
    leading: float | None
    cumulative_deviation: float | None


def hit_count_profile(
    fmap: PLMap,
    interval: tuple[float, float],
    x: float,
    n_max: int,
) -> list[HitCountRow]:
    """Per-level hits in J against the leading term beta^n |J| rho(x)."""
    _check_interval(interval)
    try:
        rho: float | None = invariant_density(fmap)(x)
    except UnsupportedMapError:
        rho = None
    width = interval[1] - interval[0]
    rows: list[HitCountRow] = []
    cumulative = 0.0
    for n in range(n_max + 1):
        hits = level_hits(fmap, interval, x, n)
        if rho is None:
            rows.append(HitCountRow(n, hits, None, None))
            continue
        leading = fmap.beta**n * width * rho
        cumulative += hits - leading
        rows.append(HitCountRow(n, hits, leading, cumulative))
    return rows
