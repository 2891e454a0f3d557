"""Low-discrepancy sequences from piecewise-linear expanding maps."""

from .discrepancy import (
    brute_force_discrepancy,
    discrepancy_report,
    dyadic_discrepancy,
    extreme_discrepancy_1d,
    growth_fit,
    star_discrepancy_1d,
    star_discrepancy_2d,
)
from .errors import (
    DomainError,
    ErgodicDecompositionError,
    InputError,
    LowDiscError,
    MapValidationError,
    NumericalError,
    ResourceGuardError,
    UnsupportedMapError,
)
from .interval_maps import PLMap, Word, markov_structure, point_of_wx, validate_map
from .mapfile import beta_transformation, load_map, map_fingerprint
from .multidim import (
    Point2D,
    Point3D,
    map2d_forward,
    map2d_level,
    map3d_forward,
    map3d_level,
    mix_matrix,
)
from .spectral import (
    fredholm_markov,
    invariant_density,
    markov_minor_certificate,
    signed_fredholm,
    spectrum,
    zeta_coefficient_bound,
)
from .vdc1d import vdc_levels, vdc_take

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ErgodicDecompositionError",
    "InputError",
    "LowDiscError",
    "MapValidationError",
    "NumericalError",
    "PLMap",
    "Point2D",
    "Point3D",
    "ResourceGuardError",
    "UnsupportedMapError",
    "Word",
    "beta_transformation",
    "brute_force_discrepancy",
    "discrepancy_report",
    "dyadic_discrepancy",
    "extreme_discrepancy_1d",
    "fredholm_markov",
    "growth_fit",
    "invariant_density",
    "load_map",
    "map2d_forward",
    "map2d_level",
    "map3d_forward",
    "map3d_level",
    "map_fingerprint",
    "markov_minor_certificate",
    "markov_structure",
    "mix_matrix",
    "point_of_wx",
    "signed_fredholm",
    "spectrum",
    "star_discrepancy_1d",
    "star_discrepancy_2d",
    "validate_map",
    "vdc_levels",
    "vdc_take",
    "zeta_coefficient_bound",
]
