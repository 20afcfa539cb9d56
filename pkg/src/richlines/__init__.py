"""Exact constructions of r-rich line families over nice-basis number fields."""

from .errors import (
    BasisMismatchError,
    ConfigError,
    DegeneratePairError,
    InvalidParameterError,
    InvalidPolynomialError,
    RichlinesError,
    RTooLargeError,
    ZeroDivisorError,
)
from .gapset import GapSet, gap_radius, gap_set, generate, product_bound, sum_bound
from .geometry import (
    CanonicalLine,
    Point,
    beck_statistic,
    collinear,
    count_incidences,
    line_through,
    on_line,
    rich_lines_bruteforce,
)
from .numberfield import (
    Element,
    NiceBasis,
    RationalElement,
    basis_from_spec,
    build_integers_basis,
    build_power_basis,
    build_quadratic_basis,
    divide,
    embed,
)
from .construction import (
    ConstructionParams,
    build_cell_geometry,
    build_pointset,
    generate_line_family,
    szt_incidence_construction,
    translate_vectors,
    verify_claim2,
    verify_disjoint_translates,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
