"""Admissible involution pairs on E^3 and the Euler numbers of the glued fourfold."""

from .conditions import MatrixReport, PairReport, TraceProfile, check_matrix, check_pair
from .eisenstein import EisensteinInt, canonical_associate, conj, gcd, norm
from .euler import EulerBreakdown, InadmissibleError, chi_beauville, chi_surface, euler_breakdown
from .matrix import (
    INFINITE,
    CharPoly,
    Mat3,
    SnfResult,
    char_poly,
    det,
    element_order,
    integer_embedding,
    smith_normal_form,
    trace,
)
from .torus import (
    POSITIVE_DIMENSIONAL,
    FixedLocusSummary,
    TorusPoint,
    brute_force_fixed_count,
    fixed_locus,
    is_fixed_point,
    quasi_fixed_count,
    theta_intersection_count,
    theta_points,
    zeta_fixed_points,
)

A1 = Mat3([[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
A2 = Mat3([[1, 0, 0], [-1, 0, 1], [1, 1, 0]])

__version__ = "0.1.0"
