"""Admissibility checks for single matrices and for pairs.

A matrix is admissible when it lies in GL_3(Z[w]), squares to the identity,
has determinant -1, and fixes a smooth surface.  Given the first three, the
eigenvalues are (1, 1, -1) or (-1, -1, -1), so the surface condition is the
same as trace 1.  A pair is admissible when both matrices are and the group
they generate is infinite, which for two involutions happens exactly when the
product has infinite order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .eisenstein import EisensteinInt, is_unit
from .euler import EulerBreakdown, euler_from_surfaces
from .matrix import IDENTITY, Mat3, det, element_order, matrix_to_json, trace
from .torus import FixedLocusSummary, fixed_locus, quasi_fixed_count, theta_intersection_count

MINUS_ONE = EisensteinInt(-1, 0)


class TraceProfile(str, enum.Enum):
    SURFACE = "SURFACE"
    POINTWISE = "POINTWISE"
    OTHER = "OTHER"


def _count_json(value, label: str):
    return label if value == math.inf else value


@dataclass(frozen=True)
class MatrixReport:
    matrix: Mat3
    in_gl3: bool
    involutive: bool
    det_minus_one: bool
    trace_profile: TraceProfile
    fixed_locus: FixedLocusSummary
    theta_count: int
    quasi_fixed: tuple
    admissible: bool

    def to_json(self) -> dict:
        return {
            "matrix": matrix_to_json(self.matrix),
            "in_gl3": self.in_gl3,
            "involutive": self.involutive,
            "det_minus_one": self.det_minus_one,
            "trace_profile": self.trace_profile.value,
            "fixed_locus": self.fixed_locus.to_json(),
            "theta_count": self.theta_count,
            "quasi_fixed": [_count_json(q, "POSITIVE_DIMENSIONAL") for q in self.quasi_fixed],
            "admissible": self.admissible,
        }


@dataclass(frozen=True)
class PairReport:
    report1: MatrixReport
    report2: MatrixReport
    product_order: int | float | None
    pair_admissible: bool
    euler: EulerBreakdown | None

    @property
    def conditions(self) -> dict[str, bool]:
        r1, r2 = self.report1, self.report2
        return {
            "1_in_gl3": r1.in_gl3 and r2.in_gl3,
            "2_involutive": r1.involutive and r2.involutive,
            "3_det_minus_one": r1.det_minus_one and r2.det_minus_one,
            "4_smooth_fixed_surface": (
                r1.trace_profile is TraceProfile.SURFACE and r2.trace_profile is TraceProfile.SURFACE
            ),
            "5_infinite_group": self.product_order == math.inf,
        }

    def to_json(self) -> dict:
        out = {
            "report1": self.report1.to_json(),
            "report2": self.report2.to_json(),
            "product_order": _count_json(self.product_order, "INFINITE"),
            "conditions": self.conditions,
            "pair_admissible": self.pair_admissible,
        }
        if self.euler is not None:
            out["euler"] = self.euler.to_json()
        return out


def trace_profile(a: Mat3, involutive: bool, det_minus_one: bool) -> TraceProfile:
    if involutive and det_minus_one:
        tr = trace(a)
        if tr == EisensteinInt(1, 0):
            return TraceProfile.SURFACE
        if tr == EisensteinInt(-3, 0):
            return TraceProfile.POINTWISE
    return TraceProfile.OTHER


def check_matrix(a: Mat3) -> MatrixReport:
    d = det(a)
    involutive = a @ a == IDENTITY
    det_minus_one = d == MINUS_ONE
    profile = trace_profile(a, involutive, det_minus_one)
    return MatrixReport(
        matrix=a,
        in_gl3=is_unit(d),
        involutive=involutive,
        det_minus_one=det_minus_one,
        trace_profile=profile,
        fixed_locus=fixed_locus(a),
        theta_count=theta_intersection_count(a),
        quasi_fixed=(quasi_fixed_count(a, 1), quasi_fixed_count(a, 2)),
        admissible=is_unit(d) and involutive and det_minus_one and profile is TraceProfile.SURFACE,
    )


def check_pair(a1: Mat3, a2: Mat3) -> PairReport:
    r1, r2 = check_matrix(a1), check_matrix(a2)
    product = a1 @ a2
    # a non-invertible product has no order; condition 5 then fails with condition 1
    order = element_order(product) if is_unit(det(product)) else None
    admissible = r1.admissible and r2.admissible and order == math.inf
    euler = euler_from_surfaces(2 * r1.theta_count, 2 * r2.theta_count) if admissible else None
    return PairReport(r1, r2, order, admissible, euler)
