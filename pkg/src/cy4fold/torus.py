"""Points and fixed loci on the abelian threefold E^3 = C^3 / Z[w]^3.

A torsion point is written (1/m) * v with v in Z[w]^3.  The group
automorphism induced by a matrix A fixes x exactly when (A - I) x lies in the
lattice, so fixed loci are kernels of A - I acting on the torus; their
structure is read off the Smith form of A - I.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd as int_gcd

import numpy as np

from .eisenstein import OMEGA, ONE, ZERO, EisensteinInt, divisible_by_int, norm
from .eisenstein import gcd as eis_gcd
from .matrix import IDENTITY, Mat3, det, integer_embedding, smith_normal_form

POSITIVE_DIMENSIONAL = math.inf

MAX_GRID = 6


@dataclass(frozen=True)
class TorusPoint:
    """The point (1/m) * v of E^3, stored in lowest terms with coefficients in [0, m)."""

    m: int
    v: tuple[EisensteinInt, EisensteinInt, EisensteinInt]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"denominator must be positive, got {self.m}")
        if len(self.v) != 3:
            raise ValueError("a point of E^3 has three coordinates")
        m = self.m
        coeffs = [c % m for x in self.v for c in (x[0], x[1])]
        g = m
        for c in coeffs:
            g = int_gcd(g, c)
        m //= g
        coeffs = [c // g for c in coeffs]
        v = tuple(EisensteinInt(coeffs[2 * i], coeffs[2 * i + 1]) for i in range(3))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "v", v)

    @classmethod
    def zero(cls) -> TorusPoint:
        return cls(1, (ZERO, ZERO, ZERO))

    def __add__(self, other: TorusPoint) -> TorusPoint:
        m = self.m * other.m // int_gcd(self.m, other.m)
        s, t = m // self.m, m // other.m
        return TorusPoint(m, tuple(x * s + y * t for x, y in zip(self.v, other.v)))

    def __neg__(self) -> TorusPoint:
        return TorusPoint(self.m, tuple(-x for x in self.v))

    def apply(self, a: Mat3) -> TorusPoint:
        """Image under the group automorphism induced by ``a``."""
        v = self.v
        rows = a.rows
        return TorusPoint(self.m, tuple(r[0] * v[0] + r[1] * v[1] + r[2] * v[2] for r in rows))

    def to_json(self) -> dict:
        return {"m": self.m, "v": [x.to_json() for x in self.v]}

    @classmethod
    def from_json(cls, data: dict) -> TorusPoint:
        return cls(int(data["m"]), tuple(EisensteinInt.from_json(x) for x in data["v"]))


@dataclass(frozen=True)
class FixedLocusSummary:
    complex_dimension: int
    component_count: int
    invariant_factors: tuple[EisensteinInt, ...]

    def to_json(self) -> dict:
        return {
            "complex_dimension": self.complex_dimension,
            "component_count": self.component_count,
            "invariant_factors": [d.to_json() for d in self.invariant_factors],
        }


def _maps_into_lattice(m: Mat3, point: TorusPoint) -> bool:
    v = point.v
    return all(
        divisible_by_int(r[0] * v[0] + r[1] * v[1] + r[2] * v[2], point.m) for r in m.rows
    )


@lru_cache(maxsize=None)
def _zeta_fixed_numerators() -> tuple[EisensteinInt, ...]:
    # (w - 1) x in Z[w] forces x into (1/3) Z[w], so scanning that grid is exhaustive
    shift = OMEGA - ONE
    found = [
        EisensteinInt(a, b)
        for a in range(3)
        for b in range(3)
        if divisible_by_int(shift * EisensteinInt(a, b), 3)
    ]
    if len(found) != norm(shift):
        raise AssertionError(f"expected {norm(shift)} fixed points of w, found {len(found)}")
    q1 = EisensteinInt(1, -1)
    q2 = EisensteinInt(-1, 1)
    ordered = (ZERO, q1, q2)
    assert {EisensteinInt(x.a % 3, x.b % 3) for x in ordered} == set(found)
    return ordered


def zeta_fixed_points() -> tuple[TorusPoint, TorusPoint, TorusPoint]:
    """Q0 = 0, Q1 = (1 - w)/3, Q2 = (-1 + w)/3, each placed in the first slot of E^3.

    These are the points of E fixed by multiplication by w.
    """
    return tuple(TorusPoint(3, (q, ZERO, ZERO)) for q in _zeta_fixed_numerators())


@lru_cache(maxsize=None)
def theta_points() -> dict[tuple[int, int, int], TorusPoint]:
    """The 27 points Q_{i,j,k} = (Q_i, Q_j, Q_k), keyed by (i, j, k)."""
    q = _zeta_fixed_numerators()
    return {
        (i, j, k): TorusPoint(3, (q[i], q[j], q[k]))
        for i, j, k in itertools.product(range(3), repeat=3)
    }


def is_fixed_point(a: Mat3, point: TorusPoint) -> bool:
    return _maps_into_lattice(a - IDENTITY, point)


def theta_intersection_count(a: Mat3) -> int:
    return sum(1 for p in theta_points().values() if is_fixed_point(a, p))


def fixed_locus(a: Mat3) -> FixedLocusSummary:
    """Dimension and number of components of Fix(a) on E^3.

    The kernel of A - I on the torus is a finite union of translates of a
    connected subtorus; with Smith form diag(d1, d2, d3), the dimension is the
    number of zero d_i and the translates are counted by the product of the
    norms of the nonzero ones.
    """
    factors = smith_normal_form(a - IDENTITY).invariant_factors
    count = 1
    for d in factors:
        count *= norm(d)
    return FixedLocusSummary(3 - len(factors), count, factors)


def quasi_fixed_count(a: Mat3, j: int) -> int | float:
    """Number of x in E^3 with a x = w^j x, or POSITIVE_DIMENSIONAL."""
    if j not in (1, 2):
        raise ValueError(f"j must be 1 or 2, got {j}")
    d = det(a - Mat3.scalar(OMEGA ** j))
    if not d:
        return POSITIVE_DIMENSIONAL
    return norm(d)


def predicted_grid_count(m: Mat3, k: int) -> int:
    """Points of the (1/k)-grid killed by m, predicted from the Smith form of m.

    With U m V = diag(d1, d2, d3) the count is the product over the diagonal of
    norm(gcd(d_i, k)), reading gcd(0, k) as k.
    """
    total = 1
    kk = EisensteinInt(k, 0)
    diagonal = smith_normal_form(m).D
    for i in range(3):
        total *= norm(eis_gcd(diagonal[i, i], kk))
    return total


def brute_force_fixed_count(m: Mat3, k: int) -> int:
    """Count x in ((1/k) Z[w] / Z[w])^3 with m x in Z[w]^3, by scanning all k^6 points."""
    if not isinstance(k, int) or not 1 <= k <= MAX_GRID:
        raise ValueError(f"grid size must be an integer in [1, {MAX_GRID}], got {k!r}")
    emb = np.array(integer_embedding(m), dtype=np.int64)
    # |entry| * k * 6 must stay far from the int64 limit
    if emb.size and int(np.abs(emb).max()) > 2**40:
        raise OverflowError("matrix coefficients too large for the grid oracle")
    grid = np.indices((k,) * 6, dtype=np.int64).reshape(6, -1)
    images = emb @ grid
    return int(np.count_nonzero(np.all(images % k == 0, axis=0)))
