import itertools
import random

import pytest

from cy4fold.eisenstein import OMEGA, ONE, ZERO, EisensteinInt as E, divisible_by_int, norm
from cy4fold.matrix import IDENTITY, ZERO_MATRIX, Mat3, unit_inverse_matrix
from cy4fold.torus import (
    POSITIVE_DIMENSIONAL,
    TorusPoint,
    brute_force_fixed_count,
    fixed_locus,
    is_fixed_point,
    predicted_grid_count,
    quasi_fixed_count,
    theta_intersection_count,
    theta_points,
    zeta_fixed_points,
)
from oracles import signed_permutations


def test_torus_point_canonical_form():
    p = TorusPoint(3, (E(1, -1), ZERO, ZERO))
    assert p.v[0] == E(1, 2)
    assert TorusPoint(6, (E(2, -2), ZERO, ZERO)) == p
    assert TorusPoint(5, (E(5, 10), E(-5, 0), ZERO)) == TorusPoint.zero()
    assert TorusPoint.zero() == TorusPoint(1, (ZERO, ZERO, ZERO))
    assert hash(TorusPoint(9, (E(3, 6), ZERO, ZERO))) == hash(TorusPoint(3, (E(1, 2), ZERO, ZERO)))
    with pytest.raises(ValueError):
        TorusPoint(0, (ZERO, ZERO, ZERO))


def test_torus_point_group_ops():
    p = TorusPoint(3, (E(1, -1), ZERO, ONE))
    assert p + (-p) == TorusPoint.zero()
    assert p + p + p == TorusPoint.zero()
    assert TorusPoint(2, (ONE, ZERO, ZERO)) + TorusPoint(3, (ONE, ZERO, ZERO)) == TorusPoint(6, (E(5), ZERO, ZERO))
    assert TorusPoint.from_json(p.to_json()) == p


def test_zeta_fixed_points():
    pts = zeta_fixed_points()
    assert len(set(pts)) == 3
    assert TorusPoint.zero() in pts
    assert TorusPoint(3, (E(1, -1), ZERO, ZERO)) in pts
    assert TorusPoint(3, (E(-1, 1), ZERO, ZERO)) in pts
    for p in pts:
        assert divisible_by_int((OMEGA - ONE) * p.v[0], p.m)


def test_zeta_fixed_points_are_all_of_them():
    # brute force over a finer grid: w x = x on E has exactly norm(w - 1) = 3 solutions
    k = 6
    sols = [
        TorusPoint(k, (E(a, b), ZERO, ZERO))
        for a in range(k)
        for b in range(k)
        if divisible_by_int((OMEGA - ONE) * E(a, b), k)
    ]
    assert set(sols) == set(zeta_fixed_points())
    assert len(sols) == norm(OMEGA - ONE) == 3


def test_theta_points():
    theta = theta_points()
    assert len(theta) == 27 == len(set(theta.values()))
    assert theta[(0, 0, 0)] == TorusPoint.zero()
    assert sorted(theta) == list(itertools.product(range(3), repeat=3))
    # the same set as the points with w x = x on E^3, scanned on the (1/3)-grid
    scan = {
        TorusPoint(3, tuple(E(*c[2 * i:2 * i + 2]) for i in range(3)))
        for c in itertools.product(range(3), repeat=6)
    }
    fixed_by_w = {p for p in scan if all(divisible_by_int((OMEGA - ONE) * x, 3) for x in p.v)}
    assert fixed_by_w == set(theta.values())
    assert quasi_fixed_count(IDENTITY, 1) == 27


def test_is_fixed_point(a1):
    theta = theta_points()
    assert is_fixed_point(a1, theta[(0, 1, 2)])
    assert not is_fixed_point(a1, theta[(1, 0, 0)])
    rng = random.Random(0)
    for _ in range(20):
        a = Mat3([E(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(9)])
        assert is_fixed_point(a, TorusPoint.zero())


def test_a1_fixed_theta_points_are_first_coordinate_zero(a1):
    fixed = {idx for idx, p in theta_points().items() if is_fixed_point(a1, p)}
    assert fixed == {(0, j, k) for j in range(3) for k in range(3)}


def test_fixed_point_membership_matches_explicit_action(a1, a2):
    # x fixed  <=>  A x == x as torus points
    for a in (a1, a2):
        for p in theta_points().values():
            assert is_fixed_point(a, p) == (p.apply(a) == p)


def test_fixed_locus_examples(a1, a2):
    assert fixed_locus(a1) == fixed_locus(a1).__class__(2, 4, (E(2),))
    assert fixed_locus(a2).complex_dimension == 2
    assert fixed_locus(a2).component_count == 1
    assert fixed_locus(a2).invariant_factors == (E(1),)
    minus = fixed_locus(-IDENTITY)
    assert (minus.complex_dimension, minus.component_count) == (0, 64)
    assert minus.invariant_factors == (E(2), E(2), E(2))


def test_theta_intersection_counts(a1, a2):
    assert theta_intersection_count(a1) == 9
    assert theta_intersection_count(a2) == 9
    assert theta_intersection_count(IDENTITY) == 27


def test_quasi_fixed_counts(a1):
    assert quasi_fixed_count(a1, 1) == 9
    assert quasi_fixed_count(IDENTITY, 1) == 27
    assert quasi_fixed_count(-IDENTITY, 1) == 1
    assert quasi_fixed_count(Mat3.scalar(OMEGA), 1) == POSITIVE_DIMENSIONAL
    with pytest.raises(ValueError):
        quasi_fixed_count(a1, 3)


@pytest.mark.parametrize("j", [1, 2])
def test_quasi_fixed_counts_against_grid(a1, a2, j):
    w = Mat3.scalar(OMEGA ** j)
    for a in (a1, a2, IDENTITY, -IDENTITY):
        # every solution has denominator dividing det(A - w^j I), which divides 3 here
        assert brute_force_fixed_count(a - w, 3) == quasi_fixed_count(a, j)


def test_brute_force_examples(a1, a2):
    assert brute_force_fixed_count(a1 - IDENTITY, 2) == 64
    assert brute_force_fixed_count(a2 - IDENTITY, 1) == 1
    assert brute_force_fixed_count(ZERO_MATRIX, 2) == 64
    for k in (0, 7):
        with pytest.raises(ValueError):
            brute_force_fixed_count(a1, k)


def test_predicted_grid_count_general():
    rng = random.Random(3)
    for _ in range(40):
        m = Mat3([E(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(9)])
        k = rng.randint(1, 4)
        assert predicted_grid_count(m, k) == brute_force_fixed_count(m, k)


def test_oracle_consistency_bound1(bound1_admissible):
    checked = 0
    for a in bound1_admissible:
        locus = fixed_locus(a)
        k = norm(locus.invariant_factors[0])
        if k > 6:
            continue
        expected = locus.component_count * k ** (2 * locus.complex_dimension)
        assert brute_force_fixed_count(a - IDENTITY, k) == expected
        checked += 1
    assert checked > 0


def test_theta_count_invariant_under_signed_permutations(bound1_admissible):
    perms = signed_permutations()
    rng = random.Random(4)
    for a in rng.sample(bound1_admissible, 60) + [-IDENTITY, IDENTITY]:
        base = theta_intersection_count(a)
        for p in perms:
            assert theta_intersection_count(p @ a @ unit_inverse_matrix(p)) == base


def test_fixed_status_depends_on_residue_mod_3(bound1_involutions):
    rng = random.Random(5)
    theta = list(theta_points().values())
    for a in rng.sample(bound1_involutions, 40):
        shift = Mat3([E(3 * rng.randint(-2, 2), 3 * rng.randint(-2, 2)) for _ in range(9)])
        for p in theta:
            lifted = TorusPoint(3, tuple(x + E(3 * rng.randint(-3, 3), 3 * rng.randint(-3, 3)) for x in p.v))
            assert lifted == p
            assert is_fixed_point(a, p) == is_fixed_point(a + shift, p) == is_fixed_point(a, lifted)
