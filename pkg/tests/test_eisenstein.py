import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cy4fold.eisenstein import (
    UNITS,
    ZERO,
    EisensteinInt as E,
    canonical_associate,
    conj,
    divides,
    divisible_by_int,
    eisenstein_divmod,
    gcd,
    is_unit,
    mul,
    norm,
    parse_eisenstein,
)
from oracles import as_complex

ints = st.integers(min_value=-1000, max_value=1000)
elements = st.builds(E, ints, ints)
nonzero = elements.filter(bool)


@pytest.mark.parametrize(
    "x, y, expected",
    [((1, -1), (2, 1), (3, 0)), ((0, 0), (5, 7), (5, 7)), ((1, 2), (-1, -2), (0, 0))],
)
def test_add(x, y, expected):
    assert E(*x) + E(*y) == E(*expected)


def test_sub_neg():
    assert E(3, 0) - E(2, 1) == E(1, -1)
    assert -E(1, -2) == E(-1, 2)
    assert 1 - E(0, 1) == E(1, -1)


@pytest.mark.parametrize(
    "x, y, expected",
    [((0, 1), (0, 1), (-1, -1)), ((1, -1), (2, 1), (3, 0)), ((4, -7), (1, 0), (4, -7))],
)
def test_mul(x, y, expected):
    got = mul(E(*x), E(*y))
    assert got == E(*expected)
    assert abs(as_complex(got) - as_complex(x) * as_complex(y)) < 1e-9


@given(elements, elements)
def test_mul_matches_complex(x, y):
    assert abs(as_complex(x * y) - as_complex(x) * as_complex(y)) < 1e-6


@pytest.mark.parametrize("x, n", [((1, -1), 3), ((0, 1), 1), ((0, 0), 0), ((2, 1), 3), ((2, 0), 4)])
def test_norm(x, n):
    assert norm(E(*x)) == n


def test_three_is_unit_times_square_of_one_minus_w():
    assert E(0, 1) ** 2 * -1 * E(1, -1) ** 2 == E(3, 0)


@pytest.mark.parametrize("x, expected", [((0, 1), (-1, -1)), ((3, 0), (3, 0)), ((1, -1), (2, 1))])
def test_conj(x, expected):
    assert conj(E(*x)) == E(*expected)


@given(elements)
def test_conj_involution_and_norm(x):
    assert conj(conj(x)) == x
    assert x * conj(x) == E(norm(x), 0)


@pytest.mark.parametrize("x, expected", [((1, -1), (2, 1)), ((0, 1), (1, 0)), ((2, 0), (2, 0)), ((0, 0), (0, 0))])
def test_canonical_associate(x, expected):
    assert canonical_associate(E(*x)) == E(*expected)


@given(elements)
def test_canonical_associate_properties(x):
    c = canonical_associate(x)
    assert canonical_associate(c) == c
    for u in UNITS:
        assert canonical_associate(u * x) == c
    if x:
        assert c.b >= 0 and c.a > c.b
        assert norm(c) == norm(x)


def test_units_are_the_norm_one_elements():
    units = {E(a, b) for a in range(-3, 4) for b in range(-3, 4) if is_unit(E(a, b))}
    assert units == set(UNITS)
    assert units == {E(1, 0), E(-1, 0), E(0, 1), E(0, -1), E(1, 1), E(-1, -1)}


@pytest.mark.parametrize(
    "x, y, q, r",
    [((3, 0), (1, -1), (2, 1), (0, 0)), ((0, 1), (2, 0), (0, 0), (0, 1)), ((2, 2), (1, -1), (1, 1), (0, 1))],
)
def test_divmod_examples(x, y, q, r):
    assert eisenstein_divmod(E(*x), E(*y)) == (E(*q), E(*r))


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        eisenstein_divmod(E(1, 1), ZERO)


def test_divmod_random_pairs():
    rng = random.Random(20240601)
    for _ in range(10_000):
        x = E(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        y = E(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        if not y:
            continue
        q, r = eisenstein_divmod(x, y)
        assert x == q * y + r
        assert 4 * norm(r) <= 3 * norm(y)


def test_norm_multiplicative_random_pairs():
    rng = random.Random(7)
    for _ in range(10_000):
        x = E(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        y = E(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        assert norm(x * y) == norm(x) * norm(y)


@pytest.mark.parametrize(
    "x, y, g", [((1, -1), (3, 0), (2, 1)), ((2, 0), (3, 0), (1, 0)), ((0, 0), (1, -1), (2, 1))]
)
def test_gcd_examples(x, y, g):
    assert gcd(E(*x), E(*y)) == E(*g)


def test_gcd_zero_zero():
    with pytest.raises(ValueError):
        gcd(ZERO, ZERO)


@given(nonzero, nonzero, st.builds(E, st.integers(-20, 20), st.integers(-20, 20)).filter(bool))
def test_gcd_is_greatest(x, y, d):
    g = gcd(x * d, y * d)
    assert divides(g, x * d) and divides(g, y * d)
    assert divides(d, g)


@pytest.mark.parametrize("x, m, expected", [((2, -2), 3, False), ((3, -3), 3, True), ((0, 0), 7, True)])
def test_divisible_by_int(x, m, expected):
    assert divisible_by_int(E(*x), m) is expected


@pytest.mark.parametrize(
    "text, expected",
    [("5", (5, 0)), ("-3", (-3, 0)), ("w", (0, 1)), ("-w", (0, -1)), ("1+2*w", (1, 2)),
     ("1-1*w", (1, -1)), ("2w-1", (-1, 2)), (" 0 + 1*w ", (0, 1))],
)
def test_parse(text, expected):
    assert parse_eisenstein(text) == E(*expected)


@pytest.mark.parametrize("text", ["", "x", "1+", "1.5", "2**w", "*w", "w2"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_eisenstein(text)


@given(elements)
def test_render_round_trip(x):
    assert parse_eisenstein(str(x)) == x
