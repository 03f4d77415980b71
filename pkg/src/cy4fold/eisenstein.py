"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2*pi*i/3).

An element is stored as the coefficient pair (a, b) of a + b*w.  Products are
reduced with w**2 = -1 - w, so every element has exactly one representation.
Python integers never wrap, so there is no silent overflow to guard against.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import NamedTuple

OMEGA_COMPLEX = cmath.exp(2j * cmath.pi / 3)


class EisensteinInt(NamedTuple):
    a: int
    b: int = 0

    # tuple's concatenation/repetition operators are replaced by ring operations

    def __add__(self, other):
        if isinstance(other, int):
            return EisensteinInt(self.a + other, self.b)
        if isinstance(other, EisensteinInt):
            return EisensteinInt(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return EisensteinInt(self.a - other, self.b)
        if isinstance(other, EisensteinInt):
            return EisensteinInt(self.a - other.a, self.b - other.b)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int):
            return EisensteinInt(self.a * other, self.b * other)
        if isinstance(other, EisensteinInt):
            a1, b1 = self
            a2, b2 = other
            bb = b1 * b2
            return EisensteinInt(a1 * a2 - bb, a1 * b2 + a2 * b1 - bb)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in Z[w]")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        return eisenstein_divmod(self, other)

    def __floordiv__(self, other):
        return eisenstein_divmod(self, other)[0]

    def __mod__(self, other):
        return eisenstein_divmod(self, other)[1]

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{self.b:+d}*w"

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def to_complex(self) -> complex:
        return self.a + self.b * OMEGA_COMPLEX

    def to_json(self) -> list[int]:
        return [self.a, self.b]

    @classmethod
    def from_json(cls, data) -> EisensteinInt:
        if isinstance(data, int) and not isinstance(data, bool):
            return cls(data, 0)
        if (
            isinstance(data, (list, tuple))
            and len(data) == 2
            and all(isinstance(c, int) and not isinstance(c, bool) for c in data)
        ):
            return cls(data[0], data[1])
        raise ValueError(f"expected [a, b] integer pair, got {data!r}")


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)

# 1, -w^2, w, -1, w^2, -w: counter-clockwise in steps of 60 degrees
UNITS = (
    EisensteinInt(1, 0),
    EisensteinInt(1, 1),
    EisensteinInt(0, 1),
    EisensteinInt(-1, 0),
    EisensteinInt(-1, -1),
    EisensteinInt(0, -1),
)


def add(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    return x + y


def sub(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    return x - y


def neg(x: EisensteinInt) -> EisensteinInt:
    return -x


def mul(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    return x * y


def norm(x: EisensteinInt) -> int:
    """Field norm a^2 - ab + b^2, i.e. |x|^2."""
    a, b = x
    return a * a - a * b + b * b


def conj(x: EisensteinInt) -> EisensteinInt:
    # conj(w) = w^2 = -1 - w
    return EisensteinInt(x.a - x.b, -x.b)


def is_unit(x: EisensteinInt) -> bool:
    return norm(x) == 1


def unit_inverse(u: EisensteinInt) -> EisensteinInt:
    if not is_unit(u):
        raise ValueError(f"{u} is not a unit")
    return conj(u)


def canonical_associate(x: EisensteinInt) -> EisensteinInt:
    """Rotate ``x`` by a unit into the sector 0 <= arg < 60 degrees.

    The sector test is exact: b >= 0 and a > b.  Zero maps to zero.
    """
    if not x:
        return ZERO
    for u in UNITS:
        y = u * x
        if y.b >= 0 and y.a > y.b:
            return y
    raise AssertionError(f"no associate of {x!r} in the fundamental sector")


def eisenstein_divmod(
    x: EisensteinInt, y: EisensteinInt
) -> tuple[EisensteinInt, EisensteinInt]:
    """Euclidean division: x = q*y + r with norm(r) < norm(y).

    q is x/y = x*conj(y)/norm(y) rounded coordinatewise in the (1, w) basis,
    ties to even, which leaves norm(r) <= 3/4 * norm(y).
    """
    n = norm(y)
    if n == 0:
        raise ZeroDivisionError("Eisenstein division by zero")
    num = x * conj(y)
    q = EisensteinInt(round(Fraction(num.a, n)), round(Fraction(num.b, n)))
    return q, x - q * y


def divides(d: EisensteinInt, x: EisensteinInt) -> bool:
    if not d:
        return not x
    return not eisenstein_divmod(x, d)[1]


def gcd(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        x, y = y, eisenstein_divmod(x, y)[1]
    return canonical_associate(x)


def divisible_by_int(x: EisensteinInt, m: int) -> bool:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    return x.a % m == 0 and x.b % m == 0


def parse_eisenstein(text: str) -> EisensteinInt:
    """Parse ``"a"``, ``"a+b*w"``, ``"w"``, ``"-2w+1"`` and similar sums of terms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty entry")
    a = b = 0
    pos = 0
    n = len(s)
    while pos < n:
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        digits = s[start:pos]
        has_w = False
        if pos < n and s[pos] == "*":
            pos += 1
            if pos >= n or s[pos] != "w" or not digits:
                raise ValueError(f"malformed term in {text!r} at offset {pos}")
        if pos < n and s[pos] == "w":
            has_w = True
            pos += 1
        if not digits and not has_w:
            raise ValueError(f"malformed term in {text!r} at offset {pos}")
        if pos < n and s[pos] not in "+-":
            raise ValueError(f"unexpected character {s[pos]!r} in {text!r} at offset {pos}")
        coeff = sign * (int(digits) if digits else 1)
        if has_w:
            b += coeff
        else:
            a += coeff
    return EisensteinInt(a, b)
