"""3x3 matrices over the Eisenstein integers.

Matrices are immutable and hashable.  Entries are kept as a flat row-major
tuple of nine :class:`EisensteinInt` values; the arithmetic kernels below work
on the raw coefficient pairs because the pair search multiplies millions of
these.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .eisenstein import (
    ONE,
    ZERO,
    EisensteinInt,
    canonical_associate,
    divides,
    eisenstein_divmod,
    is_unit,
    norm,
    parse_eisenstein,
    unit_inverse,
)

INFINITE = math.inf

# Every eigenvalue of a finite-order element of GL_3(Z[w]) is a root of unity of
# degree <= 3 over Q(w); the possible orders are 1, 2, 3, 4, 6, 9, 12, 18, all
# of which divide 36.
TORSION_EXPONENT = 36

ORDER_CUTOFF = 60


def _mul_flat(x: Sequence[EisensteinInt], y: Sequence[EisensteinInt]) -> tuple:
    out = []
    for i in (0, 3, 6):
        r0, r1, r2 = x[i], x[i + 1], x[i + 2]
        a0, b0 = r0
        a1, b1 = r1
        a2, b2 = r2
        for j in (0, 1, 2):
            c0a, c0b = y[j]
            c1a, c1b = y[j + 3]
            c2a, c2b = y[j + 6]
            bb = b0 * c0b + b1 * c1b + b2 * c2b
            out.append(
                EisensteinInt(
                    a0 * c0a + a1 * c1a + a2 * c2a - bb,
                    a0 * c0b + b0 * c0a + a1 * c1b + b1 * c1a + a2 * c2b + b2 * c2a - bb,
                )
            )
    return tuple(out)


class Mat3:
    """An immutable 3x3 matrix over Z[w]."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable):
        flat = tuple(entries)
        if len(flat) == 3 and all(isinstance(r, (list, tuple)) and len(r) == 3 for r in flat):
            flat = tuple(e for row in flat for e in row)
        if len(flat) != 9:
            raise ValueError(f"a 3x3 matrix needs 9 entries, got {len(flat)}")
        self.entries = tuple(_coerce(e) for e in flat)
        self._hash = None

    @classmethod
    def _raw(cls, flat: tuple) -> Mat3:
        m = cls.__new__(cls)
        m.entries = flat
        m._hash = None
        return m

    @classmethod
    def from_ints(cls, rows) -> Mat3:
        return cls(rows)

    @classmethod
    def identity(cls) -> Mat3:
        return IDENTITY

    @classmethod
    def zero(cls) -> Mat3:
        return ZERO_MATRIX

    @classmethod
    def scalar(cls, c) -> Mat3:
        c = _coerce(c)
        return cls._raw((c, ZERO, ZERO, ZERO, c, ZERO, ZERO, ZERO, c))

    @classmethod
    def diag(cls, d0, d1, d2) -> Mat3:
        d0, d1, d2 = _coerce(d0), _coerce(d1), _coerce(d2)
        return cls._raw((d0, ZERO, ZERO, ZERO, d1, ZERO, ZERO, ZERO, d2))

    @property
    def rows(self) -> tuple:
        e = self.entries
        return (e[0:3], e[3:6], e[6:9])

    def __getitem__(self, ij: tuple[int, int]) -> EisensteinInt:
        i, j = ij
        return self.entries[3 * i + j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat3):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __lt__(self, other: Mat3) -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return tuple(c for e in self.entries for c in e)

    def __add__(self, other: Mat3) -> Mat3:
        return Mat3._raw(tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: Mat3) -> Mat3:
        return Mat3._raw(tuple(x - y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> Mat3:
        return Mat3._raw(tuple(-x for x in self.entries))

    def __matmul__(self, other: Mat3) -> Mat3:
        return Mat3._raw(_mul_flat(self.entries, other.entries))

    def __mul__(self, c) -> Mat3:
        if isinstance(c, Mat3):
            return self @ c
        c = _coerce(c)
        return Mat3._raw(tuple(c * x for x in self.entries))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Mat3:
        return mat_pow(self, k)

    def transpose(self) -> Mat3:
        e = self.entries
        return Mat3._raw((e[0], e[3], e[6], e[1], e[4], e[7], e[2], e[5], e[8]))

    def __repr__(self) -> str:
        return f"Mat3({render_matrix(self)})"

    def __str__(self) -> str:
        return render_matrix(self)


def _coerce(x) -> EisensteinInt:
    if isinstance(x, EisensteinInt):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return EisensteinInt(x, 0)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return EisensteinInt(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {x!r} as an Eisenstein integer")


IDENTITY = Mat3._raw((ONE, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ONE))
ZERO_MATRIX = Mat3._raw((ZERO,) * 9)


def mat_mul(x: Mat3, y: Mat3) -> Mat3:
    return x @ y


def mat_add(x: Mat3, y: Mat3) -> Mat3:
    return x + y


def mat_sub(x: Mat3, y: Mat3) -> Mat3:
    return x - y


def mat_scalar_mul(c, x: Mat3) -> Mat3:
    return x * c


def mat_pow(x: Mat3, k: int) -> Mat3:
    if k < 0:
        raise ValueError("mat_pow requires k >= 0")
    result, base = IDENTITY, x
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def trace(x: Mat3) -> EisensteinInt:
    e = x.entries
    return e[0] + e[4] + e[8]


def trace_of_product(x: Mat3, y: Mat3) -> EisensteinInt:
    """tr(x @ y) without forming the product."""
    ex, ey = x.entries, y.entries
    total = ZERO
    for i in range(3):
        for j in range(3):
            total = total + ex[3 * i + j] * ey[3 * j + i]
    return total


def det(x: Mat3) -> EisensteinInt:
    e00, e01, e02, e10, e11, e12, e20, e21, e22 = x.entries
    return (
        e00 * (e11 * e22 - e12 * e21)
        - e01 * (e10 * e22 - e12 * e20)
        + e02 * (e10 * e21 - e11 * e20)
    )


@dataclass(frozen=True)
class CharPoly:
    """det(tI - X) = t^3 - tr*t^2 + c2*t - det."""

    tr: EisensteinInt
    c2: EisensteinInt
    det: EisensteinInt

    def evaluate(self, x: Mat3) -> Mat3:
        """Plug a matrix into the polynomial (zero for its own matrix)."""
        x2 = x @ x
        return x2 @ x - x2 * self.tr + x * self.c2 - IDENTITY * self.det

    def to_json(self) -> dict:
        return {"tr": self.tr.to_json(), "c2": self.c2.to_json(), "det": self.det.to_json()}

    def __str__(self) -> str:
        return f"t^3-({self.tr})t^2+({self.c2})t-({self.det})"


def char_poly(x: Mat3) -> CharPoly:
    e00, e01, e02, e10, e11, e12, e20, e21, e22 = x.entries
    c2 = (e00 * e11 - e01 * e10) + (e00 * e22 - e02 * e20) + (e11 * e22 - e12 * e21)
    return CharPoly(e00 + e11 + e22, c2, det(x))


def in_gl3(x: Mat3) -> bool:
    return is_unit(det(x))


def element_order(x: Mat3, cutoff: int = ORDER_CUTOFF) -> int | float:
    """Smallest k <= cutoff with x**k == I, or INFINITE.

    Torsion in GL_6(Z) has order at most 30, so the default cutoff of 60 can
    only report INFINITE for elements of genuinely infinite order.
    """
    if not in_gl3(x):
        raise ValueError(f"element_order needs an invertible matrix, det = {det(x)}")
    power = x
    for k in range(1, cutoff + 1):
        if power == IDENTITY:
            return k
        power = power @ x
    return INFINITE


def has_finite_order(x: Mat3) -> bool:
    """Fast finite-order test for invertible x, equivalent to element_order < inf.

    Eigenvalues of a torsion element are roots of unity, so |tr| and |c2| are at
    most 3; anything larger is rejected from the characteristic polynomial alone.
    Otherwise x has finite order iff x**36 == I.
    """
    cp = char_poly(x)
    if not is_unit(cp.det) or norm(cp.tr) > 9 or norm(cp.c2) > 9:
        return False
    return mat_pow(x, TORSION_EXPONENT) == IDENTITY


def integer_embedding(x: Mat3) -> list[list[int]]:
    """6x6 integer matrix of x acting on Z[w]^3 = Z^6 in the basis (1, w) per slot."""
    out = [[0] * 6 for _ in range(6)]
    for i in range(3):
        for j in range(3):
            a, b = x.entries[3 * i + j]
            out[2 * i][2 * j] = a
            out[2 * i][2 * j + 1] = -b
            out[2 * i + 1][2 * j] = b
            out[2 * i + 1][2 * j + 1] = a - b
    return out


# ---------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SnfResult:
    U: Mat3
    D: Mat3
    V: Mat3

    @property
    def invariant_factors(self) -> tuple[EisensteinInt, ...]:
        return tuple(self.D[i, i] for i in range(3) if self.D[i, i])

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(m: Mat3) -> SnfResult:
    """Return U, D, V with U @ m @ V == D diagonal, d1 | d2 | d3.

    Pivot is the nonzero entry of least norm in the trailing block, ties broken
    by smallest (row, col).  Each d_i is rotated to its canonical associate and
    zeros come last.
    """
    a = [list(m.rows[i]) for i in range(3)]
    u = [list(IDENTITY.rows[i]) for i in range(3)]
    v = [list(IDENTITY.rows[i]) for i in range(3)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src
        for mat in (a, u):
            mat[dst] = [x - q * y for x, y in zip(mat[dst], mat[src])]

    def col_axpy(dst, src, q):
        for mat in (a, v):
            for row in mat:
                row[dst] = row[dst] - q * row[src]

    for t in range(3):
        while True:
            pivot = None
            for i in range(t, 3):
                for j in range(t, 3):
                    if a[i][j]:
                        n = norm(a[i][j])
                        if pivot is None or n < pivot[0]:
                            pivot = (n, i, j)
            if pivot is None:
                break
            _, pi, pj = pivot
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, 3):
                if a[i][t]:
                    q, r = eisenstein_divmod(a[i][t], p)
                    row_axpy(i, t, q)
                    dirty = dirty or bool(r)
            for j in range(t + 1, 3):
                if a[t][j]:
                    q, r = eisenstein_divmod(a[t][j], p)
                    col_axpy(j, t, q)
                    dirty = dirty or bool(r)
            if dirty:
                continue
            # row and column cleared; the pivot must divide the trailing block
            bad_row = next(
                (i for i in range(t + 1, 3) for j in range(t + 1, 3) if not divides(p, a[i][j])),
                None,
            )
            if bad_row is None:
                break
            row_axpy(t, bad_row, EisensteinInt(-1, 0))

        if a[t][t]:
            c = canonical_associate(a[t][t])
            # c = unit * a[t][t]; scale row t of U by that unit
            unit = eisenstein_divmod(c, a[t][t])[0]
            assert is_unit(unit) and unit * a[t][t] == c
            a[t] = [unit * x for x in a[t]]
            u[t] = [unit * x for x in u[t]]

    return SnfResult(
        U=Mat3(tuple(x for row in u for x in row)),
        D=Mat3(tuple(x for row in a for x in row)),
        V=Mat3(tuple(x for row in v for x in row)),
    )


def is_smith_form(d: Mat3) -> bool:
    diag = [d[i, i] for i in range(3)]
    if any(d[i, j] for i in range(3) for j in range(3) if i != j):
        return False
    seen_zero = False
    for x in diag:
        if not x:
            seen_zero = True
        elif seen_zero or canonical_associate(x) != x:
            return False
    return all(divides(diag[i], diag[i + 1]) for i in range(2))


def unit_inverse_matrix(x: Mat3) -> Mat3:
    """Inverse of an element of GL_3(Z[w]) via the adjugate."""
    d = det(x)
    inv_d = unit_inverse(d)
    e00, e01, e02, e10, e11, e12, e20, e21, e22 = x.entries
    adj = (
        e11 * e22 - e12 * e21, e02 * e21 - e01 * e22, e01 * e12 - e02 * e11,
        e12 * e20 - e10 * e22, e00 * e22 - e02 * e20, e02 * e10 - e00 * e12,
        e10 * e21 - e11 * e20, e01 * e20 - e00 * e21, e00 * e11 - e01 * e10,
    )
    return Mat3._raw(tuple(inv_d * c for c in adj))


# ------------------------------------------------------------- text and JSON


class MatrixParseError(ValueError):
    pass


def render_matrix(x: Mat3) -> str:
    """Compact text form, e.g. ``[[-1,0,0],[0,1,0],[0,0,1-1*w]]``."""
    return "[" + ",".join("[" + ",".join(str(e) for e in row) + "]" for row in x.rows) + "]"


def matrix_to_json(x: Mat3) -> dict:
    return {"rows": [[e.to_json() for e in row] for row in x.rows]}


def matrix_from_json(data) -> Mat3:
    if isinstance(data, dict):
        if "rows" not in data:
            raise MatrixParseError("matrix object needs a 'rows' key")
        data = data["rows"]
    if not isinstance(data, list) or len(data) != 3:
        raise MatrixParseError(f"expected 3 rows, got {_describe_len(data)}")
    entries = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != 3:
            raise MatrixParseError(f"row {i + 1}: expected 3 entries, got {_describe_len(row)}")
        for j, e in enumerate(row):
            try:
                entries.append(EisensteinInt.from_json(e))
            except ValueError as exc:
                raise MatrixParseError(f"row {i + 1}, column {j + 1}: {exc}") from None
    return Mat3._raw(tuple(entries))


def _describe_len(x) -> str:
    return f"{len(x)}" if isinstance(x, list) else type(x).__name__


_ROW_RE = re.compile(r"\[([^\[\]]*)\]")


def parse_matrix_text(text: str) -> Mat3:
    """Parse either the JSON object form or the compact ``[[a,a+b*w,..],..]`` form."""
    s = text.strip()
    if not s:
        raise MatrixParseError("empty matrix text")
    if s.startswith("{"):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return matrix_from_json(data)
    compact = re.sub(r"\s+", "", s)
    if not (compact.startswith("[") and compact.endswith("]")):
        raise MatrixParseError("matrix text must be enclosed in [ ]")
    inner = compact[1:-1]
    rows = _ROW_RE.findall(inner)
    leftover = _ROW_RE.sub("", inner).replace(",", "")
    if leftover:
        raise MatrixParseError(f"unexpected text outside rows: {leftover!r}")
    if len(rows) != 3:
        raise MatrixParseError(f"expected 3 rows, got {len(rows)}")
    entries = []
    for i, row in enumerate(rows):
        cells = row.split(",")
        if len(cells) != 3:
            raise MatrixParseError(f"row {i + 1}: expected 3 entries, got {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                entries.append(parse_eisenstein(cell))
            except ValueError as exc:
                raise MatrixParseError(f"row {i + 1}, column {j + 1}: {exc}") from None
    return Mat3._raw(tuple(entries))
