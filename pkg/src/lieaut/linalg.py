"""Dense exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`, which keeps every value reduced
with a positive denominator.  Matrices are immutable and row-major.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class ShapeError(ValueError):
    pass


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RatMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        data = tuple(to_fraction(x) for x in entries)
        if len(data) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(data)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, [])
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        return cls(len(rows), width, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        return cls(len(values), 1, values)

    def __getitem__(self, key) -> Fraction:
        r, c = key
        return self._data[r * self.cols + c]

    def row(self, r: int) -> tuple:
        return self._data[r * self.cols:(r + 1) * self.cols]

    def col(self, c: int) -> tuple:
        return self._data[c::self.cols]

    def to_rows(self) -> list:
        return [list(self.row(r)) for r in range(self.rows)]

    @property
    def entries(self) -> tuple:
        return self._data

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         [self[r, c] for c in range(self.cols) for r in range(self.rows)])

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix(self.rows, self.cols, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return RatMatrix(self.rows, self.cols, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, [-a for a in self._data])

    def scale(self, k) -> "RatMatrix":
        k = to_fraction(k)
        return RatMatrix(self.rows, self.cols, [k * a for a in self._data])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_fraction(x) for x in self.row(r)) for r in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    bcols = [b.col(c) for c in range(b.cols)]
    out = []
    for r in range(a.rows):
        arow = a.row(r)
        for bc in bcols:
            out.append(sum((x * y for x, y in zip(arow, bc) if x and y), Fraction(0)))
    return RatMatrix(a.rows, b.cols, out)


def rref(m: RatMatrix) -> tuple:
    """Reduced row echelon form and the strictly increasing pivot columns.

    Pivots are the leftmost nonzero entry found scanning rows top-down.
    """
    rows = [list(m.row(r)) for r in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        prow = rows[r]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return RatMatrix(m.rows, m.cols, [x for row in rows for x in row]), pivots


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def null_space(m: RatMatrix) -> list:
    """Canonical kernel basis: one column vector per free column, 1 in that slot."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i, free]
        basis.append(RatMatrix.column(v))
    return basis


def _as_list(v) -> list:
    if isinstance(v, RatMatrix):
        return list(v.entries)
    return [to_fraction(x) for x in v]


def in_span(v, basis: Sequence) -> tuple:
    """Return ``(True, coefficients)`` if ``v`` is a rational combination of ``basis``.

    On failure the second element is ``None``.
    """
    target = _as_list(v)
    vecs = [_as_list(b) for b in basis]
    for b in vecs:
        if len(b) != len(target):
            raise ShapeError("vectors of different lengths")
    if not vecs:
        return (not any(target), [] if not any(target) else None)
    # augmented system [B | v]
    aug = RatMatrix(len(target), len(vecs) + 1,
                    [x for i in range(len(target)) for x in [b[i] for b in vecs] + [target[i]]])
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == len(vecs):
        return False, None
    coeffs = [Fraction(0)] * len(vecs)
    for i, pc in enumerate(pivots):
        coeffs[pc] = reduced[i, len(vecs)]
    return True, coeffs


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise ShapeError("inverse of a non-square matrix")
    n = m.rows
    aug = RatMatrix(n, 2 * n, [x for r in range(n)
                               for x in list(m.row(r)) + [1 if r == c else 0 for c in range(n)]])
    reduced, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix(n, n, [reduced[r, n + c] for r in range(n) for c in range(n)])


def determinant(m: RatMatrix) -> Fraction:
    """Determinant by exact elimination."""
    if m.rows != m.cols:
        raise ShapeError("determinant of a non-square matrix")
    rows = [list(m.row(r)) for r in range(m.rows)]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        lead = rows[c][c]
        det *= lead
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / lead
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def span_basis(vectors: Sequence) -> list:
    """Row-reduced basis (as lists) of the span of ``vectors``."""
    vecs = [_as_list(v) for v in vectors]
    if not vecs:
        return []
    m = RatMatrix.from_rows(vecs)
    reduced, pivots = rref(m)
    return [list(reduced.row(i)) for i in range(len(pivots))]
