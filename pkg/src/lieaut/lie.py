"""Lie algebras given by structure constants.

Convention: ``[X_i, X_j] = f_ij^k X_k``.  Matrices are indexed so that row
``r`` / column ``c`` carries lower index ``r`` and upper index ``c``; a map
``O`` acts as ``O X_i = O_i^j X_j``, i.e. row ``i`` is the image of ``X_i``.

Public indices (bracket records, reports) are 1-based like the tables;
the dense array ``StructureTensor.c`` is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .linalg import RatMatrix, to_fraction


class StructureTensor:
    """Antisymmetric structure constants of an ``n``-dimensional algebra."""

    __slots__ = ("dim", "c", "_upper")

    def __init__(self, dim: int, constants: Mapping = None):
        """``constants`` maps 1-based ``(i, j, k)`` with ``i < j`` to ``f_ij^k``."""
        self.dim = dim
        zero = Fraction(0)
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        upper = {}
        for (i, j, k), v in (constants or {}).items():
            if not (1 <= i < j <= dim) or not (1 <= k <= dim):
                raise ValueError(f"bad structure-constant index ({i},{j},{k}); need 1 <= i < j <= {dim}")
            v = to_fraction(v)
            if not v:
                continue
            c[i - 1][j - 1][k - 1] = v
            c[j - 1][i - 1][k - 1] = -v
            upper[(i, j, k)] = v
        self.c = c
        self._upper = upper

    @classmethod
    def abelian(cls, dim: int) -> "StructureTensor":
        return cls(dim, {})

    def nonzero(self) -> dict:
        """Stored constants as ``{(i, j, k): value}`` with 1-based ``i < j``."""
        return dict(sorted(self._upper.items()))

    def f(self, i: int, j: int, k: int) -> Fraction:
        """1-based accessor for ``f_ij^k`` with any ordering of ``i, j``."""
        return self.c[i - 1][j - 1][k - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, StructureTensor) and self.dim == other.dim and self._upper == other._upper

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self._upper.items()))))

    def __repr__(self) -> str:
        terms = ", ".join(f"f{i}{j}^{k}={v}" for (i, j, k), v in self.nonzero().items())
        return f"StructureTensor(dim={self.dim}: {terms or 'abelian'})"


def _vec(x, n: int) -> list:
    vals = list(x.entries) if isinstance(x, RatMatrix) else [to_fraction(v) for v in x]
    if len(vals) != n:
        raise ValueError(f"vector of length {len(vals)} for a {n}-dimensional algebra")
    return vals


def bracket(t: StructureTensor, x, y) -> list:
    n = t.dim
    x = _vec(x, n)
    y = _vec(y, n)
    out = [Fraction(0)] * n
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j] or i == j:
                continue
            w = x[i] * y[j]
            row = t.c[i][j]
            for k in range(n):
                if row[k]:
                    out[k] += w * row[k]
    return out


@dataclass
class JacobiReport:
    violations: list = field(default_factory=list)  # (i, j, k, l, residual), 1-based

    @property
    def ok(self) -> bool:
        return not self.violations


def jacobi_check(t: StructureTensor) -> JacobiReport:
    """Check sum_cyc f_ij^m f_mk^l = 0 for all i<j<k and every l."""
    n = t.dim
    c = t.c
    report = JacobiReport()
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    s = Fraction(0)
                    for m in range(n):
                        s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                    if s:
                        report.violations.append((i + 1, j + 1, k + 1, l + 1, s))
    return report


@dataclass(frozen=True)
class AdjointSet:
    chi: tuple  # chi[i][j, k] = -f_ij^k
    y: tuple    # y[k][i, j] = -f_ij^k


def adjoint(t: StructureTensor) -> AdjointSet:
    n = t.dim
    c = t.c
    chi = tuple(RatMatrix(n, n, [-c[i][j][k] for j in range(n) for k in range(n)]) for i in range(n))
    ys = tuple(RatMatrix(n, n, [-c[i][j][k] for i in range(n) for j in range(n)]) for k in range(n))
    return AdjointSet(chi, ys)


def ad_matrix(t: StructureTensor, x) -> RatMatrix:
    """Matrix of ``ad_x`` in the row convention: row ``j`` is ``[x, X_j]``."""
    n = t.dim
    x = _vec(x, n)
    rows = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        rows.append(bracket(t, x, e))
    return RatMatrix.from_rows(rows)


def killing_form(t: StructureTensor) -> RatMatrix:
    """K_ij = sum_{k,l} f_ik^l f_jl^k."""
    n = t.dim
    c = t.c
    vals = []
    for i in range(n):
        for j in range(n):
            s = Fraction(0)
            for k in range(n):
                cik = c[i][k]
                for l in range(n):
                    if cik[l]:
                        s += cik[l] * c[j][l][k]
            vals.append(s)
    return RatMatrix(n, n, vals)


def heisenberg3() -> StructureTensor:
    return StructureTensor(3, {(1, 2, 3): 1})
