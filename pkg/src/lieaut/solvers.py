"""Exact solvers for ad-invariant metrics, derivations and the nilradical."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lie import StructureTensor, ad_matrix, adjoint, bracket
from .linalg import RatMatrix, determinant, mat_mul, null_space, rank, span_basis


# --- metrics --------------------------------------------------------------

def metric_unknowns(n: int) -> list:
    """Upper-triangle positions (0-based) in unknown order g_11, g_12, ..., g_nn."""
    return [(a, b) for a in range(n) for b in range(a, n)]


def sym_from_vector(vec, n: int) -> RatMatrix:
    vals = list(vec.entries) if isinstance(vec, RatMatrix) else list(vec)
    g = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), v in zip(metric_unknowns(n), vals):
        g[a][b] = v
        g[b][a] = v
    return RatMatrix.from_rows(g)


def sym_to_vector(g: RatMatrix) -> list:
    return [g[a, b] for a, b in metric_unknowns(g.rows)]


def metric_system(t: StructureTensor) -> RatMatrix:
    """Rows: for each i and row <= col, the (row, col) entry of chi_i g + (chi_i g)^T."""
    n = t.dim
    unknowns = metric_unknowns(n)
    index = {}
    for u, (a, b) in enumerate(unknowns):
        index[(a, b)] = u
        index[(b, a)] = u
    chis = adjoint(t).chi
    rows = []
    for i in range(n):
        chi = chis[i]
        for r in range(n):
            for c in range(r, n):
                eq = [Fraction(0)] * len(unknowns)
                # (chi g)_{rc} = sum_s chi[r,s] g[s,c]; (chi g)_{cr} = sum_s chi[c,s] g[s,r]
                for s in range(n):
                    if chi[r, s]:
                        eq[index[(s, c)]] += chi[r, s]
                    if chi[c, s]:
                        eq[index[(s, r)]] += chi[c, s]
                rows.append(eq)
    return RatMatrix.from_rows(rows)


@dataclass(frozen=True)
class MetricBasis:
    algebra: StructureTensor
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combination(self, coeffs: Sequence) -> RatMatrix:
        n = self.algebra.dim
        out = RatMatrix.zeros(n, n)
        for c, g in zip(coeffs, self.basis):
            out = out + g.scale(c)
        return out

    def generic_nondegenerate(self) -> bool:
        """Whether the combination with distinct prime coefficients has nonzero determinant.

        A True answer proves a nondegenerate invariant metric exists.
        """
        if not self.basis:
            return False
        return determinant(self.combination(_primes(len(self.basis)))) != 0


def _primes(k: int) -> list:
    out, p = [], 2
    while len(out) < k:
        if all(p % q for q in out):
            out.append(p)
        p += 1
    return out


def metric_basis(t: StructureTensor) -> MetricBasis:
    kernel = null_space(metric_system(t))
    return MetricBasis(t, tuple(sym_from_vector(v, t.dim) for v in kernel))


def is_ad_invariant(t: StructureTensor, g: RatMatrix) -> bool:
    for chi in adjoint(t).chi:
        m = mat_mul(chi, g)
        if not (m + m.T).is_zero():
            return False
    return True


# --- derivations ----------------------------------------------------------

def derivation_system(t: StructureTensor) -> RatMatrix:
    """Rows for f_lm^n D_n^k - D_l^i f_im^k - D_m^j f_lj^k = 0, l < m, all k.

    Unknown ``D_a^b`` sits at position ``a*n + b``.
    """
    n = t.dim
    c = t.c
    rows = []
    for l in range(n):
        for m in range(l + 1, n):
            for k in range(n):
                eq = [Fraction(0)] * (n * n)
                for p in range(n):
                    if c[l][m][p]:
                        eq[p * n + k] += c[l][m][p]
                    if c[p][m][k]:
                        eq[l * n + p] -= c[p][m][k]
                    if c[l][p][k]:
                        eq[m * n + p] -= c[l][p][k]
                rows.append(eq)
    return RatMatrix.from_rows(rows)


@dataclass(frozen=True)
class DerivationBasis:
    algebra: StructureTensor
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def _vec_to_square(v, n: int) -> RatMatrix:
    return RatMatrix(n, n, v.entries if isinstance(v, RatMatrix) else v)


def derivation_basis(t: StructureTensor) -> DerivationBasis:
    n = t.dim
    return DerivationBasis(t, tuple(_vec_to_square(v, n) for v in null_space(derivation_system(t))))


def is_derivation(t: StructureTensor, d: RatMatrix) -> bool:
    n = t.dim
    system = derivation_system(t)
    return mat_mul(system, RatMatrix.column(d.entries)).is_zero() if n else True


# --- exponential ----------------------------------------------------------

class NotNilpotent(ValueError):
    pass


def exp_nilpotent(d: RatMatrix) -> RatMatrix:
    """sum_{k<n} D^k / k! for nilpotent ``D``."""
    n = d.rows
    if d.cols != n:
        raise ValueError("exp_nilpotent needs a square matrix")
    total = RatMatrix.identity(n)
    power = RatMatrix.identity(n)
    for k in range(1, n + 1):
        power = mat_mul(power, d)
        if power.is_zero():
            return total
        if k == n:
            break
        total = total + power.scale(Fraction(1, math.factorial(k)))
    # D^n != 0: find where the rank of D^k stops dropping
    power, prev, k = d, None, 1
    while True:
        r = rank(power)
        if r == prev:
            break
        prev, k = r, k + 1
        power = mat_mul(power, d)
    raise NotNilpotent(f"matrix is not nilpotent: rank of D^k stabilizes at {prev} from k={k - 1}")


# --- subspaces and the nilradical ----------------------------------------

def subspace_bracket(t: StructureTensor, a: Sequence, b: Sequence) -> list:
    vecs = [bracket(t, x, y) for x in a for y in b]
    return span_basis(vecs)


def lower_central_series(t: StructureTensor, sub: Sequence) -> list:
    """[S, S^1=S, S^2=[S,S], S^3=[S,S^2], ...] until zero or stable."""
    series = [span_basis(sub)]
    while series[-1]:
        nxt = subspace_bracket(t, series[0], series[-1])
        if len(nxt) == len(series[-1]):
            break
        series.append(nxt)
    return series


def is_ideal(t: StructureTensor, sub: Sequence) -> bool:
    base = span_basis(sub)
    n = t.dim
    units = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    produced = subspace_bracket(t, units, base)
    return len(span_basis(base + produced)) == len(base)


def is_nilpotent_subalgebra(t: StructureTensor, sub: Sequence) -> bool:
    return not lower_central_series(t, sub)[-1]


def _trace_form_conditions(t: StructureTensor, probes: Sequence) -> RatMatrix:
    """Linear conditions tr(ad_x ad_y^k) = 0 on x, for each probe y and k < n."""
    n = t.dim
    # sparse ad_{e_i} entries, since tr(ad_x P) is linear in x with
    # coefficient tr(ad_{e_i} P) = sum_ab ad_i[a,b] P[b,a]
    ads = [[(a, b, m[a, b]) for a in range(n) for b in range(n) if m[a, b]] for m in adjoint_rows(t)]
    rows = []
    for y in probes:
        ady = ad_matrix(t, y)
        power = RatMatrix.identity(n)
        for _ in range(n):
            rows.append([sum((v * power[b, a] for a, b, v in ad), Fraction(0)) for ad in ads])
            power = mat_mul(power, ady)
    return RatMatrix.from_rows(rows)


def adjoint_rows(t: StructureTensor) -> list:
    n = t.dim
    return [ad_matrix(t, [1 if i == j else 0 for j in range(n)]) for i in range(n)]



class NilradicalError(RuntimeError):
    pass


def nilradical(t: StructureTensor, extra_probes: int = 4, seed: int = 0) -> list:
    """Basis of the nilradical of a solvable algebra.

    Every element of the nilradical lies in the trace-orthogonal set
    S = {x : tr(ad_x ad_y^k) = 0 for all y, k}.  S is cut out using finitely
    many probes y (basis vectors plus seeded random combinations) and is then
    checked to be a nilpotent ideal, which pins it to the nilradical.
    """
    n = t.dim
    rng = random.Random(seed)
    probes = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    probes += [[Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
               for _ in range(extra_probes)]
    cand = [list(v.entries) for v in null_space(_trace_form_conditions(t, probes))]
    cand = span_basis(cand)
    if not is_ideal(t, cand) or not is_nilpotent_subalgebra(t, cand):
        raise NilradicalError("trace-orthogonal candidate is not a nilpotent ideal; algebra is not solvable?")
    return cand


def nilradical_dim_report(t: StructureTensor) -> int:
    return len(nilradical(t))


def nilpotent_derivation_system(t: StructureTensor) -> RatMatrix:
    """Derivation equations plus D(L) in N and D(N^k) in N^(k+1).

    Every solution is nilpotent and the space contains ad_x for x in N.
    """
    n = t.dim
    units = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    series = lower_central_series(t, nilradical(t))
    if series[-1]:
        raise NilradicalError("nilradical is not nilpotent")
    chain = [units] + series + [[]]
    rows = [list(r) for r in derivation_system(t).to_rows()]
    for src, dst in zip(chain, chain[1:]):
        # annihilator of dst: columns a with w.a = 0 for w in dst
        if dst:
            ann = [list(v.entries) for v in null_space(RatMatrix.from_rows(dst))]
        else:
            ann = units
        for v in src:
            for a in ann:
                # (v D) . a = sum_{p,q} v_p D_pq a_q
                rows.append([v[p] * a[q] for p in range(n) for q in range(n)])
    return RatMatrix.from_rows(rows)


def nilpotent_derivation_basis(t: StructureTensor) -> list:
    n = t.dim
    return [_vec_to_square(v, n) for v in null_space(nilpotent_derivation_system(t))]
