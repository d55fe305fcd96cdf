"""Checking automorphism families and metric invariance at exact parameter values.

A matrix ``O`` is an automorphism when

    O_l^i O_m^j f_ij^k = f_lm^n O_n^k        for all l < m and k,

which is the same tensor identity as the matrix form
``sum_i O_l^i (O chi_i) = chi_l O`` (entry (m, k) of the latter is minus the
former).  Both are implemented independently and compared in the tests.

Metric invariance uses the index form g_ij = O_i^k O_j^l g_kl, i.e. the matrix
identity ``g = O g O^T`` with rows of ``O`` as images of the basis vectors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .expr import (Constraint, ConstraintViolation, EvalError, ExprMatrix, ParamEnv, Var,
                   _eval, eval_matrix, variables)
from .lie import StructureTensor, adjoint
from .linalg import RatMatrix, format_fraction, mat_mul, rank


# --- single matrices ------------------------------------------------------

def automorphism_residuals(t: StructureTensor, o: RatMatrix) -> list:
    """Nonzero residuals (l, m, k, value), 1-based, of the index identity."""
    n = t.dim
    if o.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {o.rows}x{o.cols}")
    consts = t.nonzero()
    by_pair = {}
    for (i, j, k), v in consts.items():
        by_pair.setdefault((i - 1, j - 1), []).append((k - 1, v))
    rows = [o.row(r) for r in range(n)]
    out = []
    for l in range(n):
        ol = rows[l]
        for m in range(l + 1, n):
            om = rows[m]
            acc = [Fraction(0)] * n
            for (i, j), terms in by_pair.items():
                w = ol[i] * om[j] - ol[j] * om[i]
                if w:
                    for k, v in terms:
                        acc[k] += w * v
            for k, v in by_pair.get((l, m), ()):
                # subtract f_lm^k' O_k'^k over all k
                row = rows[k]
                for c in range(n):
                    if row[c]:
                        acc[c] -= v * row[c]
            for k in range(n):
                if acc[k]:
                    out.append((l + 1, m + 1, k + 1, acc[k]))
    return out


def matrix_form_residuals(t: StructureTensor, o: RatMatrix) -> list:
    """Nonzero entries (l, m, k, value), 1-based and all l, m, of
    sum_i O_l^i (O chi_i) - chi_l O, computed with matrix products."""
    n = t.dim
    chi = adjoint(t).chi
    prods = [mat_mul(o, c) for c in chi]
    out = []
    for l in range(n):
        lhs = RatMatrix.zeros(n, n)
        for i in range(n):
            if o[l, i]:
                lhs = lhs + prods[i].scale(o[l, i])
        diff = lhs - mat_mul(chi[l], o)
        for m in range(n):
            for k in range(n):
                if diff[m, k]:
                    out.append((l + 1, m + 1, k + 1, diff[m, k]))
    return out


def violation_set(residuals: Sequence, symmetric: bool = False) -> set:
    """Index triples (l, m, k) with l < m; matrix-form residuals fold l > m onto m < l."""
    if not symmetric:
        return {(l, m, k) for l, m, k, _ in residuals}
    return {(min(l, m), max(l, m), k) for l, m, k, _ in residuals}


@dataclass
class VerificationReport:
    outcome: str
    residuals: list
    env: Optional[ParamEnv] = None
    invertible: bool = True
    matrix_form_agrees: bool = True
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.outcome == "pass"


def verify_automorphism(t: StructureTensor, o: RatMatrix, env: Optional[ParamEnv] = None,
                        cross_check: bool = True) -> VerificationReport:
    res = automorphism_residuals(t, o)
    agrees = True
    if cross_check:
        other = matrix_form_residuals(t, o)
        agrees = violation_set(res) == violation_set(other, symmetric=True)
    invertible = rank(o) == t.dim
    ok = not res and invertible and agrees
    note = "" if invertible else "matrix is singular"
    if not agrees:
        note = "index and matrix forms disagree"
    return VerificationReport("pass" if ok else "fail", res, env, invertible, agrees, note)


def metric_residual(g: RatMatrix, o: RatMatrix) -> RatMatrix:
    return mat_mul(mat_mul(o, g), o.T) - g


def verify_metric_invariance(g: RatMatrix, o: RatMatrix) -> tuple:
    """``(True, None)`` when g = O g O^T, else ``(False, residual matrix)``."""
    if not g.is_symmetric():
        raise ValueError("metric must be symmetric")
    r = metric_residual(g, o)
    return (True, None) if r.is_zero() else (False, r)


# --- families -------------------------------------------------------------

@dataclass(frozen=True)
class AutFamily:
    algebra: str
    matrix: ExprMatrix
    params: tuple
    constraints: tuple = ()
    docs: tuple = ()
    samples: tuple = ()  # tuples of full binding dicts

    def definitions(self) -> list:
        """Equalities ``name = expr`` that fix a family parameter outright."""
        out = []
        for c in self.constraints:
            if (c.op == "=" and isinstance(c.lhs, Var) and c.lhs.name in self.params
                    and c.lhs.name not in variables(c.rhs)):
                out.append((c.lhs.name, c.rhs))
        return out

    def relations(self) -> list:
        """Equalities tying free family parameters together (algebra-only
        conditions are excluded)."""
        defined = {name for name, _ in self.definitions()}
        free = set(self.params) - defined
        return [c for c in self.constraints
                if c.op == "=" and not (isinstance(c.lhs, Var) and c.lhs.name in defined)
                and c.variables() & free]

    def free_params(self) -> list:
        defined = {name for name, _ in self.definitions()}
        return [p for p in self.params if p not in defined]

    @property
    def continuous_dim(self) -> int:
        return len(self.free_params()) - len(self.relations())

    def env(self, bindings: Mapping) -> ParamEnv:
        return ParamEnv(bindings, self.constraints)

    def instance(self, env) -> RatMatrix:
        return eval_matrix(self.matrix, env)


def verify_family(t: StructureTensor, fam: AutFamily, envs: Sequence) -> list:
    reports = []
    for e in envs:
        env = e if isinstance(e, ParamEnv) else fam.env(e)
        # re-check in case a ParamEnv was built without the family constraints
        for c in fam.constraints:
            if not c.holds(env.bindings):
                raise ConstraintViolation(f"constraint {c} violated by {env.describe()}")
        o = fam.instance(env)
        reports.append(verify_automorphism(t, o, env))
    return reports


def draw_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


class SamplingError(RuntimeError):
    pass


def _line_root(f: Constraint, b: dict, line_vars: Sequence, direction: Sequence) -> Optional[Fraction]:
    """Second intersection of the line b + t*direction with the quadric f, which passes through b."""
    base = {v: b[v] for v in line_vars}

    def g(t):
        trial = dict(b)
        for v, d in zip(line_vars, direction):
            trial[v] = base[v] + t * d
        return _eval(f.lhs, trial) - _eval(f.rhs, trial)

    g0, g1, gm1, g2 = g(0), g(1), g(-1), g(2)
    if g0 != 0:
        raise SamplingError(f"base point does not satisfy {f}")
    lin = (g1 - gm1) / 2
    quad = (g1 + gm1) / 2 - g0
    if g2 != g0 + 2 * lin + 4 * quad:
        raise SamplingError(f"relation {f} is not quadratic along sampling lines")
    if quad == 0:
        return None
    return -lin / quad


def random_env(fam: AutFamily, rng: random.Random, base: Mapping, max_tries: int = 500) -> ParamEnv:
    """Seeded admissible point of the family.

    Parameters not appearing in the family matrix (algebra parameters) keep
    their values from ``base``.  Free family parameters are drawn as p/q with
    p in [-9, 9] and q in [1, 9].  Each quadratic relation is solved by
    intersecting a random rational line through the admissible ``base`` point
    with the relation's quadric.  Definitions are evaluated last.  Draws that
    hit a division by zero, a violated constraint or a singular matrix are
    discarded.
    """
    defs = fam.definitions()
    rels = fam.relations()
    free = fam.free_params()
    rel_vars = []
    claimed = set()
    for rel in rels:
        vs = [p for p in free if p in rel.variables()]
        if claimed & set(vs):
            raise SamplingError("relations sharing parameters are not supported")
        claimed |= set(vs)
        rel_vars.append(vs)
    base = {k: Fraction(v) for k, v in base.items()}
    for _ in range(max_tries):
        b = dict(base)
        for p in free:
            if p not in claimed:
                b[p] = draw_rational(rng)
        try:
            for rel, vs in zip(rels, rel_vars):
                direction = [draw_rational(rng) for _ in vs]
                t = _line_root(rel, {**b, **{v: base[v] for v in vs}}, vs, direction)
                if t is None:
                    raise ZeroDivisionError
                for v, d in zip(vs, direction):
                    b[v] = base[v] + t * d
            for name, rhs in defs:
                b[name] = _eval(rhs, b)
            env = ParamEnv(b, fam.constraints)
            o = fam.instance(env)
        except (ZeroDivisionError, EvalError, ConstraintViolation):
            continue
        if rank(o) != o.rows:
            continue
        return env
    raise SamplingError(f"no admissible point found for {fam.algebra} after {max_tries} draws")


def random_envs(fam: AutFamily, count: int, seed: int) -> list:
    """``count`` seeded envs, cycling through the shipped samples as base points."""
    if not fam.samples:
        raise SamplingError(f"{fam.algebra}: family has no shipped sample to start from")
    rng = random.Random(seed)
    return [random_env(fam, rng, fam.samples[k % len(fam.samples)]) for k in range(count)]


def describe_bindings(b: Mapping) -> dict:
    return {k: format_fraction(Fraction(v)) for k, v in sorted(b.items())}
