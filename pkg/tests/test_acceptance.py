"""Acceptance criteria 1-10.  Each test records a PASS/FAIL line that the
terminal summary prints (see conftest.py)."""

import random
import re
import time
from fractions import Fraction

from lieaut.catalog import load_catalog, metric_containment
from lieaut.cli import main
from lieaut.lie import StructureTensor, heisenberg3, jacobi_check, killing_form
from lieaut.linalg import RatMatrix, in_span, rank
from lieaut.solvers import (derivation_basis, exp_nilpotent, is_derivation, metric_basis,
                            nilpotent_derivation_basis, sym_to_vector)
from lieaut.verify import (automorphism_residuals, draw_rational, matrix_form_residuals, random_env,
                           random_envs, verify_automorphism, verify_metric_invariance, violation_set)
from oracles import brute_metric_dim

CAT = load_catalog()
RESULTS = {}
SEED = 0
TABLE4 = ["g_6_23", "g_6_82_alpha0", "g_6_83_alpha0", "g_6_88_alpha0", "g_6_89_alpha0", "g_6_90_alpha0",
          "g_6_91", "g_6_92_alpha0", "gstar_6_92_p0", "g_6_93_alpha0", "A_6_3"]
SEPARATE_MATRICES = ["g_6_92_alphanz", "g_6_92_alpha0", "g_6_93_alphanz"]


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(RESULTS[n])
    return ok


def sample_tensors(e):
    return [e.tensor_at_sample(k) for k in range(len(e.samples))] if e.samples else [e.tensor()]


def test_c1_catalog_counts(capsys):
    start = time.perf_counter()
    code = main(["list"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    counts = {m[0]: int(m[1]) for m in re.findall(r"^# (table\d): (\d+) algebras", out, re.M)}
    ok = code == 0 and counts == {"table1": 99, "table2": 40, "table3": 22} and elapsed < 1
    with capsys.disabled():
        record(1, ok, f"counts {counts} in {elapsed:.2f}s")
    assert ok


def test_c2_jacobi():
    start = time.perf_counter()
    failing = sorted({e.name for e in CAT for t in sample_tensors(e) if not jacobi_check(t).ok})
    elapsed = time.perf_counter() - start
    documented = all(CAT.get(n).has_misprint_flag() for n in failing)
    ok = len(failing) <= 3 and documented and elapsed < 5
    record(2, ok, f"flagged {failing} (documented={documented}) in {elapsed:.2f}s")
    assert ok


def test_c3_automorphism_families():
    families = [(e, e.aut_family()) for e in CAT if e.automorphism is not None]
    encoded = [(e, f) for e, f in families if not f.matrix.unknown_positions()]
    names = {e.name for e, _ in encoded}
    mandated = set(TABLE4) | set(SEPARATE_MATRICES)
    coverage = mandated <= names and len(names - mandated) >= 15
    start = time.perf_counter()
    failures = []
    for e, fam in encoded:
        for env in random_envs(fam, 100, SEED):
            o = fam.instance(env)
            # index-form identity plus exact invertibility
            if automorphism_residuals(e.tensor(env), o) or rank(o) != 6:
                failures.append((e.name, env.describe()))
    elapsed = time.perf_counter() - start
    ok = coverage and not failures and elapsed < 30
    skipped = sorted(e.name for e, f in families if f.matrix.unknown_positions())
    record(3, ok, f"{len(encoded)} families x 100 instances, {len(failures)} failures, "
                  f"skipped (blank cells) {skipped}, {elapsed:.1f}s")
    assert ok, failures[:5]


def test_c4_metric_containment():
    start = time.perf_counter()
    bad = []
    for name in TABLE4:
        e = CAT.get(name)
        (m,) = e.metrics
        for s, per in zip(m.samples, metric_containment(e, m)):
            basis = metric_basis(e.tensor(s)).basis
            for g, coeffs in zip(m.unit_metrics(s), per):
                if coeffs is None:
                    bad.append(name)
                    continue
                combo = RatMatrix.zeros(6, 6)
                for c, b in zip(coeffs, basis):
                    combo = combo + b.scale(c)
                if combo != g:
                    bad.append(name)
    elapsed = time.perf_counter() - start
    gcounts = {n: len(CAT.get(n).metrics[0].gparams) for n in ("g_6_91", "A_6_3", "gstar_6_92_p0")}
    ok = not bad and gcounts == {"g_6_91": 2, "A_6_3": 7, "gstar_6_92_p0": 2} and elapsed < 5
    record(4, ok, f"{len(TABLE4)} rows, outside span: {sorted(set(bad))}, g-params {gcounts}, {elapsed:.2f}s")
    assert ok


def test_c5_metric_dimensions():
    short = []
    for name in TABLE4:
        e = CAT.get(name)
        m = e.metrics[0]
        for s in m.samples:
            d = metric_basis(e.tensor(s)).dim
            if d < len(m.gparams):
                short.append((name, d, len(m.gparams)))
    h3 = (metric_basis(heisenberg3()).dim, brute_metric_dim(heisenberg3()))
    ab = (metric_basis(StructureTensor.abelian(6)).dim, brute_metric_dim(StructureTensor.abelian(6)))
    ok = not short and h3 == (3, 3) and ab == (21, 21)
    record(5, ok, f"dim below g-count: {short}; h3 {h3}; abelian-6 {ab}")
    assert ok


def test_c6_isometry_of_table4_metrics():
    preserved = total = unevaluable = 0
    worst = {}
    for name in TABLE4:
        e = CAT.get(name)
        fam = e.aut_family()
        m = e.metrics[0]
        conds = m.checked_conditions()
        for env in random_envs(fam, 100, SEED):
            o = fam.instance(env)
            if automorphism_residuals(e.tensor(env), o):
                continue
            alg = {p: env.bindings[p] for p in e.param_names}
            if not all(c.holds(alg) for c in conds):
                # the metric is printed only on a sub-branch this family cannot reach
                unevaluable += 1
                worst[name] = worst.get(name, 0) + len(m.gparams)
                continue
            for g in m.unit_metrics(alg):
                total += 1
                if verify_metric_invariance(g, o)[0]:
                    preserved += 1
                else:
                    worst[name] = worst.get(name, 0) + 1
    ok = preserved == total and unevaluable == 0
    record(6, ok, f"{preserved}/{total} (instance, basis metric) pairs preserved; "
                  f"{unevaluable} instances off the metric's branch; failing rows {sorted(worst)}")
    assert ok


def test_c7_derivation_counts():
    checked, flagged = set(), set()
    for e in CAT:
        fam = e.aut_family()
        if fam is None:
            continue
        covered = sorted(set(e.automorphism.sample_algebra)) if e.samples else [0]
        for k in covered:
            t = e.tensor_at_sample(k) if e.samples else e.tensor()
            d = derivation_basis(t).dim
            checked.add(e.name)
            if d != fam.continuous_dim:
                flagged.add(e.name)
    g61 = derivation_basis(CAT.get("g_6_1").tensor_at_sample(0)).dim
    must = {"g_6_1", "g_6_91", "A_6_3"}
    documented = all(CAT.get(n).has_misprint_flag() for n in flagged)
    ok = (g61 == 10 and must <= checked - flagged and len(checked - must) >= 10 and len(flagged) <= 3
          and documented)
    record(7, ok, f"{len(checked)} entries checked, g_6_1 dim {g61}, flagged {sorted(flagged)} "
                  f"(documented={documented})")
    assert ok


def test_c8_killing_form():
    nonzero = [n for n in CAT.names("table3") if not killing_form(CAT.get(n).tensor_at_sample(0)).is_zero()]
    outside = []
    for e in CAT:
        for k, t in enumerate(sample_tensors(e)):
            vecs = [sym_to_vector(g) for g in metric_basis(t).basis]
            if not in_span(sym_to_vector(killing_form(t)), vecs)[0]:
                outside.append((e.name, k))
    ok = not nonzero and not outside
    record(8, ok, f"nonzero on table3: {nonzero}; outside metric span: {outside}")
    assert ok


def test_c9_nilpotent_exponentials():
    rng = random.Random(SEED)
    sound = [e for e in CAT if all(jacobi_check(t).ok for t in sample_tensors(e))]
    bad, used = [], []
    while len(used) < 20:
        e = rng.choice(sound)
        k = rng.randrange(max(len(e.samples), 1))
        t = e.tensor_at_sample(k) if e.samples else e.tensor()
        basis = nilpotent_derivation_basis(t)
        d = RatMatrix.zeros(6, 6)
        for b in basis:
            d = d + b.scale(draw_rational(rng))
        if d.is_zero():
            continue
        used.append(e.name)
        if not is_derivation(t, d) or not verify_automorphism(t, exp_nilpotent(d)).ok:
            bad.append(e.name)
    ok = not bad
    record(9, ok, f"20 derivations from {len(set(used))} entries, failures {bad}")
    assert ok


def perturb(o, rng):
    cells = list(o.entries)
    cells[rng.randrange(36)] += draw_rational(rng) or 1
    return RatMatrix(6, 6, cells)


def test_c10_index_and_matrix_forms_agree():
    rng = random.Random(SEED)
    with_family = [e for e in CAT if e.automorphism is not None and not e.automorphism.matrix.unknown_positions()]
    mismatches, kinds = [], {"pass": 0, "fail": 0}
    for i in range(1000):
        e = rng.choice(with_family)
        fam = e.aut_family()
        env = random_env(fam, rng, fam.samples[rng.randrange(len(fam.samples))])
        t = e.tensor(env)
        o = fam.instance(env)
        mode = i % 4
        if mode == 1:
            o = perturb(o, rng)
        elif mode == 2:
            o = RatMatrix(6, 6, [draw_rational(rng) if rng.random() < 0.3 else Fraction(0) for _ in range(36)])
        elif mode == 3:
            o = o.T
        invertible = rank(o) == 6
        a = violation_set(automorphism_residuals(t, o))
        b = violation_set(matrix_form_residuals(t, o), symmetric=True)
        pass_a, pass_b = not a and invertible, not b and invertible
        kinds["pass" if pass_a else "fail"] += 1
        if a != b or pass_a != pass_b:
            mismatches.append((e.name, i))
    ok = not mismatches and kinds["pass"] > 0 and kinds["fail"] > 0
    record(10, ok, f"1000 pairs ({kinds['pass']} pass, {kinds['fail']} fail), {len(mismatches)} disagreements")
    assert ok
