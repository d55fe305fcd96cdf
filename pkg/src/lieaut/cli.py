"""Command-line interface: ``lieaut <subcommand> ...`` (also ``python -m lieaut``).

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on
usage or I/O errors (unknown entry, unreadable catalog, bad flag values).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .catalog import (FAMILIES, CatalogError, UnknownEntryError, dumps_catalog, load_catalog,
                      metric_containment, validate_entry)
from .expr import EvalError, ExprSyntaxError, to_string
from .lie import adjoint, jacobi_check, killing_form
from .linalg import RatMatrix, format_fraction, in_span
from .solvers import derivation_basis, metric_basis, sym_to_vector
from .verify import (SamplingError, describe_bindings, random_envs, verify_family,
                     verify_metric_invariance)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt_matrix(m: RatMatrix, indent: str = "  ") -> str:
    cells = [[format_fraction(x) for x in row] for row in m.to_rows()]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(indent + " ".join(c.rjust(width) for c in row) for row in cells)


def _json_matrix(m: RatMatrix) -> list:
    return [[format_fraction(x) for x in row] for row in m.to_rows()]


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=1, ensure_ascii=False, sort_keys=False))


def _entry(cat, name):
    try:
        return cat.get(name)
    except UnknownEntryError as exc:
        raise UsageError(str(exc))


def _sample_env(e, k):
    if k < 0 or (e.samples and k >= len(e.samples)) or (not e.samples and k != 0):
        raise UsageError(f"{e.name} has {max(len(e.samples), 1)} sample(s); --sample {k} is out of range")
    return e.env(k)


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def _header(e, env) -> str:
    b = describe_bindings(env.bindings)
    params = ", ".join(f"{k}={v}" for k, v in b.items()) or "no parameters"
    return f"{e.name} ({e.family}) at {params}"


# --- subcommands ----------------------------------------------------------

def cmd_list(cat, args) -> int:
    fams = [args.family] if args.family else list(FAMILIES)
    counts = cat.counts()
    for f in fams:
        for name in cat.names(f):
            print(name)
    for f in fams:
        c = counts[f]
        print(f"# {f}: {c['algebras']} algebras, {c['rows']} rows")
    return EXIT_OK


def cmd_show(cat, args) -> int:
    e = _entry(cat, args.name)
    print(f"{e.name}  family={e.family}  index={e.index}  dim={e.dim}")
    if e.params:
        print("parameters:")
        for p in e.params:
            cons = "; ".join(p.constraints)
            print(f"  {p.name}" + (f"  [{cons}]" if cons else ""))
    for k, s in enumerate(e.samples):
        b = ", ".join(f"{n}={v}" for n, v in describe_bindings(s.all()).items())
        print(f"sample {k}: {b or '-'}")
    print("brackets:")
    for i, j, k, c in e.brackets:
        print(f"  f({i},{j})^{k} = {to_string(c)}")
    a = e.automorphism
    if a is not None:
        print("automorphism family (row i is the image of X_i):")
        for row in a.matrix.to_strings():
            print("  [" + ", ".join("?" if c is None else c for c in row) + "]")
        print(f"  parameters: {', '.join(a.params)}")
        for c in a.constraints:
            print(f"  constraint: {c}")
        print(f"  shipped samples: {len(a.samples)}")
    for m in e.metrics or ():
        print(f"metric family in {', '.join(m.gparams)}:")
        for (i, j), v in sorted(m.upper.items()):
            print(f"  g({i},{j}) = {to_string(v)}")
        for c in m.conditions:
            print(f"  condition: {c}")
    for n in e.notes:
        print(f"note: {n}")
    return EXIT_OK


def cmd_jacobi(cat, args) -> int:
    e = _entry(cat, args.name)
    env = _sample_env(e, args.sample)
    rep = jacobi_check(e.tensor(env))
    print(_header(e, env))
    if rep.ok:
        print("jacobi: ok")
        return EXIT_OK
    print(f"jacobi: {len(rep.violations)} violation(s)")
    for i, j, k, l, v in rep.violations:
        print(f"  cycle ({i},{j},{k}) component {l}: {format_fraction(v)}")
    return EXIT_FAIL


def cmd_adjoint(cat, args) -> int:
    e = _entry(cat, args.name)
    env = _sample_env(e, args.sample)
    ad = adjoint(e.tensor(env))
    print(_header(e, env))
    for i, m in enumerate(ad.chi, 1):
        print(f"chi_{i}:")
        print(_fmt_matrix(m))
    for k, m in enumerate(ad.y, 1):
        print(f"Y^{k}:")
        print(_fmt_matrix(m))
    return EXIT_OK


def cmd_killing(cat, args) -> int:
    e = _entry(cat, args.name)
    env = _sample_env(e, args.sample)
    t = e.tensor(env)
    k = killing_form(t)
    basis = metric_basis(t)
    ok, coeffs = in_span(sym_to_vector(k), [sym_to_vector(g) for g in basis.basis])
    print(_header(e, env))
    print("killing form:")
    print(_fmt_matrix(k))
    print(f"zero: {'yes' if k.is_zero() else 'no'}")
    if ok:
        print("in metric span: yes, coefficients " + " ".join(format_fraction(c) for c in coeffs))
        return EXIT_OK
    print("in metric span: no")
    return EXIT_FAIL


def _covers(m, alg: dict) -> bool:
    """Whether the algebra bindings are one of the metric family's sample points."""
    return any(all(p in s and s[p] == v for p, v in alg.items()) for s in m.samples)


def _containment_at(e, env, basis) -> list:
    """Per metric family: coefficient lists for the unit metrics (None if outside)."""
    out = []
    alg = {p: env.bindings[p] for p in e.param_names}
    vecs = [sym_to_vector(g) for g in basis.basis]
    for m in e.metrics or ():
        if not _covers(m, alg):
            continue
        per = []
        for g in m.unit_metrics(alg):
            ok, coeffs = in_span(sym_to_vector(g), vecs)
            per.append(coeffs if ok else None)
        out.append((m, per))
    return out


def cmd_metric_basis(cat, args) -> int:
    e = _entry(cat, args.name)
    env = _sample_env(e, args.sample)
    basis = metric_basis(e.tensor(env))
    contained = _containment_at(e, env, basis)
    failed = any(c is None for _, per in contained for c in per)
    if args.json:
        _emit_json({
            "name": e.name,
            "sample": args.sample,
            "bindings": describe_bindings(env.bindings),
            "dim": basis.dim,
            "basis": [_json_matrix(g) for g in basis.basis],
            "nondegenerate": basis.generic_nondegenerate(),
            "families": [{
                "gparams": list(m.gparams),
                "coefficients": [None if c is None else [format_fraction(x) for x in c] for c in per],
            } for m, per in contained],
        })
    else:
        print(_header(e, env))
        print(f"dimension: {basis.dim}")
        print(f"nondegenerate member: {'yes' if basis.generic_nondegenerate() else 'no'}")
        for n, g in enumerate(basis.basis, 1):
            print(f"basis {n}:")
            print(_fmt_matrix(g))
        for m, per in contained:
            for gname, c in zip(m.gparams, per):
                shown = "outside the span" if c is None else " ".join(format_fraction(x) for x in c)
                print(f"family at {gname}=1: {shown}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_derivations(cat, args) -> int:
    e = _entry(cat, args.name)
    env = _sample_env(e, args.sample)
    db = derivation_basis(e.tensor(env))
    print(_header(e, env))
    print(f"dimension: {db.dim}")
    for n, d in enumerate(db.basis, 1):
        print(f"D_{n}:")
        print(_fmt_matrix(d))
    fam = e.aut_family()
    if fam is not None:
        print(f"automorphism family parameters (continuous): {fam.continuous_dim}")
        if fam.continuous_dim != db.dim:
            print("mismatch between derivation dimension and family parameter count")
            return EXIT_FAIL
    return EXIT_OK


def _family_envs(e, fam, trials, seed):
    envs = [fam.env(s) for s in fam.samples]
    if trials:
        envs += random_envs(fam, trials, seed)
    return envs


def cmd_verify_aut(cat, args) -> int:
    e = _entry(cat, args.name)
    fam = e.aut_family()
    if fam is None:
        print(f"{e.name}: no automorphism family is encoded")
        return EXIT_FAIL
    unknown = fam.matrix.unknown_positions()
    if unknown:
        pos = ", ".join(f"({r + 1},{c + 1})" for r, c in unknown)
        print(f"{e.name}: automorphism matrix has unknown entries at {pos}; not verifiable")
        return EXIT_FAIL
    try:
        envs = _family_envs(e, fam, args.trials, args.seed)
    except SamplingError as exc:
        print(f"{e.name}: {exc}")
        return EXIT_FAIL
    failures = 0
    for n, env in enumerate(envs):
        rep = verify_family(e.tensor(env), fam, [env])[0]
        tag = "sample" if n < len(fam.samples) else "trial"
        if rep.ok:
            if args.verbose:
                print(f"{tag} {n}: pass")
            continue
        failures += 1
        detail = rep.note or ", ".join(f"({l},{m},{k})={format_fraction(v)}"
                                       for l, m, k, v in rep.residuals[:6])
        print(f"{tag} {n}: fail at {env.describe()}: {detail}")
    print(f"{e.name}: {len(envs) - failures}/{len(envs)} instances pass")
    return EXIT_FAIL if failures else EXIT_OK


def cmd_verify_metric(cat, args) -> int:
    e = _entry(cat, args.name)
    if not e.metrics:
        print(f"{e.name}: no metric family is encoded")
        return EXIT_FAIL
    bad = 0
    res = [metric_containment(e, m) for m in e.metrics]
    for m, per_sample in zip(e.metrics, res):
        for s, per in zip(m.samples, per_sample):
            where = ", ".join(f"{k}={v}" for k, v in describe_bindings(s).items()) or "-"
            for gname, c in zip(m.gparams, per):
                if c is None:
                    bad += 1
                    print(f"containment at {where}, {gname}=1: outside the span")
                elif args.verbose:
                    print(f"containment at {where}, {gname}=1: " + " ".join(format_fraction(x) for x in c))
    print(f"containment: {'ok' if not bad else f'{bad} failure(s)'}")
    fam = e.aut_family()
    iso_bad = iso_total = 0
    if fam is not None and not fam.matrix.unknown_positions():
        try:
            envs = _family_envs(e, fam, args.trials, args.seed)
        except SamplingError as exc:
            print(f"{e.name}: {exc}")
            return EXIT_FAIL
        for env in envs:
            alg = {p: env.bindings[p] for p in e.param_names}
            o = fam.instance(env)
            for m in e.metrics:
                if not _covers(m, alg):
                    continue
                for gname, g in zip(m.gparams, m.unit_metrics(alg)):
                    iso_total += 1
                    ok, _ = verify_metric_invariance(g, o)
                    if not ok:
                        iso_bad += 1
                        if args.verbose:
                            print(f"isometry fails for {gname}=1 at {env.describe()}")
        print(f"isometry: {iso_total - iso_bad}/{iso_total} (automorphism, unit metric) pairs preserved")
    return EXIT_FAIL if bad or iso_bad else EXIT_OK


def _validate_one(payload):
    path, name = payload
    cat = load_catalog(path, check_samples=False)
    return validate_entry(cat.get(name))


def _report_json(rep, documented) -> dict:
    return {
        "name": rep.name,
        "family": rep.family,
        "jacobi": rep.jacobi,
        "nilradical": rep.nilradical,
        "killing_in_span": rep.killing_in_span,
        "metric_dims": rep.metric_dims,
        "derivation_dims": rep.derivation_dims,
        "family_dim": rep.family_dim,
        "automorphism": rep.automorphism,
        "problems": rep.problems,
        "info": rep.info,
        "documented": documented,
    }


def cmd_validate_all(cat, args) -> int:
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map() keeps catalog order whatever the completion order
            reports = list(pool.map(_validate_one, [(args.catalog, e.name) for e in cat]))
    else:
        reports = [validate_entry(e) for e in cat]
    undocumented = [r for r in reports if r.problems and not cat.get(r.name).has_misprint_flag()]
    if args.json:
        _emit_json({
            "counts": cat.counts(),
            "entries": [_report_json(r, cat.get(r.name).has_misprint_flag()) for r in reports],
            "flagged": [r.name for r in reports if r.problems],
            "undocumented": [r.name for r in undocumented],
        })
    else:
        for r in reports:
            status = "ok" if not r.problems else ("flagged" if cat.get(r.name).has_misprint_flag() else "FAIL")
            print(f"{r.name}: {status}")
            for p in r.problems:
                print(f"  {p}")
        flagged = sum(1 for r in reports if r.problems)
        print(f"# {len(reports)} entries, {flagged} flagged, {len(undocumented)} undocumented failures")
    return EXIT_FAIL if undocumented else EXIT_OK


def _csv_rows(cat):
    yield ["name", "family", "kind", "index", "bindings"] + [f"r{r}c{c}" for r in range(1, 7) for c in range(1, 7)]
    for e in cat:
        env = e.env(0)
        b = " ".join(f"{k}={v}" for k, v in describe_bindings(env.bindings).items())
        if e.automorphism is not None:
            cells = [c if c is not None else "" for row in e.automorphism.matrix.to_strings() for c in row]
            yield [e.name, e.family, "automorphism", "", ""] + cells
        t = e.tensor(env)
        if jacobi_check(t).ok:
            k = killing_form(t)
            yield [e.name, e.family, "killing", "", b] + [format_fraction(x) for x in k.entries]
            for n, g in enumerate(metric_basis(t).basis, 1):
                yield [e.name, e.family, "metric_basis", str(n), b] + [format_fraction(x) for x in g.entries]


def cmd_export(cat, args) -> int:
    if args.format == "json":
        text = dumps_catalog(cat)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in _csv_rows(cat):
            w.writerow(row)
        text = buf.getvalue()
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}")
    print(f"wrote {args.out}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lieaut",
                                description="Automorphism groups and invariant metrics of "
                                            "six-dimensional solvable real Lie algebras.")
    p.add_argument("--catalog", help="catalog JSON (default: $LIE_AUT_CATALOG or the bundled file)")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("list", help="list catalog entries")
    s.add_argument("--family", choices=FAMILIES)
    s.set_defaults(func=cmd_list)

    s = sub.add_parser("show", help="print one entry")
    s.add_argument("name")
    s.set_defaults(func=cmd_show)

    for name, func, hlp in (("jacobi", cmd_jacobi, "check the Jacobi identity"),
                            ("adjoint", cmd_adjoint, "print the adjoint matrices"),
                            ("killing", cmd_killing, "Killing form and its metric-span membership"),
                            ("metric-basis", cmd_metric_basis, "basis of ad-invariant symmetric forms"),
                            ("derivations", cmd_derivations, "basis of the derivation algebra")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("name")
        s.add_argument("--sample", type=_nonneg, default=0, metavar="K")
        if name == "metric-basis":
            s.add_argument("--json", action="store_true")
        s.set_defaults(func=func)

    for name, func, hlp in (("verify-aut", cmd_verify_aut, "verify the automorphism family"),
                            ("verify-metric", cmd_verify_metric, "check metric containment and isometries")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("name")
        s.add_argument("--trials", type=_nonneg, default=20, metavar="T")
        s.add_argument("--seed", type=int, default=0, metavar="S")
        s.add_argument("-v", "--verbose", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("validate-all", help="validate the whole catalog")
    s.add_argument("--json", action="store_true")
    s.add_argument("--jobs", type=_nonneg, default=1, metavar="N")
    s.set_defaults(func=cmd_validate_all)

    s = sub.add_parser("export", help="write the catalog as JSON or CSV")
    s.add_argument("--format", choices=("json", "csv"), required=True)
    s.add_argument("--out", required=True, metavar="PATH")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cat = load_catalog(args.catalog)
    except (OSError, CatalogError, ValueError) as exc:
        print(f"error: cannot load catalog: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(cat, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvalError, ExprSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
