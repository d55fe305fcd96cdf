"""The shipped catalog of six-dimensional solvable algebras: loading, lookup,
serialization and validation."""

from __future__ import annotations

import difflib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .expr import (ConstraintViolation, EvalError, Expr, ExprMatrix, ExprSyntaxError,
                   ParamEnv, eval_expr, parse_constraints, parse_expr, to_string)
from .lie import StructureTensor, jacobi_check, killing_form
from .linalg import RatMatrix, format_fraction, in_span, to_fraction
from .solvers import (NilradicalError, derivation_basis, metric_basis, nilradical_dim_report,
                      sym_to_vector)
from .verify import AutFamily, random_envs, verify_family

FAMILIES = ("table1", "table2", "table3")
EXPECTED_NILRADICAL = {"table1": 5, "table2": 4, "table3": 6}
MISPRINT_TAG = "suspected misprint"
ENV_VAR = "LIE_AUT_CATALOG"


class CatalogError(ValueError):
    pass


class UnknownEntryError(KeyError):
    def __init__(self, name: str, suggestions: Sequence[str]):
        hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
        super().__init__(f"unknown catalog entry {name!r}{hint}")
        self.name = name
        self.suggestions = list(suggestions)

    def __str__(self) -> str:
        return self.args[0]


def _rat_dict(d: dict, where: str) -> dict:
    out = {}
    for k, v in d.items():
        if not isinstance(v, str):
            raise CatalogError(f"{where}.{k}: rationals must be strings, got {type(v).__name__}")
        try:
            out[k] = to_fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise CatalogError(f"{where}.{k}: bad rational {v!r}") from exc
    return out


def _fmt_dict(d: dict) -> dict:
    return {k: format_fraction(v) for k, v in d.items()}


@dataclass(frozen=True)
class Sample:
    bindings: dict
    witnesses: dict = field(default_factory=dict)

    def all(self) -> dict:
        return {**self.bindings, **self.witnesses}


@dataclass(frozen=True)
class ParamSpec:
    name: str
    constraints: tuple = ()


@dataclass(frozen=True)
class AutSpec:
    matrix: ExprMatrix
    params: tuple
    constraints: tuple  # strings
    samples: tuple         # Sample
    sample_algebra: tuple  # entry-sample index for each sample


@dataclass(frozen=True)
class MetricFamily:
    upper: dict          # {(i, j): Expr}, 1-based, i <= j
    gparams: tuple
    conditions: tuple    # strings
    samples: tuple       # algebra bindings (dict)

    def expr_matrix(self, n: int = 6) -> ExprMatrix:
        zero = parse_expr("0")
        cells = []
        for r in range(1, n + 1):
            for c in range(1, n + 1):
                key = (min(r, c), max(r, c))
                cells.append(self.upper.get(key, zero))
        return ExprMatrix(n, n, cells)

    def checked_conditions(self) -> tuple:
        return parse_constraints(self.conditions)[0]

    def evaluate(self, algebra_bindings: dict, gvalues: Sequence) -> RatMatrix:
        from .expr import eval_matrix
        b = dict(algebra_bindings)
        b.update({g: to_fraction(v) for g, v in zip(self.gparams, gvalues)})
        return eval_matrix(self.expr_matrix(), b)

    def unit_metrics(self, algebra_bindings: dict) -> list:
        """The family at (1,0,...), (0,1,0,...), ..."""
        k = len(self.gparams)
        return [self.evaluate(algebra_bindings, [1 if i == j else 0 for j in range(k)]) for i in range(k)]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    index: int
    dim: int
    params: tuple
    samples: tuple
    brackets: tuple  # (i, j, k, Expr)
    automorphism: Optional[AutSpec]
    metrics: Optional[tuple]
    notes: tuple

    @property
    def param_names(self) -> list:
        return [p.name for p in self.params]

    def constraint_strings(self) -> list:
        return [c for p in self.params for c in p.constraints]

    def checked_constraints(self) -> tuple:
        return parse_constraints(self.constraint_strings())[0]

    def env(self, k: int = 0) -> ParamEnv:
        if not self.samples:
            return ParamEnv({}, ())
        if not 0 <= k < len(self.samples):
            raise IndexError(f"{self.name} has {len(self.samples)} sample(s); index {k} is out of range")
        return ParamEnv(self.samples[k].all(), self.checked_constraints())

    def tensor(self, env=None) -> StructureTensor:
        if env is None:
            env = self.env(0)
        bindings = env.bindings if isinstance(env, ParamEnv) else env
        consts = {}
        for i, j, k, e in self.brackets:
            consts[(i, j, k)] = consts.get((i, j, k), Fraction(0)) + eval_expr(e, bindings)
        return StructureTensor(self.dim, consts)

    def tensor_at_sample(self, k: int = 0) -> StructureTensor:
        return self.tensor(self.env(k))

    def aut_family(self) -> Optional[AutFamily]:
        a = self.automorphism
        if a is None:
            return None
        checked, docs = parse_constraints(list(a.constraints))
        full = []
        for s, alg in zip(a.samples, a.sample_algebra):
            base = self.samples[alg].all() if self.samples else {}
            full.append({**base, **s.all()})
        # the algebra's own constraints must also hold on family samples
        return AutFamily(self.name, a.matrix, tuple(a.params), checked + self.checked_constraints(),
                         docs, tuple(full))

    def has_misprint_flag(self) -> bool:
        return any(MISPRINT_TAG in n for n in self.notes)


# --- loading --------------------------------------------------------------

def default_catalog_path() -> str:
    override = os.environ.get(ENV_VAR)
    if override:
        return override
    return str(resources.files("lieaut") / "data" / "catalog.json")


def _expr(text, where: str) -> Expr:
    if not isinstance(text, str):
        raise CatalogError(f"{where}: expected an expression string")
    try:
        return parse_expr(text)
    except ExprSyntaxError as exc:
        raise CatalogError(f"{where}: {exc}") from exc


def _constraints(texts, where: str) -> tuple:
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise CatalogError(f"{where}: expected a list of strings")
    try:
        parse_constraints(texts)
    except ExprSyntaxError as exc:
        raise CatalogError(f"{where}: {exc}") from exc
    return tuple(texts)


def _samples(raw, where: str) -> tuple:
    if not isinstance(raw, list):
        raise CatalogError(f"{where}: expected a list")
    out = []
    for k, s in enumerate(raw):
        if not isinstance(s, dict) or "bindings" not in s:
            raise CatalogError(f"{where}[{k}]: sample needs 'bindings'")
        out.append(Sample(_rat_dict(s["bindings"], f"{where}[{k}].bindings"),
                          _rat_dict(s.get("witnesses", {}), f"{where}[{k}].witnesses")))
    return tuple(out)


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise CatalogError(f"{where}: missing field {key!r}")
    return d[key]


def parse_entry(raw: dict) -> CatalogEntry:
    if not isinstance(raw, dict):
        raise CatalogError("entry must be an object")
    name = _require(raw, "name", "entry")
    where = f"entry {name}"
    family = _require(raw, "family", where)
    if family not in FAMILIES:
        raise CatalogError(f"{where}.family: {family!r} is not one of {FAMILIES}")
    dim = _require(raw, "dim", where)
    index = raw.get("index", 0)
    params = []
    for p in _require(raw, "params", where):
        pname = _require(p, "name", f"{where}.params")
        params.append(ParamSpec(pname, _constraints(p.get("constraints", []), f"{where}.params.{pname}")))
    samples = _samples(raw.get("samples", []), f"{where}.samples")
    brackets = []
    for b in _require(raw, "brackets", where):
        i, j, k = b.get("i"), b.get("j"), b.get("k")
        if not all(isinstance(x, int) for x in (i, j, k)):
            raise CatalogError(f"{where}.brackets: indices must be integers")
        if not (1 <= i < j <= dim and 1 <= k <= dim):
            raise CatalogError(f"{where}.brackets: need 1 <= i < j <= {dim}, got ({i},{j},{k})")
        brackets.append((i, j, k, _expr(b.get("coeff"), f"{where}.brackets({i},{j},{k})")))
    aut = None
    if raw.get("automorphism") is not None:
        a = raw["automorphism"]
        aw = f"{where}.automorphism"
        rows = _require(a, "matrix", aw)
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise CatalogError(f"{aw}.matrix: expected {dim}x{dim}")
        cells = []
        for r, row in enumerate(rows):
            for c, cell in enumerate(row):
                cells.append(None if cell is None else _expr(cell, f"{aw}.matrix[{r + 1}][{c + 1}]"))
        raw_samples = a.get("samples", [])
        aut = AutSpec(ExprMatrix(dim, dim, cells), tuple(_require(a, "params", aw)),
                      _constraints(a.get("constraints", []), f"{aw}.constraints"),
                      _samples(raw_samples, f"{aw}.samples"),
                      tuple(s.get("algebra_sample", 0) for s in raw_samples))
        for k in aut.sample_algebra:
            if not 0 <= k < max(len(samples), 1):
                raise CatalogError(f"{aw}.samples: algebra_sample {k} out of range")
    metrics = None
    if raw.get("metrics") is not None:
        metrics = []
        for m in raw["metrics"]:
            mw = f"{where}.metrics"
            upper = {}
            for key, text in _require(m, "upper", mw).items():
                try:
                    i, j = (int(x) for x in key.strip("()").split(","))
                except ValueError:
                    raise CatalogError(f"{mw}.upper: bad key {key!r}") from None
                if not 1 <= i <= j <= dim:
                    raise CatalogError(f"{mw}.upper: key {key!r} is not in the upper triangle")
                upper[(i, j)] = _expr(text, f"{mw}.upper{key}")
            metrics.append(MetricFamily(upper, tuple(_require(m, "gparams", mw)),
                                        _constraints(m.get("conditions", []), f"{mw}.conditions"),
                                        tuple(s.bindings for s in _samples(m.get("samples", []), f"{mw}.samples"))))
        metrics = tuple(metrics)
    return CatalogEntry(name, family, index, dim, tuple(params), samples, tuple(brackets), aut,
                        metrics, tuple(raw.get("notes", [])))


class Catalog:
    def __init__(self, entries: Sequence[CatalogEntry], version: int = 1):
        self.version = version
        self.entries = list(entries)
        self._by_name = {}
        for e in self.entries:
            if e.name in self._by_name:
                raise CatalogError(f"duplicate entry name {e.name!r}")
            self._by_name[e.name] = e

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, name: str) -> CatalogEntry:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownEntryError(name, difflib.get_close_matches(name, self._by_name, n=5, cutoff=0.5)) from None

    def names(self, family: Optional[str] = None) -> list:
        return [e.name for e in self.entries if family is None or e.family == family]

    def counts(self) -> dict:
        """Printed rows and distinct classification indices per table."""
        out = {}
        for fam in FAMILIES:
            rows = [e for e in self.entries if e.family == fam]
            out[fam] = {"rows": len(rows), "algebras": len({e.index for e in rows})}
        return out


def load_catalog(path: Optional[str] = None, check_samples: bool = True) -> Catalog:
    path = path or default_catalog_path()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    return loads_catalog(text, check_samples)


def loads_catalog(text: str, check_samples: bool = True) -> Catalog:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "entries" not in raw or "version" not in raw:
        raise CatalogError("catalog must be an object with 'version' and 'entries'")
    if raw["version"] != 1:
        raise CatalogError(f"unsupported catalog version {raw['version']!r}")
    cat = Catalog([parse_entry(e) for e in raw["entries"]], raw["version"])
    if check_samples:
        for e in cat:
            check_entry_samples(e)
    return cat


def check_entry_samples(e: CatalogEntry) -> None:
    """Every shipped sample must satisfy its constraint list."""
    try:
        for k in range(len(e.samples)):
            e.env(k)
        fam = e.aut_family()
        if fam is not None:
            for s in fam.samples:
                fam.env(s)
        if e.metrics:
            for m in e.metrics:
                for s in m.samples:
                    ParamEnv(s, tuple(m.checked_conditions()) + e.checked_constraints())
    except (ConstraintViolation, EvalError) as exc:
        raise CatalogError(f"entry {e.name}: shipped sample rejected: {exc}") from exc


# --- serialization --------------------------------------------------------

def entry_to_json(e: CatalogEntry) -> dict:
    out = {
        "name": e.name,
        "family": e.family,
        "index": e.index,
        "dim": e.dim,
        "params": [{"name": p.name, "constraints": list(p.constraints)} for p in e.params],
        "samples": [{"bindings": _fmt_dict(s.bindings), "witnesses": _fmt_dict(s.witnesses)} for s in e.samples],
        "brackets": [{"i": i, "j": j, "k": k, "coeff": to_string(c)} for i, j, k, c in e.brackets],
        "automorphism": None,
        "metrics": None,
        "notes": list(e.notes),
    }
    if e.automorphism is not None:
        a = e.automorphism
        out["automorphism"] = {
            "matrix": a.matrix.to_strings(),
            "params": list(a.params),
            "constraints": list(a.constraints),
            "samples": [{"algebra_sample": alg, "bindings": _fmt_dict(s.bindings),
                         "witnesses": _fmt_dict(s.witnesses)}
                        for s, alg in zip(a.samples, a.sample_algebra)],
        }
    if e.metrics is not None:
        out["metrics"] = [{
            "upper": {f"({i},{j})": to_string(x) for (i, j), x in sorted(m.upper.items())},
            "gparams": list(m.gparams),
            "conditions": list(m.conditions),
            "samples": [{"bindings": _fmt_dict(s)} for s in m.samples],
        } for m in e.metrics]
    return out


def dumps_catalog(cat: Catalog) -> str:
    doc = {"version": cat.version, "entries": [entry_to_json(e) for e in cat.entries]}
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


# --- validation -----------------------------------------------------------

@dataclass
class EntryReport:
    name: str
    family: str
    jacobi: list = field(default_factory=list)          # per sample: True / violation count
    nilradical: list = field(default_factory=list)      # per sample: computed dim
    killing_in_span: list = field(default_factory=list)
    metric_dims: list = field(default_factory=list)
    derivation_dims: list = field(default_factory=list)
    family_dim: Optional[int] = None
    automorphism: str = "absent"                        # absent / pass / fail / skipped
    aut_failures: list = field(default_factory=list)
    identity_sample: Optional[bool] = None
    metrics: list = field(default_factory=list)         # per metric family: "contained" / detail
    problems: list = field(default_factory=list)
    info: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def is_identity(m: RatMatrix) -> bool:
    return m == RatMatrix.identity(m.rows)


def metric_containment(e: CatalogEntry, m: MetricFamily) -> list:
    """For each sample: list of coefficient vectors (None when not contained)."""
    out = []
    for s in m.samples:
        t = e.tensor(s)
        basis = metric_basis(t)
        vecs = [sym_to_vector(g) for g in basis.basis]
        per = []
        for g in m.unit_metrics(s):
            ok, coeffs = in_span(sym_to_vector(g), vecs)
            per.append(coeffs if ok else None)
        out.append(per)
    return out


def validate_entry(e: CatalogEntry, trials: int = 0, seed: int = 0) -> EntryReport:
    rep = EntryReport(e.name, e.family)
    expected = EXPECTED_NILRADICAL[e.family]
    for k in range(max(len(e.samples), 1)):
        env = e.env(k) if e.samples else ParamEnv({})
        t = e.tensor(env)
        jr = jacobi_check(t)
        rep.jacobi.append(True if jr.ok else len(jr.violations))
        if not jr.ok:
            rep.problems.append(f"jacobi fails at sample {k} ({len(jr.violations)} violations)")
            rep.nilradical.append(None)
            rep.killing_in_span.append(None)
            continue
        try:
            nd = nilradical_dim_report(t)
        except NilradicalError:
            nd = None
        rep.nilradical.append(nd)
        if nd != expected:
            rep.problems.append(f"nilradical dimension {nd} at sample {k}, expected {expected}")
        mb = metric_basis(t)
        rep.metric_dims.append(mb.dim)
        ok, _ = in_span(sym_to_vector(killing_form(t)), [sym_to_vector(g) for g in mb.basis])
        rep.killing_in_span.append(ok)
        if not ok:
            rep.problems.append(f"Killing form outside the invariant-metric span at sample {k}")
        rep.derivation_dims.append(derivation_basis(t).dim)
    fam = e.aut_family()
    if fam is not None:
        rep.family_dim = fam.continuous_dim
        unknown = fam.matrix.unknown_positions()
        if unknown:
            rep.automorphism = "skipped"
            pos = ", ".join(f"({r + 1},{c + 1})" for r, c in unknown)
            rep.problems.append(f"automorphism matrix has unknown entries at {pos}; check skipped")
        else:
            envs = [fam.env(s) for s in fam.samples]
            try:
                envs += random_envs(fam, trials, seed) if trials else []
            except Exception as exc:  # sampling failure is itself a finding
                rep.problems.append(f"random sampling failed: {exc}")
            failures = []
            rep.identity_sample = False
            for env in envs:
                t = e.tensor(env)
                o = fam.instance(env)
                if is_identity(o):
                    rep.identity_sample = True
                r = verify_family(t, fam, [env])[0]
                if not r.ok:
                    failures.append(r)
            rep.aut_failures = failures
            rep.automorphism = "fail" if failures else "pass"
            if failures:
                rep.problems.append(f"automorphism family fails at {len(failures)} of {len(envs)} points")
            if not rep.identity_sample:
                rep.problems.append("no shipped sample gives the identity matrix")
        covered = set(e.automorphism.sample_algebra) if e.samples else {0}
        for k, d in enumerate(rep.derivation_dims):
            if k not in covered:
                rep.info.append(f"family is not evaluable at algebra sample {k}; "
                                f"derivation algebra there has dimension {d}")
                continue
            if d != rep.family_dim:
                rep.problems.append(f"derivation algebra has dimension {d} at sample {k}, "
                                    f"family has {rep.family_dim} parameters")
    if e.metrics:
        for m in e.metrics:
            res = metric_containment(e, m)
            bad = sum(1 for per in res for c in per if c is None)
            rep.metrics.append("contained" if not bad else f"{bad} unit metrics outside span")
            if bad:
                rep.problems.append(f"metric family not contained in the invariant span ({bad} cases)")
    return rep


def validate_catalog(cat: Catalog, trials: int = 0, seed: int = 0) -> dict:
    reports = [validate_entry(e, trials, seed) for e in cat]
    flagged = [r.name for r in reports if r.problems]
    return {
        "counts": cat.counts(),
        "entries": reports,
        "misprints": [{"name": r.name, "problems": r.problems,
                       "documented": cat.get(r.name).has_misprint_flag()} for r in reports if r.problems],
        "flagged": flagged,
    }
