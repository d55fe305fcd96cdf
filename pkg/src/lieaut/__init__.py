"""Exact computations on six-dimensional solvable real Lie algebras:
structure constants, derivations, ad-invariant metrics and automorphism
families, with a bundled catalog."""

from .catalog import Catalog, CatalogEntry, load_catalog, validate_catalog
from .expr import ParamEnv, eval_expr, parse_expr, to_string
from .lie import StructureTensor, adjoint, jacobi_check, killing_form
from .linalg import RatMatrix, null_space, rank, rref
from .solvers import derivation_basis, exp_nilpotent, metric_basis, nilradical
from .verify import AutFamily, verify_automorphism, verify_family, verify_metric_invariance

__all__ = [
    "AutFamily", "Catalog", "CatalogEntry", "ParamEnv", "RatMatrix", "StructureTensor",
    "adjoint", "derivation_basis", "eval_expr", "exp_nilpotent", "jacobi_check", "killing_form",
    "load_catalog", "metric_basis", "nilradical", "null_space", "parse_expr", "rank", "rref",
    "to_string", "validate_catalog", "verify_automorphism", "verify_family", "verify_metric_invariance",
]
