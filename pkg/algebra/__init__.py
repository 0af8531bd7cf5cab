"""
Algebra over finite fields: field arithmetic, sparse polynomials, the
polynomial text parser and dense linear algebra.
"""

from .gf import FieldCtx, FieldElement, canon_rep, enumerate_field, field_new, parse_field_spec
from .mvpoly import Decomposition, MvPoly, compose_univariate, variable_names
from .poly_parser import infer_nvars, parse
from .linalg import MatrixGF

__all__ = [
    "FieldCtx",
    "FieldElement",
    "canon_rep",
    "enumerate_field",
    "field_new",
    "parse_field_spec",
    "Decomposition",
    "MvPoly",
    "compose_univariate",
    "variable_names",
    "infer_nvars",
    "parse",
    "MatrixGF",
]
