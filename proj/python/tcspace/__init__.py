"""Exact computations in transportation cost spaces over finite metric spaces.

Thin convenience layer over the C++ extension: structured results come back
as parsed JSON, exact rationals as "p/q" strings (Fraction-convertible).
"""

import json as _json
from fractions import Fraction

from ._core import (
    TcsError,
    dual_coefficients,
    optimal_cost,
    optimal_plan,
    pair_distortion,
    validate_metric,
)
from . import _core

__all__ = [
    "TcsError",
    "Fraction",
    "acceptance",
    "basis_distortion",
    "dual_coefficients",
    "hyper_verify",
    "laakso_space",
    "laakso_verify",
    "optimal_cost",
    "optimal_plan",
    "pair_distortion",
    "rational",
    "search_basis",
    "treeprob_report",
    "validate_metric",
]

__version__ = "0.1.0"


def rational(s):
    """Parse a "p/q" string into a Fraction."""
    return Fraction(s)


def basis_distortion(space_json, basis_json, edges_only=False, threads=0):
    return _json.loads(
        _core.basis_distortion(space_json, basis_json, edges_only, threads)
    )


def treeprob_report(space_json, basis_json, guard=9):
    return _json.loads(_core.treeprob_report(space_json, basis_json, guard))


def search_basis(space_json, budget=1000, seed=20240921):
    return _json.loads(_core.search_basis(space_json, budget, seed))


def laakso_verify(k, full_pairs=True, threads=0, guard=4):
    return _json.loads(_core.laakso_verify(k, full_pairs, threads, guard))


def laakso_space(k, guard=4):
    return _json.loads(_core.laakso_space(k, guard))


def hyper_verify(coords, metric="l1", lam="2", r="1/8", k=1, threads=0):
    return _json.loads(_core.hyper_verify(coords, metric, lam, r, k, threads))


def acceptance(seed=20240921, quick=False):
    return _json.loads(_core.acceptance(seed, quick))
