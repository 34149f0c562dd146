"""Exact dual-graph calculus for log Enriques surfaces with two boundary
curves of coefficient 6/7 on P(1,2,3).

Modules:

- ``exact_linalg``: rational determinants, definiteness, linear solves
- ``dual_graph``: weighted curve graphs, isomorphism, JSON and DOT
- ``log_pair``: crepant coefficients, blow-ups and blow-downs, pushforwards
- ``models``: the two global models, local pieces and golden graphs
- ``enumeration``: the 2**15 subsets, validity oracle, theorem tables
- ``cli``: command-line front end
"""
from .dual_graph import CurveVertex, DualGraph, Kind
from .enumeration import SubsetT, enumerate_catalog, is_valid_surface, verify_theorem
from .exact_linalg import (
    Rational,
    SymMatrix,
    det_exact,
    is_negative_definite,
    solve_exact,
)
from .log_pair import LogPair, extract_zero_discrepancy, solve_coefficients
from .models import (
    ModelCase,
    golden_graph,
    maximal_extraction,
    minimal_resolution_graph,
)

__version__ = "0.1.0"

__all__ = [
    "CurveVertex",
    "DualGraph",
    "Kind",
    "LogPair",
    "ModelCase",
    "Rational",
    "SubsetT",
    "SymMatrix",
    "det_exact",
    "enumerate_catalog",
    "extract_zero_discrepancy",
    "golden_graph",
    "is_negative_definite",
    "is_valid_surface",
    "maximal_extraction",
    "minimal_resolution_graph",
    "solve_coefficients",
    "solve_exact",
    "verify_theorem",
]
