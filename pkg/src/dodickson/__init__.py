"""Dembowski-Ostrom polynomials from Dickson polynomials of the (m+1)-th kind.

Exact arithmetic over odd-characteristic fields, symbolic Dickson polynomials,
DO classification sweeps, planarity deciders and Weil-bound utilities.
"""

__version__ = "0.1.0"

from .dickson import DicksonSpec, dickson_symbolic, frak_d, instantiate
from .do_classify import appendix_table, classify_sweep, form_witness, is_do, theorem_predicate
from .errors import DoDicksonError
from .finite_field import FieldElement, FieldSpec, dlog, find_generator, make_field, parse_field
from .planarity import (
    delta_root_search,
    is_permutation,
    is_planar_definition,
    is_planar_do,
    is_two_to_one,
    planar_set_sweep,
)
from .polynomial import BivariatePoly, PolyFamily, SparsePoly, parse, parse_bivariate, parse_family
from .weil import count_bivariate_zeros, min_e_exceeding, weil_interval, xy_zero_solutions

__all__ = [
    "__version__",
    "DicksonSpec", "dickson_symbolic", "frak_d", "instantiate",
    "appendix_table", "classify_sweep", "form_witness", "is_do", "theorem_predicate",
    "DoDicksonError",
    "FieldElement", "FieldSpec", "dlog", "find_generator", "make_field", "parse_field",
    "delta_root_search", "is_permutation", "is_planar_definition", "is_planar_do", "is_two_to_one",
    "planar_set_sweep",
    "BivariatePoly", "PolyFamily", "SparsePoly", "parse", "parse_bivariate", "parse_family",
    "count_bivariate_zeros", "min_e_exceeding", "weil_interval", "xy_zero_solutions",
]
