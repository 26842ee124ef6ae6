"""Weighted Davenport constants over Z_n for Jacobi-symbol weight sets."""

__version__ = "0.1.0"
ENGINE_VERSION = "zerosum-1"

from .errors import BudgetExceeded, InvalidInput, InvariantError, ZeroSumError
from .residue import FactoredModulus, crt_combine, factor, jacobi, legendre, natural_map
from .weights import WeightSet, build, parse_spec, image_under_map, index_in_units, orbit_canon, w_count
from .engine import Seq, SumReach, coset_sumset, has_zero_sum_subseq, is_zero_sum_seq, reach, reach_by_length
from .search import Budget, ConstantRecord, canonical_chain_witness, dadd_witness, davenport, e_constant
from .extremal import ExtremalReport, canonical_equiv_form, check_su, classify_extremal, enumerate_extremal

__all__ = [
    "ENGINE_VERSION", "ZeroSumError", "InvalidInput", "BudgetExceeded", "InvariantError",
    "FactoredModulus", "factor", "natural_map", "crt_combine", "legendre", "jacobi",
    "WeightSet", "build", "parse_spec", "image_under_map", "index_in_units", "orbit_canon", "w_count",
    "Seq", "SumReach", "reach", "has_zero_sum_subseq", "is_zero_sum_seq", "reach_by_length", "coset_sumset",
    "Budget", "ConstantRecord", "davenport", "e_constant", "canonical_chain_witness", "dadd_witness",
    "ExtremalReport", "canonical_equiv_form", "enumerate_extremal", "classify_extremal", "check_su",
]
