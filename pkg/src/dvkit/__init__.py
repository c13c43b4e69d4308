"""Distinct Vectors solvers and the 3SAT to Distinct Vectors reduction."""

from .bitmatrix import BinaryMatrix, ColumnSet, difference_set, restrict, rows_pairwise_distinct
from .cnf import CnfFormula, evaluate, parse_dimacs, solve_sat_brute_force, to_dimacs
from .errors import FormatError, InfeasibleError, ResourceLimitError, StructureError
from .reduction import (
    ReductionMap,
    build_instance,
    cost_report,
    decode_solution,
    encode_solution,
    make_bundle_plan,
    pad_formula,
    sat_table,
)
from .solver import (
    DvInstance,
    SolveReport,
    lower_bound,
    solve_brute_force,
    solve_exact,
    solve_greedy,
    verify_solution,
)

__all__ = [
    "BinaryMatrix",
    "ColumnSet",
    "CnfFormula",
    "DvInstance",
    "FormatError",
    "InfeasibleError",
    "ReductionMap",
    "ResourceLimitError",
    "SolveReport",
    "StructureError",
    "build_instance",
    "cost_report",
    "decode_solution",
    "difference_set",
    "encode_solution",
    "evaluate",
    "lower_bound",
    "make_bundle_plan",
    "pad_formula",
    "parse_dimacs",
    "restrict",
    "rows_pairwise_distinct",
    "sat_table",
    "solve_brute_force",
    "solve_exact",
    "solve_greedy",
    "solve_sat_brute_force",
    "to_dimacs",
    "verify_solution",
]
