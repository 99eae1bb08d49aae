from .engine import (
    Arithmetizer,
    MatrixEvaluator,
    AssignmentError,
    DegreeBoundError,
    Operator,
    OperatorSchedule,
    OpKind,
    PartialAssignment,
    atom_eval,
    build_schedule,
    chain_eval,
    eq_eval,
    matrix_eval,
    op_apply,
    restrict_univariate,
)
from .poly import InterpolationError, UnivariatePoly, format_poly, interpolate, parse_poly

__all__ = [
    "Arithmetizer",
    "MatrixEvaluator",
    "AssignmentError",
    "DegreeBoundError",
    "InterpolationError",
    "OpKind",
    "Operator",
    "OperatorSchedule",
    "PartialAssignment",
    "UnivariatePoly",
    "atom_eval",
    "build_schedule",
    "chain_eval",
    "eq_eval",
    "format_poly",
    "interpolate",
    "matrix_eval",
    "op_apply",
    "parse_poly",
    "restrict_univariate",
]
