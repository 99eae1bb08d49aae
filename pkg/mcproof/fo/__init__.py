from .formula import (
    And,
    Const,
    Equal,
    Instance,
    Matrix,
    Not,
    Or,
    PNFFormula,
    Quantifier,
    Rel,
    dual,
    eval_matrix_bool,
    is_positive,
    matrix_size,
    matrix_variables,
)
from .oracle import model_check
from .parser import ParseError, format_instance, format_matrix, parse_instance
from .structure import InstanceError, Structure, Vocabulary, membership, structure_size

__all__ = [
    "And",
    "Const",
    "Equal",
    "Instance",
    "InstanceError",
    "Matrix",
    "Not",
    "Or",
    "PNFFormula",
    "ParseError",
    "Quantifier",
    "Rel",
    "Structure",
    "Vocabulary",
    "dual",
    "eval_matrix_bool",
    "format_instance",
    "format_matrix",
    "is_positive",
    "matrix_size",
    "matrix_variables",
    "membership",
    "model_check",
    "parse_instance",
    "structure_size",
]
