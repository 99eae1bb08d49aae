from .gf import (
    EXT_DEGREE,
    ContextMismatchError,
    ExtContext,
    ExtElement,
    FieldDivisionError,
    FieldError,
    IrreduciblePoly,
    embed,
    ext_inv,
    ext_mul,
    find_irreducible,
    format_element,
    is_irreducible,
    parse_element,
    parse_irreducible,
)
from .primes import is_prime, smallest_prime_geq

__all__ = [
    "EXT_DEGREE",
    "ContextMismatchError",
    "ExtContext",
    "ExtElement",
    "FieldDivisionError",
    "FieldError",
    "IrreduciblePoly",
    "embed",
    "ext_inv",
    "ext_mul",
    "find_irreducible",
    "format_element",
    "is_irreducible",
    "is_prime",
    "parse_element",
    "parse_irreducible",
    "smallest_prime_geq",
]
