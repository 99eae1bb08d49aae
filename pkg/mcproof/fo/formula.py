from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

from .structure import InstanceError, Structure


class Quantifier(str, Enum):
    EXISTS = "EX"
    FORALL = "ALL"

    @property
    def dual(self) -> Quantifier:
        return Quantifier.FORALL if self is Quantifier.EXISTS else Quantifier.EXISTS


@dataclass(frozen=True)
class Equal:
    left: int
    right: int


@dataclass(frozen=True)
class Rel:
    symbol: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Const:
    # ground truth value; the only way to write a sentence with an empty prefix
    value: bool


@dataclass(frozen=True)
class Not:
    body: Matrix


@dataclass(frozen=True)
class And:
    left: Matrix
    right: Matrix


@dataclass(frozen=True)
class Or:
    left: Matrix
    right: Matrix


Matrix = Union[Equal, Rel, Const, Not, And, Or]


def matrix_size(m: Matrix) -> int:
    """Node count |psi|."""
    if isinstance(m, Not):
        return 1 + matrix_size(m.body)
    if isinstance(m, (And, Or)):
        return 1 + matrix_size(m.left) + matrix_size(m.right)
    return 1


def matrix_variables(m: Matrix) -> frozenset[int]:
    if isinstance(m, Equal):
        return frozenset((m.left, m.right))
    if isinstance(m, Rel):
        return frozenset(m.args)
    if isinstance(m, Not):
        return matrix_variables(m.body)
    if isinstance(m, (And, Or)):
        return matrix_variables(m.left) | matrix_variables(m.right)
    return frozenset()


def matrix_relations(m: Matrix) -> frozenset[tuple[str, int]]:
    if isinstance(m, Rel):
        return frozenset(((m.symbol, len(m.args)),))
    if isinstance(m, Not):
        return matrix_relations(m.body)
    if isinstance(m, (And, Or)):
        return matrix_relations(m.left) | matrix_relations(m.right)
    return frozenset()


def is_positive(m: Matrix) -> bool:
    if isinstance(m, Not):
        return False
    if isinstance(m, (And, Or)):
        return is_positive(m.left) and is_positive(m.right)
    return True


@dataclass(frozen=True)
class PNFFormula:
    """Q1 x1 ... Qk xk . psi with variables numbered 1..k in prefix order."""

    prefix: tuple[tuple[Quantifier, int], ...]
    matrix: Matrix
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        variables = [v for _, v in self.prefix]
        if len(set(variables)) != len(variables):
            raise InstanceError(f"prefix quantifies a variable twice: {variables}")
        if variables != list(range(1, len(variables) + 1)):
            raise InstanceError(f"prefix variables must be numbered 1..k in order, got {variables}")
        unbound = matrix_variables(self.matrix) - set(variables)
        if unbound:
            raise InstanceError(f"unbound variables {sorted(unbound)} in the matrix")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in variables))
        if len(self.names) != len(variables):
            raise InstanceError(f"{len(self.names)} names for {len(variables)} variables")

    @property
    def k(self) -> int:
        return len(self.prefix)

    @property
    def quantifiers(self) -> tuple[Quantifier, ...]:
        return tuple(q for q, _ in self.prefix)

    def name(self, var: int) -> str:
        return self.names[var - 1]


def dual(formula: PNFFormula) -> PNFFormula:
    """Swap every quantifier and negate the matrix: the sentence of the negation."""
    prefix = tuple((q.dual, v) for q, v in formula.prefix)
    return PNFFormula(prefix, Not(formula.matrix), formula.names)


@dataclass(frozen=True)
class Instance:
    structure: Structure
    formula: PNFFormula

    def __post_init__(self) -> None:
        vocabulary = self.structure.vocabulary
        for symbol, arity in matrix_relations(self.formula.matrix):
            if symbol not in vocabulary:
                raise InstanceError(f"unknown relation symbol {symbol}")
            if vocabulary.arity(symbol) != arity:
                raise InstanceError(
                    f"arity mismatch: {symbol} has arity {vocabulary.arity(symbol)}, used with {arity} arguments"
                )

    @property
    def k(self) -> int:
        return self.formula.k

    __hash__ = object.__hash__


def eval_matrix_bool(s: Structure, m: Matrix, assignment: Mapping[int, int]) -> int:
    if isinstance(m, Equal):
        return int(_lookup(assignment, m.left) == _lookup(assignment, m.right))
    if isinstance(m, Rel):
        return s.membership(m.symbol, [_lookup(assignment, v) for v in m.args])
    if isinstance(m, Const):
        return int(m.value)
    if isinstance(m, Not):
        return 1 - eval_matrix_bool(s, m.body, assignment)
    if isinstance(m, And):
        return eval_matrix_bool(s, m.left, assignment) & eval_matrix_bool(s, m.right, assignment)
    if isinstance(m, Or):
        return eval_matrix_bool(s, m.left, assignment) | eval_matrix_bool(s, m.right, assignment)
    raise InstanceError(f"not a matrix node: {m!r}")


def _lookup(assignment: Mapping[int, int], var: int) -> int:
    try:
        return assignment[var]
    except KeyError:
        raise InstanceError(f"variable {var} is not assigned") from None
