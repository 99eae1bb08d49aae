from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from mcproof.field import ExtContext, IrreduciblePoly, find_irreducible
from mcproof.fo import And, Const, Equal, Instance, Not, Or, Rel, parse_instance


WORKED = """\
vocab E/2 C/1
universe 2
rel E: (0,1)
rel C: (1)
formula: EX x . ALL y . ( E(x,y) | x = y )
"""

# n=2, E={(0,1)}
EXISTS_EDGE = "vocab E/2\nuniverse 2\nrel E: (0,1)\nformula: EX x . EX y . E(x,y)\n"
TOTAL_EDGE = "vocab E/2\nuniverse 2\nrel E: (0,1)\nformula: ALL x . EX y . E(x,y)\n"


def make_instance(text: str) -> Instance:
    return parse_instance(text)


@pytest.fixture
def worked() -> Instance:
    return parse_instance(WORKED)


@pytest.fixture
def true_instance() -> Instance:
    return parse_instance(EXISTS_EDGE)


@pytest.fixture
def false_instance() -> Instance:
    return parse_instance(TOTAL_EDGE)


@pytest.fixture(scope="session")
def ctx2() -> ExtContext:
    # X^4 + X + 1
    return ExtContext(2, IrreduciblePoly((1, 1, 0, 0, 1)))


@pytest.fixture(scope="session")
def ctx5() -> ExtContext:
    return ExtContext(5, find_irreducible(5, np.random.default_rng(0)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def matrices_over(k: int, negation: bool = True, max_leaves: int = 6):
    """Matrices over x1..xk with vocabulary E/2; negation=False gives positive matrices only."""
    var = st.integers(1, k)
    atoms = st.one_of(
        st.builds(Equal, var, var),
        st.builds(lambda a, b: Rel("E", (a, b)), var, var),
        st.builds(Const, st.booleans()),
    )

    def extend(inner):
        options = [st.builds(And, inner, inner), st.builds(Or, inner, inner)]
        if negation:
            options.append(st.builds(Not, inner))
        return st.one_of(*options)

    return st.recursive(atoms, extend, max_leaves=max_leaves)


def binary_relations(max_n: int = 3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.frozensets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    )
