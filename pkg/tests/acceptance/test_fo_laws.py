from __future__ import annotations

import itertools

import numpy as np
import pytest

from mcproof.fo import Instance, Structure, dual, model_check

from .family import VOCAB, instance, matrices, prefixes


pytestmark = pytest.mark.slow


def _all_relations(n: int):
    cells = n * n
    for bits in range(1 << cells):
        yield Structure(n, VOCAB, {"E": np.array([(bits >> i) & 1 for i in range(cells)], dtype=np.uint8)})


@pytest.mark.parametrize("k, max_size", [(1, 3), (2, 3), (3, 2)])
def test_duality_on_every_small_structure(k, max_size):
    pool = matrices(k, max_size=max_size)
    for n in range(1, 4):
        for structure in _all_relations(n):
            for prefix, m in itertools.product(prefixes(k), pool):
                inst = instance(structure, prefix, m)
                negated = Instance(structure, dual(inst.formula))
                assert model_check(negated) is not model_check(inst), (n, prefix, m)
