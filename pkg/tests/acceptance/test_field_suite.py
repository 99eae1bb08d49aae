from __future__ import annotations

import itertools

import numpy as np
import pytest
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_rem

from mcproof.field import ExtContext, find_irreducible, is_irreducible


pytestmark = pytest.mark.slow

SAMPLES = 10_000


@pytest.mark.parametrize("q", [5, 7, 11])
def test_axioms_frobenius_and_fermat(q):
    rng = np.random.default_rng(q)
    ctx = ExtContext(q, find_irreducible(q, rng))
    for _ in range(SAMPLES):
        a, b, c = (ctx.random_element(rng) for _ in range(3))
        assert ctx.mul(a, b) == ctx.mul(b, a)
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.pow(a, q**4) == a
        if not a.is_zero():
            assert ctx.mul(a, ctx.inv(a)) == ctx.one
        base = ctx.embed(int(rng.integers(1, q)))
        assert ctx.pow(base, q - 1) == ctx.one


def _has_small_factor(q: int, coeffs: tuple[int, ...]) -> bool:
    # highest degree first for galoistools
    f = list(reversed(coeffs))
    for degree in (1, 2):
        for low in itertools.product(range(q), repeat=degree):
            divisor = [1] + list(reversed(low))
            if gf_rem(f, divisor, q, ZZ) == []:
                return True
    return False


@pytest.mark.parametrize("q", [2, 3])
def test_rabin_matches_factor_search(q):
    for low in itertools.product(range(q), repeat=4):
        coeffs = (*low, 1)
        assert is_irreducible(q, coeffs) is not _has_small_factor(q, coeffs), coeffs
