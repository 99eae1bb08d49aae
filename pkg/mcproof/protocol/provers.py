from __future__ import annotations

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from ..arith import Arithmetizer, Operator, OpKind, UnivariatePoly, eq_eval, interpolate
from ..field import ExtContext, ExtElement
from ..fo import Instance
from .params import ProtocolParams
from .verifier import RoundState, round_check


log = logging.getLogger("mcproof.protocol")


class ProverStrategy(str, Enum):
    HONEST = "honest"
    ROUND_FIXING = "round-fixing"
    RANDOM_CONSISTENT = "random-consistent"


class Prover:
    """Produces the round-t message. Adversarial strategies only deviate when the current claim is false."""

    def __init__(self, strategy: ProverStrategy, arith: Arithmetizer, params: ProtocolParams, rng: np.random.Generator | None = None) -> None:
        self.strategy = ProverStrategy(strategy)
        self.arith = arith
        self.params = params
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def message(self, state: RoundState) -> UnivariatePoly:
        op = self.params.schedule[state.t - 1]
        honest = self.arith.restrict_univariate(state.t, state.asg, op.var)
        if self.strategy is ProverStrategy.HONEST:
            return honest
        _, reason = round_check(state, self.params, honest)
        if reason is None:
            return honest

        ctx = self.params.ctx
        xs = list(ctx.elements(self.params.degree_bound + 1))
        if self.strategy is ProverStrategy.ROUND_FIXING:
            values = [honest.evaluate(x, ctx) for x in xs]
        else:
            values = [ctx.random_element(self.rng) for _ in xs]
        current = state.asg.get(op.var) if op.kind is OpKind.REDUCE else None
        fixed = fix_anchor(op, values, state.claim, current, ctx, self.params.universe_size)
        if fixed is None:
            log.debug("Stage:anchor_infeasible t=%s op=%s", state.t, op)
            return honest
        return interpolate(zip(xs, fixed), ctx, variable=op.var)


def fix_anchor(
    op: Operator,
    values: Sequence[ExtElement],
    claim: ExtElement,
    current: ExtElement | None,
    ctx: ExtContext,
    universe_size: int,
) -> list[ExtElement] | None:
    """Change the value at one universe point z0 so the round check equals claim.

    values[z] is the message at embed(z) for z < universe_size. The check is affine in
    values[z0]; z0 is the first point whose coefficient is nonzero. None if there is none.
    """
    for z0 in range(universe_size):
        others = [values[z] for z in range(universe_size) if z != z0]
        if op.kind is OpKind.FORALL:
            weight = ctx.prod(others)
            if weight.is_zero():
                continue
            anchor = ctx.div(claim, weight)
        elif op.kind is OpKind.EXISTS:
            weight = ctx.prod(ctx.sub(ctx.one, v) for v in others)
            if weight.is_zero():
                continue
            anchor = ctx.sub(ctx.one, ctx.div(ctx.sub(ctx.one, claim), weight))
        else:
            weights = [eq_eval(current, ctx.embed(z), ctx) for z in range(universe_size)]
            if weights[z0].is_zero():
                continue
            rest = ctx.sum(ctx.mul(weights[z], values[z]) for z in range(universe_size) if z != z0)
            anchor = ctx.div(ctx.sub(claim, rest), weights[z0])
        fixed = list(values)
        fixed[z0] = anchor
        return fixed
    return None


def prover_message(
    strategy: ProverStrategy,
    state: RoundState,
    inst: Instance,
    params: ProtocolParams,
    rng: np.random.Generator | None = None,
) -> UnivariatePoly:
    arith = Arithmetizer(inst, params.ctx, params.schedule)
    return Prover(strategy, arith, params, rng).message(state)
