from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

import numpy as np

from ..arith import MatrixEvaluator, Operator, OpKind, UnivariatePoly, op_apply
from ..field import ExtContext, ExtElement
from ..fo import Instance
from .params import ProtocolParams, round_count


log = logging.getLogger("mcproof.protocol")


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


class RejectReason(str, Enum):
    DEGREE = "degree"
    VARIABLE = "variable-mismatch"
    CONSTANT = "constant-mismatch"
    REDUCE = "reduce-mismatch"
    FINAL = "final-mismatch"


@dataclass(frozen=True)
class RoundState:
    """Round t is about to check the claim P_{t-1}(a_1, .., a_m) = claim."""

    t: int
    asg: Mapping[int, ExtElement] = field(default_factory=dict)
    claim: ExtElement = ExtElement((1, 0, 0, 0))

    @classmethod
    def initial(cls, ctx: ExtContext) -> RoundState:
        return cls(1, {}, ctx.one)

    def values(self) -> tuple[ExtElement, ...]:
        return tuple(self.asg[v] for v in sorted(self.asg))


@dataclass(frozen=True)
class Continue:
    state: RoundState
    challenge: ExtElement
    check: ExtElement


@dataclass(frozen=True)
class Reject:
    t: int
    reason: RejectReason
    check: ExtElement | None = None


StepResult = Union[Continue, Reject]


@dataclass(frozen=True)
class FinalCheck:
    accepted: bool
    matrix_value: ExtElement


def round_check(state: RoundState, params: ProtocolParams, msg: UnivariatePoly) -> tuple[ExtElement | None, RejectReason | None]:
    """Value of Q X S compared against the claim, and the reject reason if it fails."""
    op: Operator = params.schedule[state.t - 1]
    if msg.variable != op.var:
        return None, RejectReason.VARIABLE
    if msg.degree > params.degree_bound:
        return None, RejectReason.DEGREE
    current = state.asg.get(op.var) if op.kind is OpKind.REDUCE else None
    check = op_apply(op, msg, current, params.ctx, params.universe_size)
    if check != state.claim:
        return check, RejectReason.REDUCE if op.kind is OpKind.REDUCE else RejectReason.CONSTANT
    return check, None


def advance(state: RoundState, params: ProtocolParams, msg: UnivariatePoly, challenge: ExtElement) -> RoundState:
    op = params.schedule[state.t - 1]
    asg = dict(state.asg)
    asg[op.var] = challenge
    return RoundState(state.t + 1, asg, msg.evaluate(challenge, params.ctx))


def verifier_step(state: RoundState, params: ProtocolParams, msg: UnivariatePoly, rng: np.random.Generator) -> StepResult:
    if not 1 <= state.t <= params.rounds:
        raise ValueError(f"round {state.t} outside [1, {params.rounds}]")
    check, reason = round_check(state, params, msg)
    if reason is not None:
        log.info("Stage:reject t=%s op=%s reason=%s", state.t, params.schedule[state.t - 1], reason.value)
        return Reject(state.t, reason, check)
    challenge = params.ctx.random_element(rng)
    log.debug("Stage:round t=%s op=%s deg=%s check=%s challenge=%s", state.t, params.schedule[state.t - 1], msg.degree, check, challenge)
    return Continue(advance(state, params, msg, challenge), challenge, check)


def final_check(
    state: RoundState,
    inst: Instance,
    ctx: ExtContext,
    evaluator: MatrixEvaluator | None = None,
) -> FinalCheck:
    """Accept iff the matrix polynomial at (a_1, .., a_k) equals the last claim."""
    rounds = round_count(inst.k)
    if state.t != rounds + 1:
        raise ValueError(f"final check runs at round {rounds + 1}, state is at {state.t}")
    evaluator = evaluator or MatrixEvaluator(inst.structure, ctx)
    value = evaluator.matrix_eval(inst.formula.matrix, state.values())
    return FinalCheck(value == state.claim, value)
