from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..arith import Arithmetizer, build_schedule
from ..field import ExtContext, FieldError, find_irreducible
from ..fo import Instance
from ..utils import instance_digest, seed_streams
from .params import ProtocolParams, choose_params, modulus_lower_bound
from .provers import Prover, ProverStrategy
from .transcript import (
    DigestMismatchError,
    FinalRecord,
    RoundRecord,
    Transcript,
    TranscriptFormatError,
    TranscriptHeader,
)
from .verifier import Continue, RejectReason, RoundState, Verdict, advance, final_check, round_check, verifier_step


log = logging.getLogger("mcproof.protocol")


def run_protocol(inst: Instance, strategy: ProverStrategy | str, seed: int, q_min: int | None = None) -> Transcript:
    params = choose_params(inst, seed, q_min)
    _, verifier_rng, prover_rng = seed_streams(seed)
    arith = Arithmetizer(inst, params.ctx, params.schedule)
    prover = Prover(ProverStrategy(strategy), arith, params, prover_rng)

    state = RoundState.initial(params.ctx)
    records: list[RoundRecord] = []
    final: FinalRecord | None = None
    for t in range(1, params.rounds + 1):
        op = params.schedule[t - 1]
        msg = prover.message(state)
        step = verifier_step(state, params, msg, verifier_rng)
        if isinstance(step, Continue):
            records.append(RoundRecord(t, op, msg, step.check, step.challenge, step.state.claim))
            state = step.state
            continue
        records.append(RoundRecord(t, op, msg, step.check, None, None))
        final = FinalRecord(None, Verdict.REJECT, t, step.reason)
        break
    if final is None:
        fc = final_check(state, inst, arith.ctx, arith)
        if fc.accepted:
            final = FinalRecord(fc.matrix_value, Verdict.ACCEPT)
        else:
            final = FinalRecord(fc.matrix_value, Verdict.REJECT, params.rounds + 1, RejectReason.FINAL)

    log.info(
        "Stage:verdict prover=%s seed=%s q=%s rounds=%s/%s verdict=%s",
        prover.strategy.value, seed, params.q, len(records), params.rounds, final.verdict.value,
    )
    header = TranscriptHeader(params.q, params.ctx.irr, seed, params.rounds, instance_digest(inst))
    return Transcript(header, tuple(records), final)


@dataclass
class VerificationReport:
    verdict: Verdict
    reproduced: bool
    fail_round: int | None = None
    reason: RejectReason | None = None
    challenge_divergence: bool = False
    diagnostics: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.reproduced and not self.diagnostics


def verify_transcript(inst: Instance, tr: Transcript) -> VerificationReport:
    """Replay every algebraic check with the recorded challenges and compare the verdict."""
    h = tr.header
    if h.instance_digest != instance_digest(inst):
        raise DigestMismatchError("transcript was produced for a different instance")
    schedule = build_schedule(inst.k, inst.formula.quantifiers)
    if h.rounds != len(schedule):
        raise TranscriptFormatError(f"header declares {h.rounds} rounds, the instance needs {len(schedule)}")
    try:
        ctx = ExtContext(h.q, h.irr)
    except FieldError as e:
        raise TranscriptFormatError(f"bad field parameters: {e}") from None

    diagnostics: list[str] = []
    if not tr.checksum_ok:
        diagnostics.append("checksum mismatch: transcript bytes were altered")
    if h.q < modulus_lower_bound(inst):
        diagnostics.append(f"q={h.q} is below the lower bound {modulus_lower_bound(inst)}")

    verifier_rng = None
    divergence = False
    if h.seed is not None:
        setup_rng, verifier_rng, _ = seed_streams(h.seed)
        if find_irreducible(h.q, setup_rng) != h.irr:
            divergence = True
            diagnostics.append("irreducible polynomial does not follow from the seed")

    params = ProtocolParams(h.q, ctx, schedule, h.seed or 0, inst.structure.universe_size)
    arith = Arithmetizer(inst, ctx, schedule)
    state = RoundState.initial(ctx)
    outcome: tuple[Verdict, int | None, RejectReason | None] | None = None

    for r in tr.rounds:
        if r.op != schedule[r.t - 1]:
            raise TranscriptFormatError(f"round {r.t} records op {r.op}, the schedule has {schedule[r.t - 1]}")
        check, reason = round_check(state, params, r.msg)
        if check != r.check:
            diagnostics.append(f"round {r.t}: recorded check value differs from the replay")
        if reason is not None:
            outcome = (Verdict.REJECT, r.t, reason)
            if r.challenge is not None:
                diagnostics.append(f"round {r.t}: replay rejects ({reason.value}) but the transcript continues")
            break
        if r.challenge is None:
            diagnostics.append(f"round {r.t}: replay passes but the transcript rejects")
            outcome = (Verdict.ACCEPT, None, None)
            break
        if verifier_rng is not None and ctx.random_element(verifier_rng) != r.challenge:
            divergence = True
            diagnostics.append(f"round {r.t}: challenge does not follow from the seed")
        state = advance(state, params, r.msg, r.challenge)
        if state.claim != r.claim:
            diagnostics.append(f"round {r.t}: recorded claim differs from S(challenge)")

    if outcome is None:
        if state.t != len(schedule) + 1:
            raise TranscriptFormatError(f"transcript stops after round {state.t - 1} of {len(schedule)}")
        fc = final_check(state, inst, arith.ctx, arith)
        if tr.final.matrix != fc.matrix_value:
            diagnostics.append("final matrix value differs from the replay")
        if fc.accepted:
            outcome = (Verdict.ACCEPT, None, None)
        else:
            outcome = (Verdict.REJECT, len(schedule) + 1, RejectReason.FINAL)

    verdict, fail_round, reason = outcome
    reproduced = (verdict, fail_round, reason) == (tr.final.verdict, tr.final.fail_round, tr.final.reason)
    if not reproduced:
        diagnostics.append(f"replayed verdict {verdict.value} does not match the recorded {tr.final.verdict.value}")
    return VerificationReport(verdict, reproduced, fail_round, reason, divergence, diagnostics)
