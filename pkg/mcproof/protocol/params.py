from __future__ import annotations

import logging
from dataclasses import dataclass

from ..arith import OperatorSchedule, build_schedule
from ..field import ExtContext, find_irreducible, smallest_prime_geq
from ..fo import Instance, matrix_size
from ..utils import seed_streams


log = logging.getLogger("mcproof.protocol")

# smallest modulus the soundness analysis allows (q >= 4 and prime)
MIN_MODULUS = 5


@dataclass(frozen=True)
class ProtocolParams:
    q: int
    ctx: ExtContext
    schedule: OperatorSchedule
    seed: int
    universe_size: int

    @property
    def rounds(self) -> int:
        return len(self.schedule)

    @property
    def degree_bound(self) -> int:
        return self.q**2


def round_count(k: int) -> int:
    return (k * k + 3 * k) // 2


def modulus_lower_bound(inst: Instance, q_min: int | None = None) -> int:
    return max(
        inst.structure.universe_size,
        round_count(inst.k),
        matrix_size(inst.formula.matrix),
        MIN_MODULUS,
        q_min or 0,
    )


def choose_modulus(inst: Instance, q_min: int | None = None) -> int:
    return smallest_prime_geq(modulus_lower_bound(inst, q_min))


def choose_params(inst: Instance, seed: int, q_min: int | None = None) -> ProtocolParams:
    schedule = build_schedule(inst.k, inst.formula.quantifiers)
    q = choose_modulus(inst, q_min)
    setup_rng, _, _ = seed_streams(seed)
    ctx = ExtContext(q, find_irreducible(q, setup_rng))
    log.info("Stage:setup q=%s irr=%s rounds=%s seed=%s", q, ctx.irr, len(schedule), seed)
    return ProtocolParams(q, ctx, schedule, seed, inst.structure.universe_size)
