from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor

from pydantic import BaseModel, Field

from ..config import settings
from ..fo import Instance, model_check
from ..utils import derive_seed, instance_digest
from .params import choose_modulus, round_count
from .provers import ProverStrategy
from .runner import run_protocol


log = logging.getLogger("mcproof.protocol")


class ExperimentMisuseError(ValueError):
    pass


class TrialVerdict(BaseModel):
    trial_index: int
    seed: int
    verdict: str
    fail_round: int | None = None
    reason: str | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"


class ExperimentReport(BaseModel):
    instance_digest: str
    prover: str
    q: int
    rounds: int
    master_seed: int
    trials: int
    accepts: int
    verdicts: list[TrialVerdict] = Field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.accepts / self.trials

    @property
    def bound(self) -> float:
        return 1 / self.q

    @property
    def margin(self) -> float:
        # three-sigma binomial margin around the 1/q ceiling
        return 3 * math.sqrt(self.bound * (1 - self.bound) / self.trials)

    @property
    def passed(self) -> bool:
        return self.rate <= self.bound + self.margin

    def table(self) -> str:
        return "\n".join(
            [
                f"trials {self.trials}",
                f"accepts {self.accepts}",
                f"rate {self.rate:.6f}",
                f"bound {self.bound:.6f}",
                f"margin {self.margin:.6f}",
                f"result {'PASS' if self.passed else 'FAIL'}",
            ]
        )


def _run_trial(inst: Instance, strategy: str, seed: int, q_min: int | None, index: int) -> TrialVerdict:
    final = run_protocol(inst, strategy, seed, q_min).final
    return TrialVerdict(
        trial_index=index,
        seed=seed,
        verdict=final.verdict.value,
        fail_round=final.fail_round,
        reason=final.reason.value if final.reason else None,
    )


def soundness_experiment(
    inst: Instance,
    strategy: ProverStrategy | str,
    trials: int,
    master_seed: int,
    q_min: int | None = None,
    workers: int | None = None,
) -> ExperimentReport:
    """Run `trials` independent protocol runs against a false instance.

    Trial i uses derive_seed(master_seed, i); verdicts come back in trial order
    whatever the worker count.
    """
    if trials < 1:
        raise ExperimentMisuseError(f"trials must be >= 1, got {trials}")
    if model_check(inst):
        raise ExperimentMisuseError("soundness experiments need a false instance; this one is true")
    strategy = ProverStrategy(strategy)
    workers = workers or settings.experiment_workers
    seeds = [derive_seed(master_seed, i) for i in range(trials)]
    log.info("Stage:experiment prover=%s trials=%s workers=%s master_seed=%s", strategy.value, trials, workers, master_seed)

    if workers <= 1:
        verdicts = [_run_trial(inst, strategy.value, s, q_min, i) for i, s in enumerate(seeds)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_trial, inst, strategy.value, s, q_min, i) for i, s in enumerate(seeds)]
            verdicts = [f.result() for f in futures]
    verdicts.sort(key=lambda v: v.trial_index)

    report = ExperimentReport(
        instance_digest=instance_digest(inst),
        prover=strategy.value,
        q=choose_modulus(inst, q_min),
        rounds=round_count(inst.k),
        master_seed=master_seed,
        trials=trials,
        accepts=sum(v.accepted for v in verdicts),
        verdicts=verdicts,
    )
    log.info(
        "Stage:experiment_done accepts=%s/%s rate=%.4f bound=%.4f passed=%s",
        report.accepts, report.trials, report.rate, report.bound, report.passed,
    )
    return report
