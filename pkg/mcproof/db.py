from __future__ import annotations

import logging

from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncEngine, AsyncSession, async_sessionmaker, create_async_engine
from sqlalchemy.orm import selectinload

from .models import Base, ExperimentRun, TrialVerdictRow
from .protocol import ExperimentReport, TrialVerdict


log = logging.getLogger("mcproof.db")


def make_engine(url: str) -> tuple[AsyncEngine, async_sessionmaker[AsyncSession]]:
    engine = create_async_engine(url, echo=False, future=True)
    return engine, async_sessionmaker(engine, expire_on_commit=False)


async def init_db(engine: AsyncEngine) -> None:
    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)


async def record_experiment(url: str, report: ExperimentReport) -> int:
    """Store one experiment run with its trial verdicts; returns the run id."""
    engine, session_factory = make_engine(url)
    try:
        await init_db(engine)
        async with session_factory() as s:
            run = ExperimentRun(
                instance_digest=report.instance_digest,
                prover=report.prover,
                q=report.q,
                rounds=report.rounds,
                master_seed=str(report.master_seed),
                trials=report.trials,
                accepts=report.accepts,
                rate=report.rate,
                bound=report.bound,
                margin=report.margin,
                passed=report.passed,
            )
            s.add(run)
            await s.flush()
            s.add_all(
                TrialVerdictRow(
                    run_id=run.id,
                    trial_index=v.trial_index,
                    seed=str(v.seed),
                    verdict=v.verdict,
                    fail_round=v.fail_round,
                    reason=v.reason,
                )
                for v in report.verdicts
            )
            await s.commit()
            log.info("Stage:db_write run_id=%s trials=%s accepts=%s", run.id, report.trials, report.accepts)
            return run.id
    finally:
        await engine.dispose()


async def load_experiment(url: str, run_id: int) -> ExperimentReport | None:
    engine, session_factory = make_engine(url)
    try:
        async with session_factory() as s:
            run = (
                await s.execute(
                    select(ExperimentRun).options(selectinload(ExperimentRun.verdicts)).where(ExperimentRun.id == run_id)
                )
            ).scalar_one_or_none()
            if run is None:
                return None
            return ExperimentReport(
                instance_digest=run.instance_digest,
                prover=run.prover,
                q=run.q,
                rounds=run.rounds,
                master_seed=int(run.master_seed),
                trials=run.trials,
                accepts=run.accepts,
                verdicts=[
                    TrialVerdict(
                        trial_index=v.trial_index,
                        seed=int(v.seed),
                        verdict=v.verdict,
                        fail_round=v.fail_round,
                        reason=v.reason,
                    )
                    for v in run.verdicts
                ],
            )
    finally:
        await engine.dispose()


__all__ = ["init_db", "load_experiment", "make_engine", "record_experiment"]
