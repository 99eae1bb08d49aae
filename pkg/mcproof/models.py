from __future__ import annotations

from datetime import datetime
from typing import Optional

from sqlalchemy import Boolean, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    pass


class ExperimentRun(Base):
    __tablename__ = "experiment_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    instance_digest: Mapped[str] = mapped_column(String(64), index=True)
    prover: Mapped[str] = mapped_column(String(32))
    q: Mapped[int] = mapped_column(Integer)
    rounds: Mapped[int] = mapped_column(Integer)
    # u64 seeds overflow signed BIGINT, stored as decimal text
    master_seed: Mapped[str] = mapped_column(String(20))
    trials: Mapped[int] = mapped_column(Integer)
    accepts: Mapped[int] = mapped_column(Integer)
    rate: Mapped[float] = mapped_column(Float)
    bound: Mapped[float] = mapped_column(Float)
    margin: Mapped[float] = mapped_column(Float)
    passed: Mapped[bool] = mapped_column(Boolean, index=True)
    created_at: Mapped[datetime] = mapped_column(DateTime, default=datetime.utcnow)

    verdicts: Mapped[list[TrialVerdictRow]] = relationship(  # noqa: F821
        "TrialVerdictRow", back_populates="run", order_by="TrialVerdictRow.trial_index"
    )


class TrialVerdictRow(Base):
    __tablename__ = "trial_verdicts"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("experiment_runs.id"), index=True)
    trial_index: Mapped[int] = mapped_column(Integer)
    seed: Mapped[str] = mapped_column(String(20))
    verdict: Mapped[str] = mapped_column(String(8))
    fail_round: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)
    reason: Mapped[Optional[str]] = mapped_column(String(32), nullable=True)

    run: Mapped[ExperimentRun] = relationship("ExperimentRun", back_populates="verdicts")
