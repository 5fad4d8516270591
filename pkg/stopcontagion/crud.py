from typing import List, Sequence

from sqlalchemy import select
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from .errors import StoreError
from .models import ExperimentRun, ResultRecord
from .schemas import ExperimentConfig, ResultRow


def create_run(db: Session, config: ExperimentConfig) -> ExperimentRun:
    try:
        run = ExperimentRun(
            experiment=config.experiment,
            root_seed=str(config.seed),
            config=config.model_dump(mode="json"),
        )
        db.add(run)
        db.commit()
        db.refresh(run)
        return run
    except SQLAlchemyError as e:
        db.rollback()
        raise StoreError(f"Error creating run: {str(e)}")


def add_rows(db: Session, run: ExperimentRun, rows: Sequence[ResultRow]) -> int:
    try:
        db.add_all(
            ResultRecord(run_id=run.id, cell=row.cell, trial=row.trial, seed=row.seed, metrics=row.metrics)
            for row in rows
        )
        db.commit()
        return len(rows)
    except SQLAlchemyError as e:
        db.rollback()
        raise StoreError(f"Error storing rows for run {run.id}: {str(e)}")


def get_run(db: Session, run_id: int) -> ExperimentRun:
    run = db.execute(select(ExperimentRun).where(ExperimentRun.id == run_id)).scalar_one_or_none()
    if run is None:
        raise StoreError(f"Run {run_id} not found.")
    return run


def list_rows(db: Session, run_id: int, limit: int = 1000, offset: int = 0) -> List[ResultRow]:
    if limit < 0 or offset < 0:
        raise StoreError("limit and offset must be non-negative integers")
    run = get_run(db, run_id)
    query = (
        select(ResultRecord)
        .where(ResultRecord.run_id == run_id)
        .order_by(ResultRecord.id)
        .offset(offset)
        .limit(limit)
    )
    records = db.execute(query).scalars().all()
    return [
        ResultRow(experiment=run.experiment, cell=r.cell, trial=r.trial, seed=r.seed, metrics=r.metrics)
        for r in records
    ]
